#include "xmlgram/env.hpp"

namespace xmlgram {

const Value* Env::find(std::string_view name) const {
  auto it = bindings_.find(name);
  return it == bindings_.end() ? nullptr : &it->second;
}

void Env::bind(std::string name, Value value) {
  bindings_.insert_or_assign(std::move(name), std::move(value));
}

Env Env::extended(std::string name, Value value) const {
  Env out = *this;
  out.bind(std::move(name), std::move(value));
  return out;
}

Env Env::restricted(const NameSet& names) const {
  Env out;
  for (const auto& [k, v] : bindings_) {
    if (names.contains(k)) out.bindings_.emplace(k, v);
  }
  return out;
}

Env envMerge(const Env& a, const Env& b) {
  Env out = a;
  for (const auto& [k, v] : b.bindings()) out.bind(k, v);
  return out;
}

}  // namespace xmlgram
