#pragma once

#include <functional>
#include <map>
#include <set>
#include <string>
#include <string_view>

#include "xmlgram/value.hpp"

namespace xmlgram {

using NameSet = std::set<std::string, std::less<>>;

/// Variable environment: a finite map from names to values.
class Env {
 public:
  using Map = std::map<std::string, Value, std::less<>>;

  Env() = default;
  explicit Env(Map bindings) : bindings_(std::move(bindings)) {}

  const Value* find(std::string_view name) const;
  bool contains(std::string_view name) const { return find(name) != nullptr; }

  /// In-place extension; an existing binding for `name` is replaced.
  void bind(std::string name, Value value);
  /// rho[name -> value]
  Env extended(std::string name, Value value) const;
  /// Restriction of the domain to `names`.
  Env restricted(const NameSet& names) const;

  const Map& bindings() const { return bindings_; }
  std::size_t size() const { return bindings_.size(); }
  bool empty() const { return bindings_.empty(); }

  bool operator==(const Env&) const = default;

 private:
  Map bindings_;
};

/// a (+) b: union of both domains; where both bind a name, b wins.
Env envMerge(const Env& a, const Env& b);

}  // namespace xmlgram
