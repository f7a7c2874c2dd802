#include "xmlgram/value.hpp"

#include <stdexcept>
#include <utility>

namespace xmlgram {

struct Value::Node {
  std::string ctor;
  std::vector<Value> items;

  Node(std::string c, std::vector<Value> i) : ctor(std::move(c)), items(std::move(i)) {}
  Node(const Node&) = delete;
  Node& operator=(const Node&) = delete;

  // Unlinks uniquely owned children before they are destroyed so that deep
  // chains are released by this loop rather than by recursive destructors.
  ~Node() {
    std::vector<std::shared_ptr<const Node>> pending;
    auto harvest = [&pending](std::vector<Value>& values) {
      for (Value& v : values) {
        auto* child = std::get_if<std::shared_ptr<const Node>>(&v.rep_);
        if (child != nullptr && child->use_count() == 1) pending.push_back(std::move(*child));
      }
    };
    harvest(items);
    while (!pending.empty()) {
      std::shared_ptr<const Node> n = std::move(pending.back());
      pending.pop_back();
      // Sole owner: the node was created non-const by compound().
      harvest(const_cast<Node&>(*n).items);
    }
  }
};

Value Value::boolean(bool b) { return Value(Kind::Bool, b); }
Value Value::integer(std::int64_t i) { return Value(Kind::Int, i); }
Value Value::string(std::string s) { return Value(Kind::Str, std::move(s)); }

Value Value::compound(Kind kind, std::string ctor, std::vector<Value> items) {
  std::shared_ptr<const Node> node = std::make_shared<Node>(std::move(ctor), std::move(items));
  return Value(kind, std::move(node));
}

Value Value::term(std::string ctor, std::vector<Value> args) {
  return compound(Kind::Term, std::move(ctor), std::move(args));
}
Value Value::list(std::vector<Value> items) { return compound(Kind::List, {}, std::move(items)); }
Value Value::tuple(std::vector<Value> items) {
  return compound(Kind::Tuple, {}, std::move(items));
}

bool Value::isTerm(std::string_view ctor) const {
  return kind_ == Kind::Term && node().ctor == ctor;
}

bool Value::asBool() const {
  if (kind_ != Kind::Bool) throw std::logic_error("value is not a boolean");
  return std::get<bool>(rep_);
}

std::int64_t Value::asInt() const {
  if (kind_ != Kind::Int) throw std::logic_error("value is not an integer");
  return std::get<std::int64_t>(rep_);
}

const std::string& Value::asString() const {
  if (kind_ != Kind::Str) throw std::logic_error("value is not a string");
  return std::get<std::string>(rep_);
}

const std::string& Value::ctor() const {
  if (kind_ != Kind::Term) throw std::logic_error("value is not a term");
  return node().ctor;
}

std::span<const Value> Value::items() const {
  if (kind_ != Kind::Term && kind_ != Kind::List && kind_ != Kind::Tuple) return {};
  return node().items;
}

const Value::Node& Value::node() const { return *std::get<std::shared_ptr<const Node>>(rep_); }

bool operator==(const Value& a, const Value& b) {
  std::vector<std::pair<const Value*, const Value*>> work{{&a, &b}};
  while (!work.empty()) {
    auto [x, y] = work.back();
    work.pop_back();
    if (x->kind_ != y->kind_) return false;
    switch (x->kind_) {
      case Value::Kind::Null:
        break;
      case Value::Kind::Bool:
      case Value::Kind::Int:
      case Value::Kind::Str:
        if (x->rep_ != y->rep_) return false;
        break;
      case Value::Kind::Term:
      case Value::Kind::List:
      case Value::Kind::Tuple: {
        const auto& px = std::get<std::shared_ptr<const Value::Node>>(x->rep_);
        const auto& py = std::get<std::shared_ptr<const Value::Node>>(y->rep_);
        if (px == py) break;
        if (px->ctor != py->ctor || px->items.size() != py->items.size()) return false;
        for (std::size_t i = px->items.size(); i-- > 0;) work.emplace_back(&px->items[i], &py->items[i]);
        break;
      }
    }
  }
  return true;
}

std::string_view kindName(Value::Kind kind) {
  switch (kind) {
    case Value::Kind::Null: return "null";
    case Value::Kind::Bool: return "boolean";
    case Value::Kind::Int: return "integer";
    case Value::Kind::Str: return "string";
    case Value::Kind::Term: return "term";
    case Value::Kind::List: return "list";
    case Value::Kind::Tuple: return "tuple";
  }
  return "?";
}

}  // namespace xmlgram
