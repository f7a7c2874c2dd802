#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace xmlgram {

/// An immutable synthesized value: null, boolean, integer, string, a
/// constructor term, a list, or a tuple (several values returned at once).
///
/// Compound values share structure through reference counting, so copies are
/// cheap. Destruction and equality are iterative; a list built from a
/// hundred thousand `Cons` cells does not exhaust the stack.
class Value {
 public:
  enum class Kind { Null, Bool, Int, Str, Term, List, Tuple };

  Value() = default;

  static Value null() { return Value(); }
  static Value boolean(bool b);
  static Value integer(std::int64_t i);
  static Value string(std::string s);
  static Value term(std::string ctor, std::vector<Value> args = {});
  static Value list(std::vector<Value> items);
  static Value tuple(std::vector<Value> items);

  Kind kind() const { return kind_; }
  bool isNull() const { return kind_ == Kind::Null; }
  bool isTerm() const { return kind_ == Kind::Term; }
  bool isTerm(std::string_view ctor) const;

  bool asBool() const;
  std::int64_t asInt() const;
  const std::string& asString() const;
  /// Constructor name of a Term.
  const std::string& ctor() const;
  /// Arguments of a Term, or elements of a List/Tuple.
  std::span<const Value> items() const;

  friend bool operator==(const Value& a, const Value& b);

 private:
  struct Node;
  using Rep = std::variant<std::monostate, bool, std::int64_t, std::string,
                           std::shared_ptr<const Node>>;

  Value(Kind kind, Rep rep) : kind_(kind), rep_(std::move(rep)) {}
  static Value compound(Kind kind, std::string ctor, std::vector<Value> items);
  const Node& node() const;

  Kind kind_ = Kind::Null;
  Rep rep_;
};

std::string_view kindName(Value::Kind kind);

}  // namespace xmlgram
