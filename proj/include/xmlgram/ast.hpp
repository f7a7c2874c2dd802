#pragma once

// Abstract syntax of XML grammars: expressions, clause bodies, clauses.
//
// Conjunction has no node of its own: a body is a sequence of items
// (BodySeq) and juxtaposition is concatenation. Source spans are carried for
// diagnostics but never take part in structural equality.

#include <cstdint>
#include <span>
#include <string>
#include <type_traits>
#include <variant>
#include <vector>

#include "xmlgram/box.hpp"

namespace xmlgram {

struct SourceSpan {
  int line = 1;
  int column = 1;
  int length = 0;
};

std::string toString(const SourceSpan& span);

struct Expr;

struct VarRef {
  std::string name;
  bool operator==(const VarRef&) const = default;
};
struct StrLit {
  std::string value;
  bool operator==(const StrLit&) const = default;
};
struct IntLit {
  std::int64_t value = 0;
  bool operator==(const IntLit&) const = default;
};
struct BoolLit {
  bool value = false;
  bool operator==(const BoolLit&) const = default;
};
struct NullLit {
  bool operator==(const NullLit&) const = default;
};
/// `Ctor(args...)`. The constructor name `addChild` is reserved: it appends
/// its second argument to the children of the term given as first argument.
struct Construct {
  std::string ctor;
  std::vector<Expr> args;
  bool operator==(const Construct&) const = default;
};
struct ListLit {
  std::vector<Expr> items;
  bool operator==(const ListLit&) const = default;
};
struct ConsExpr {
  Box<Expr> head;
  Box<Expr> tail;
  bool operator==(const ConsExpr&) const = default;
};
/// Left fold: `over->iterate(elemVar accVar = init | step)`.
struct Fold {
  std::string elemVar;
  std::string accVar;
  Box<Expr> init;
  Box<Expr> step;
  Box<Expr> over;
  bool operator==(const Fold&) const = default;
};
enum class CompareOp { Eq, Ne };
struct Compare {
  CompareOp op = CompareOp::Eq;
  Box<Expr> left;
  Box<Expr> right;
  bool operator==(const Compare&) const = default;
};

inline constexpr const char* kAddChildCtor = "addChild";

template <class T, class V>
struct IsAlternative;
template <class T, class... Ts>
struct IsAlternative<T, std::variant<Ts...>> : std::bool_constant<(std::is_same_v<T, Ts> || ...)> {};

struct Expr {
  using Node = std::variant<VarRef, StrLit, IntLit, BoolLit, NullLit, Construct, ListLit,
                            ConsExpr, Fold, Compare>;
  Node node;
  SourceSpan span;

  template <class T>
    requires IsAlternative<std::decay_t<T>, Node>::value
  Expr(T n, SourceSpan s = {}) : node(std::move(n)), span(s) {}  // NOLINT(implicit)

  template <class T>
  bool is() const {
    return std::holds_alternative<T>(node);
  }
  template <class T>
  const T* as() const {
    return std::get_if<T>(&node);
  }

  bool operator==(const Expr& other) const { return node == other.node; }
};

// Expression builders, mostly for tests and rewrites.
Expr var(std::string name);
Expr str(std::string value);
Expr integer(std::int64_t value);
Expr boolean(bool value);
Expr nullExpr();
Expr construct(std::string ctor, std::vector<Expr> args = {});

struct Body;
using BodySeq = std::vector<Body>;

struct Or {
  BodySeq left;
  BodySeq right;
  bool operator==(const Or&) const = default;
};
struct Bind {
  std::vector<std::string> names;
  BodySeq body;
  bool operator==(const Bind&) const = default;
};
struct Star {
  BodySeq body;
  bool operator==(const Star&) const = default;
};
struct Empty {
  bool operator==(const Empty&) const = default;
};
struct Any {
  bool operator==(const Any&) const = default;
};
struct Ok {
  bool operator==(const Ok&) const = default;
};
struct Text {
  bool operator==(const Text&) const = default;
};
struct Call {
  std::string name;
  std::vector<Expr> args;
  bool operator==(const Call&) const = default;
};
struct Actions {
  std::vector<Expr> exprs;
  bool operator==(const Actions&) const = default;
};
struct AttrBinding {
  std::string var;
  std::string attr;
  bool operator==(const AttrBinding&) const = default;
};
struct GuardedBody {
  Expr guard;
  BodySeq body;
  bool operator==(const GuardedBody&) const = default;
};
struct ElementSpec {
  std::string tag;
  std::vector<AttrBinding> attrs;
  std::vector<GuardedBody> guarded;
  BodySeq elseBody;
  bool operator==(const ElementSpec&) const = default;
};

struct Body {
  using Node = std::variant<Or, Bind, Star, Empty, Any, Ok, Text, Call, Actions, ElementSpec>;
  Node node;
  SourceSpan span;

  template <class T>
    requires IsAlternative<std::decay_t<T>, Node>::value
  Body(T n, SourceSpan s = {}) : node(std::move(n)), span(s) {}  // NOLINT(implicit)

  template <class T>
  bool is() const {
    return std::holds_alternative<T>(node);
  }
  template <class T>
  const T* as() const {
    return std::get_if<T>(&node);
  }
  template <class T>
  T* as() {
    return std::get_if<T>(&node);
  }

  bool operator==(const Body& other) const { return node == other.node; }
};

struct Clause {
  std::string name;
  std::vector<std::string> params;
  BodySeq body;
  SourceSpan span;

  bool operator==(const Clause& other) const {
    return name == other.name && params == other.params && body == other.body;
  }
};

struct Grammar {
  std::string name;
  std::vector<Clause> clauses;

  /// Indices of every definition named `clause`, in grammar order.
  std::vector<std::size_t> definitionsOf(std::string_view clause) const;
  bool defines(std::string_view clause) const;
  /// Distinct clause names in order of first definition.
  std::vector<std::string> clauseNames() const;

  bool operator==(const Grammar&) const = default;
};

/// Calls `fn` on every body item of `seq`, recursing into nested sequences
/// (bind/star/or bodies and element branches) in pre-order.
template <class Fn>
void forEachBody(std::span<const Body> seq, Fn&& fn) {
  for (const Body& b : seq) {
    fn(b);
    if (const auto* o = b.as<Or>()) {
      forEachBody(o->left, fn);
      forEachBody(o->right, fn);
    } else if (const auto* bind = b.as<Bind>()) {
      forEachBody(bind->body, fn);
    } else if (const auto* star = b.as<Star>()) {
      forEachBody(star->body, fn);
    } else if (const auto* el = b.as<ElementSpec>()) {
      for (const auto& g : el->guarded) forEachBody(g.body, fn);
      forEachBody(el->elseBody, fn);
    }
  }
}

}  // namespace xmlgram
