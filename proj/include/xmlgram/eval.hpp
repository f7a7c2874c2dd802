#pragma once

#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "xmlgram/ast.hpp"
#include "xmlgram/env.hpp"
#include "xmlgram/value.hpp"

namespace xmlgram {

class EvalError : public std::runtime_error {
 public:
  enum class Kind { UnboundVariable, NotAList, NotATerm, NonBooleanGuard };

  EvalError(Kind kind, const std::string& message, SourceSpan span)
      : std::runtime_error(message), kind_(kind), span_(span) {}

  Kind kind() const { return kind_; }
  const SourceSpan& span() const { return span_; }

 private:
  Kind kind_;
  SourceSpan span_;
};

/// Value of `e` in `env`. Pure and deterministic.
Value evalExpr(const Expr& e, const Env& env);

/// No expressions yield null, one yields its value, several yield a tuple.
Value evalActions(std::span<const Expr> exprs, const Env& env);

/// Throws EvalError(NonBooleanGuard) unless `e` evaluates to a boolean.
bool evalGuard(const Expr& e, const Env& env);

/// Elements of a list-like value: a List, or a right-nested chain of
/// `Cons(head, tail)` terms ending in `Nil`. Empty optional otherwise.
std::optional<std::vector<Value>> listElements(const Value& v);

}  // namespace xmlgram
