#pragma once

#include <span>
#include <string>
#include <vector>

#include "xmlgram/ast.hpp"
#include "xmlgram/env.hpp"

namespace xmlgram {

NameSet freeVars(const Expr& e);
/// Names referenced in `seq` before any binder inside `seq` covers them.
NameSet freeVars(std::span<const Body> seq);
NameSet freeVars(const Body& b);
inline NameSet freeVars(const BodySeq& seq) { return freeVars(std::span<const Body>(seq)); }

/// Names guaranteed bound once `seq` succeeds. Alternatives contribute the
/// intersection of their branches, repetitions nothing. An element
/// contributes its attribute variables plus what every branch binds.
NameSet boundVars(std::span<const Body> seq);
NameSet boundVars(const Body& b);
inline NameSet boundVars(const BodySeq& seq) { return boundVars(std::span<const Body>(seq)); }

struct WfError {
  enum class Kind { UnboundVariable, UndefinedClause, ArityMismatch, DuplicateName };

  Kind kind = Kind::UnboundVariable;
  std::string clause;
  std::string name;  // the variable or rule at fault
  SourceSpan span;
  std::string detail;

  /// e.g. `rule W: variable x may be unbound at 3:17`
  std::string str() const;
};

/// Empty iff every clause body is well formed under its parameters, every
/// call resolves with the right arity and all definitions of a rule agree
/// on arity.
std::vector<WfError> checkGrammar(const Grammar& g);

}  // namespace xmlgram
