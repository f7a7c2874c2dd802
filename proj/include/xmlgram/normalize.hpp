#pragma once

#include "xmlgram/ast.hpp"

namespace xmlgram {

// Rewrites toward the normal form accepted by the table builder and the
// parsing machine. Each preserves the language and the synthesized values
// of a well-formed grammar. Fresh rules are named `<Root>$k`, where Root is
// the user rule the lifted body came from and k a counter shared by the
// whole run; fresh rules are inserted after the last definition of the rule
// they were lifted from.

/// Every Or becomes a call of a fresh two-definition rule whose parameters
/// are the free variables of the alternatives and whose result carries the
/// variables both alternatives bind.
Grammar liftDisjunction(const Grammar& g);

/// Element branches that are not a single call, OK or EMPTY become calls of
/// fresh rules. A guardless element whose content is one binding is turned
/// inside out instead: `<T> x = b </T>` becomes `x = <T> b </T>`.
Grammar liftElementGuards(const Grammar& g);

/// `X*` becomes `d(v)` with `d(v) ::= x = X xs = d(v) { Cons(x, xs) }` and
/// `d(v) ::= { Nil }`.
Grammar removeStar(const Grammar& g);

/// Applies the three rewrites (guards, star, disjunction) until none fires.
Grammar normalizeGrammar(const Grammar& g);

/// No Or, no Star, and every element branch is exactly one Call, Ok or Empty.
bool isNormalForm(const Grammar& g);

}  // namespace xmlgram
