#include "xmlgram/ast.hpp"

#include <algorithm>

namespace xmlgram {

std::string toString(const SourceSpan& span) {
  return std::to_string(span.line) + ":" + std::to_string(span.column);
}

Expr var(std::string name) { return Expr(VarRef{std::move(name)}); }
Expr str(std::string value) { return Expr(StrLit{std::move(value)}); }
Expr integer(std::int64_t value) { return Expr(IntLit{value}); }
Expr boolean(bool value) { return Expr(BoolLit{value}); }
Expr nullExpr() { return Expr(NullLit{}); }
Expr construct(std::string ctor, std::vector<Expr> args) {
  return Expr(Construct{std::move(ctor), std::move(args)});
}

std::vector<std::size_t> Grammar::definitionsOf(std::string_view clause) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < clauses.size(); ++i) {
    if (clauses[i].name == clause) out.push_back(i);
  }
  return out;
}

bool Grammar::defines(std::string_view clause) const {
  return std::any_of(clauses.begin(), clauses.end(),
                     [&](const Clause& c) { return c.name == clause; });
}

std::vector<std::string> Grammar::clauseNames() const {
  std::vector<std::string> out;
  for (const Clause& c : clauses) {
    if (std::find(out.begin(), out.end(), c.name) == out.end()) out.push_back(c.name);
  }
  return out;
}

}  // namespace xmlgram
