#include "xmlgram/wellformed.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <set>

namespace xmlgram {

namespace {

NameSet intersect(const NameSet& a, const NameSet& b) {
  NameSet out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::inserter(out, out.end()));
  return out;
}

void addAll(NameSet& into, const NameSet& from) { into.insert(from.begin(), from.end()); }

void eraseAll(NameSet& from, const NameSet& names) {
  for (const auto& n : names) from.erase(n);
}

// Visits free variable occurrences of `e` not in `scope`.
template <class Fn>
void visitFree(const Expr& e, const NameSet& scope, Fn&& fn) {
  std::visit(
      [&](const auto& n) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, VarRef>) {
          if (!scope.count(n.name)) fn(n.name, e.span);
        } else if constexpr (std::is_same_v<T, Construct>) {
          for (const Expr& a : n.args) visitFree(a, scope, fn);
        } else if constexpr (std::is_same_v<T, ListLit>) {
          for (const Expr& a : n.items) visitFree(a, scope, fn);
        } else if constexpr (std::is_same_v<T, ConsExpr>) {
          visitFree(*n.head, scope, fn);
          visitFree(*n.tail, scope, fn);
        } else if constexpr (std::is_same_v<T, Fold>) {
          visitFree(*n.over, scope, fn);
          visitFree(*n.init, scope, fn);
          NameSet inner = scope;
          inner.insert(n.elemVar);
          inner.insert(n.accVar);
          visitFree(*n.step, inner, fn);
        } else if constexpr (std::is_same_v<T, Compare>) {
          visitFree(*n.left, scope, fn);
          visitFree(*n.right, scope, fn);
        }
      },
      e.node);
}

NameSet elementBound(const ElementSpec& el) {
  NameSet out;
  for (const auto& a : el.attrs) out.insert(a.var);
  std::optional<NameSet> common;
  auto meet = [&](std::span<const Body> branch) {
    NameSet b = boundVars(branch);
    common = common ? intersect(*common, b) : b;
  };
  for (const auto& gb : el.guarded) meet(gb.body);
  meet(el.elseBody);
  addAll(out, *common);
  return out;
}

}  // namespace

NameSet freeVars(const Expr& e) {
  NameSet out;
  visitFree(e, NameSet{}, [&](const std::string& n, const SourceSpan&) { out.insert(n); });
  return out;
}

NameSet freeVars(const Body& b) {
  return std::visit(
      [&](const auto& n) -> NameSet {
        using T = std::decay_t<decltype(n)>;
        NameSet out;
        if constexpr (std::is_same_v<T, Or>) {
          out = freeVars(n.left);
          addAll(out, freeVars(n.right));
        } else if constexpr (std::is_same_v<T, Bind> || std::is_same_v<T, Star>) {
          out = freeVars(n.body);
        } else if constexpr (std::is_same_v<T, Call>) {
          for (const Expr& a : n.args) addAll(out, freeVars(a));
        } else if constexpr (std::is_same_v<T, Actions>) {
          for (const Expr& a : n.exprs) addAll(out, freeVars(a));
        } else if constexpr (std::is_same_v<T, ElementSpec>) {
          for (const auto& gb : n.guarded) {
            addAll(out, freeVars(gb.guard));
            addAll(out, freeVars(gb.body));
          }
          addAll(out, freeVars(n.elseBody));
          for (const auto& a : n.attrs) out.erase(a.var);
        }
        return out;
      },
      b.node);
}

NameSet freeVars(std::span<const Body> seq) {
  NameSet out;
  NameSet bound;
  for (const Body& b : seq) {
    NameSet f = freeVars(b);
    eraseAll(f, bound);
    addAll(out, f);
    addAll(bound, boundVars(b));
  }
  return out;
}

NameSet boundVars(const Body& b) {
  if (const auto* o = b.as<Or>()) return intersect(boundVars(o->left), boundVars(o->right));
  if (const auto* bind = b.as<Bind>()) {
    NameSet out = boundVars(bind->body);
    out.insert(bind->names.begin(), bind->names.end());
    return out;
  }
  if (const auto* el = b.as<ElementSpec>()) return elementBound(*el);
  return {};
}

NameSet boundVars(std::span<const Body> seq) {
  NameSet out;
  for (const Body& b : seq) addAll(out, boundVars(b));
  return out;
}

std::string WfError::str() const {
  std::string out = "rule " + clause + ": ";
  switch (kind) {
    case Kind::UnboundVariable: out += "variable " + name + " may be unbound"; break;
    case Kind::UndefinedClause: out += "call to undefined rule " + name; break;
    case Kind::ArityMismatch: out += "arity mismatch for rule " + name; break;
    case Kind::DuplicateName: out += "duplicate name " + name; break;
  }
  if (!detail.empty()) out += " (" + detail + ")";
  return out + " at " + toString(span);
}

namespace {

class Checker {
 public:
  Checker(const Grammar& g, std::vector<WfError>& errors) : errors_(errors) {
    for (const Clause& c : g.clauses) arity_.try_emplace(c.name, c.params.size());
  }

  void clause(const Clause& c) {
    clause_ = &c;
    auto it = arity_.find(c.name);
    if (it->second != c.params.size()) {
      report(WfError::Kind::ArityMismatch, c.name, c.span,
             "definition has " + std::to_string(c.params.size()) + " parameters, expected " +
                 std::to_string(it->second));
    }
    NameSet scope;
    for (const auto& p : c.params) {
      if (!scope.insert(p).second) report(WfError::Kind::DuplicateName, p, c.span, "parameter");
    }
    seq(c.body, scope);
  }

 private:
  void report(WfError::Kind kind, const std::string& name, SourceSpan span, std::string detail = {}) {
    errors_.push_back(WfError{kind, clause_->name, name, span, std::move(detail)});
  }

  void expr(const Expr& e, const NameSet& scope) {
    visitFree(e, scope, [&](const std::string& n, const SourceSpan& span) {
      report(WfError::Kind::UnboundVariable, n, span);
    });
  }

  // Checks `body` under `scope` and returns the names bound afterwards.
  NameSet seq(std::span<const Body> body, NameSet scope) {
    for (const Body& b : body) scope = item(b, std::move(scope));
    return scope;
  }

  NameSet item(const Body& b, NameSet scope) {
    if (const auto* o = b.as<Or>()) {
      NameSet l = seq(o->left, scope);
      NameSet r = seq(o->right, scope);
      return intersect(l, r);
    }
    if (const auto* bind = b.as<Bind>()) {
      NameSet out = seq(bind->body, std::move(scope));
      std::set<std::string> seen;
      for (const auto& n : bind->names) {
        if (!seen.insert(n).second) report(WfError::Kind::DuplicateName, n, b.span, "binding");
        out.insert(n);
      }
      return out;
    }
    if (const auto* star = b.as<Star>()) {
      seq(star->body, scope);
      return scope;
    }
    if (const auto* call = b.as<Call>()) {
      for (const Expr& a : call->args) expr(a, scope);
      auto it = arity_.find(call->name);
      if (it == arity_.end()) {
        report(WfError::Kind::UndefinedClause, call->name, b.span);
      } else if (it->second != call->args.size()) {
        report(WfError::Kind::ArityMismatch, call->name, b.span,
               std::to_string(call->args.size()) + " arguments, expected " +
                   std::to_string(it->second));
      }
      return scope;
    }
    if (const auto* actions = b.as<Actions>()) {
      for (const Expr& e : actions->exprs) expr(e, scope);
      return scope;
    }
    if (const auto* el = b.as<ElementSpec>()) {
      NameSet inner = scope;
      std::set<std::string> seen;
      for (const auto& a : el->attrs) {
        if (!seen.insert(a.var).second) report(WfError::Kind::DuplicateName, a.var, b.span, "attribute");
        inner.insert(a.var);
      }
      std::optional<NameSet> common;
      for (const auto& gb : el->guarded) {
        expr(gb.guard, inner);
        NameSet out = seq(gb.body, inner);
        common = common ? intersect(*common, out) : out;
      }
      NameSet out = seq(el->elseBody, inner);
      return common ? intersect(*common, out) : out;
    }
    return scope;
  }

  std::vector<WfError>& errors_;
  std::map<std::string, std::size_t, std::less<>> arity_;
  const Clause* clause_ = nullptr;
};

}  // namespace

std::vector<WfError> checkGrammar(const Grammar& g) {
  std::vector<WfError> errors;
  Checker checker(g, errors);
  for (const Clause& c : g.clauses) checker.clause(c);
  return errors;
}

}  // namespace xmlgram
