#include "xmlgram/normalize.hpp"

#include <algorithm>
#include <optional>
#include <set>

#include "xmlgram/wellformed.hpp"

namespace xmlgram {

namespace {

enum class Pass { Guards, Star, Disjunction };

void collectNames(const Expr& e, NameSet& out) {
  std::visit(
      [&](const auto& n) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, VarRef>) {
          out.insert(n.name);
        } else if constexpr (std::is_same_v<T, Construct>) {
          for (const Expr& a : n.args) collectNames(a, out);
        } else if constexpr (std::is_same_v<T, ListLit>) {
          for (const Expr& a : n.items) collectNames(a, out);
        } else if constexpr (std::is_same_v<T, ConsExpr>) {
          collectNames(*n.head, out);
          collectNames(*n.tail, out);
        } else if constexpr (std::is_same_v<T, Fold>) {
          out.insert(n.elemVar);
          out.insert(n.accVar);
          collectNames(*n.init, out);
          collectNames(*n.step, out);
          collectNames(*n.over, out);
        } else if constexpr (std::is_same_v<T, Compare>) {
          collectNames(*n.left, out);
          collectNames(*n.right, out);
        }
      },
      e.node);
}

// Every variable name mentioned anywhere in `seq`.
void collectBodyNames(std::span<const Body> seq, NameSet& out) {
  forEachBody(seq, [&](const Body& b) {
    if (const auto* bind = b.as<Bind>()) {
      out.insert(bind->names.begin(), bind->names.end());
    } else if (const auto* call = b.as<Call>()) {
      for (const Expr& a : call->args) collectNames(a, out);
    } else if (const auto* actions = b.as<Actions>()) {
      for (const Expr& a : actions->exprs) collectNames(a, out);
    } else if (const auto* el = b.as<ElementSpec>()) {
      for (const auto& a : el->attrs) out.insert(a.var);
      for (const auto& gb : el->guarded) collectNames(gb.guard, out);
    }
  });
}

std::vector<std::string> sorted(const NameSet& s) { return {s.begin(), s.end()}; }

std::vector<Expr> varRefs(const std::vector<std::string>& names, SourceSpan span) {
  std::vector<Expr> out;
  for (const auto& n : names) out.emplace_back(VarRef{n}, span);
  return out;
}

template <class... Ts>
bool isSingle(const BodySeq& seq) {
  return seq.size() == 1 && (seq.front().is<Ts>() || ...);
}

bool isCallOkEmpty(const BodySeq& seq) { return isSingle<Call, Ok, Empty>(seq); }

class Normalizer {
 public:
  explicit Normalizer(Grammar g) : g_(std::move(g)) {
    for (const Clause& c : g_.clauses) ruleNames_.insert(c.name);
  }

  bool run(Pass pass) {
    bool any = false;
    for (std::size_t i = 0; i < g_.clauses.size(); ++i) {
      pending_.clear();
      current_ = i;
      names_.clear();
      collectBodyNames(g_.clauses[i].body, names_);
      names_.insert(g_.clauses[i].params.begin(), g_.clauses[i].params.end());

      BodySeq body = std::move(g_.clauses[i].body);
      changed_ = false;
      if (pass == Pass::Disjunction && isSingle<Or>(body)) {
        // A whole-body alternative splits into sibling definitions.
        Or o = std::move(*body.front().as<Or>());
        const Clause& c = g_.clauses[i];
        define(c.name, c.params, std::move(o.right), c.span);
        body = std::move(o.left);
        changed_ = true;
      }
      switch (pass) {
        case Pass::Guards: body = guardsSeq(std::move(body)); break;
        case Pass::Star: body = starSeq(std::move(body)); break;
        case Pass::Disjunction: body = orSeq(std::move(body)); break;
      }
      g_.clauses[i].body = std::move(body);
      any = any || changed_;

      if (!pending_.empty()) {
        const std::string& name = g_.clauses[i].name;
        std::size_t at = i;
        for (std::size_t j = i; j < g_.clauses.size(); ++j) {
          if (g_.clauses[j].name == name) at = j;
        }
        g_.clauses.insert(g_.clauses.begin() + static_cast<std::ptrdiff_t>(at + 1),
                          std::make_move_iterator(pending_.begin()),
                          std::make_move_iterator(pending_.end()));
      }
    }
    return any;
  }

  void toFixpoint(Pass pass) {
    while (run(pass)) {
    }
  }

  Grammar take() { return std::move(g_); }

 private:
  const Clause& current() const { return g_.clauses[current_]; }

  std::string freshRule() {
    const std::string& origin = current().name;
    const std::string root = origin.substr(0, origin.find('$'));
    while (true) {
      std::string name = root + "$" + std::to_string(++ruleCounter_);
      if (ruleNames_.insert(name).second) return name;
    }
  }

  std::string freshVar(const std::string& base) {
    std::string name = base;
    for (int k = 1; names_.count(name); ++k) name = base + "$" + std::to_string(k);
    names_.insert(name);
    return name;
  }

  // Adds a definition `name(params) ::= body` to be inserted after the
  // current rule.
  void define(const std::string& name, const std::vector<std::string>& params, BodySeq body,
              SourceSpan span) {
    pending_.push_back(Clause{name, params, std::move(body), span});
  }

  // `seq` extended to return the names in `bound` and, when `valueVar` is
  // set, the value `seq` had originally as the last tuple component.
  BodySeq returning(BodySeq seq, const std::vector<std::string>& bound,
                    const std::string* valueVar, SourceSpan span) {
    std::vector<Expr> result = varRefs(bound, span);
    if (valueVar) {
      if (seq.empty()) {
        result.emplace_back(NullLit{}, span);
      } else {
        Body last = std::move(seq.back());
        seq.pop_back();
        BodySeq captured;
        captured.push_back(std::move(last));
        seq.emplace_back(Bind{{*valueVar}, std::move(captured)}, span);
        result.emplace_back(VarRef{*valueVar}, span);
      }
    }
    seq.emplace_back(Actions{std::move(result)}, span);
    return seq;
  }

  // Call site for a lifted body returning `bound` (plus its value when
  // `keepValue`): `[bound] = d(args)`, followed by `{v}` if the value is kept.
  void emitSite(BodySeq& out, Body call, const std::vector<std::string>& bound,
                const std::string* valueVar, SourceSpan span) {
    if (bound.empty()) {
      out.push_back(std::move(call));
      return;
    }
    std::vector<std::string> names = bound;
    if (valueVar) names.push_back(*valueVar);
    BodySeq inner;
    inner.push_back(std::move(call));
    out.emplace_back(Bind{std::move(names), std::move(inner)}, span);
    if (valueVar) out.emplace_back(Actions{{Expr(VarRef{*valueVar}, span)}}, span);
  }

  // ---- element guards --------------------------------------------------

  BodySeq guardsSeq(BodySeq seq) {
    BodySeq out;
    for (std::size_t i = 0; i < seq.size(); ++i) {
      const bool last = i + 1 == seq.size();
      Body b = std::move(seq[i]);
      if (auto* bind = b.as<Bind>()) {
        bind->body = guardsSeq(std::move(bind->body));
      } else if (auto* star = b.as<Star>()) {
        star->body = guardsSeq(std::move(star->body));
      } else if (auto* o = b.as<Or>()) {
        o->left = guardsSeq(std::move(o->left));
        o->right = guardsSeq(std::move(o->right));
      } else if (b.is<ElementSpec>()) {
        liftElement(std::move(*b.as<ElementSpec>()), b.span, last, out);
        continue;
      }
      out.push_back(std::move(b));
    }
    return out;
  }

  void liftElement(ElementSpec el, SourceSpan span, bool last, BodySeq& out) {
    auto fillEmpty = [&](BodySeq& branch) {
      if (branch.empty()) {
        branch.emplace_back(Ok{}, span);
        changed_ = true;
      }
    };
    for (auto& gb : el.guarded) fillEmpty(gb.body);
    fillEmpty(el.elseBody);

    if (el.guarded.empty() && el.elseBody.size() == 1 && el.elseBody.front().is<Bind>()) {
      Bind bind = std::move(*el.elseBody.front().as<Bind>());
      el.elseBody = std::move(bind.body);
      BodySeq inner;
      liftElement(std::move(el), span, true, inner);
      out.emplace_back(Bind{std::move(bind.names), std::move(inner)}, span);
      changed_ = true;
      return;
    }

    std::optional<NameSet> common;
    auto meet = [&](const BodySeq& branch) {
      NameSet b = boundVars(branch);
      common = common ? [&] {
        NameSet r;
        std::set_intersection(common->begin(), common->end(), b.begin(), b.end(),
                              std::inserter(r, r.end()));
        return r;
      }()
                      : b;
    };
    for (const auto& gb : el.guarded) meet(gb.body);
    meet(el.elseBody);
    const std::vector<std::string> bound = sorted(*common);

    if (bound.empty()) {
      auto liftIfNeeded = [&](BodySeq& branch) {
        if (isCallOkEmpty(branch) || isSingle<Star, Or>(branch)) return;
        branch = liftBranch(std::move(branch), {}, nullptr, span);
      };
      for (auto& gb : el.guarded) liftIfNeeded(gb.body);
      liftIfNeeded(el.elseBody);
      out.emplace_back(std::move(el), span);
      return;
    }

    std::string valueVar;
    if (last) valueVar = freshVar("v");
    const std::string* vv = last ? &valueVar : nullptr;
    for (auto& gb : el.guarded) gb.body = liftBranch(std::move(gb.body), bound, vv, span);
    el.elseBody = liftBranch(std::move(el.elseBody), bound, vv, span);
    emitSite(out, Body(std::move(el), span), bound, vv, span);
  }

  BodySeq liftBranch(BodySeq branch, const std::vector<std::string>& bound,
                     const std::string* valueVar, SourceSpan span) {
    changed_ = true;
    const std::vector<std::string> params = sorted(freeVars(branch));
    const std::string name = freshRule();
    if (!bound.empty()) branch = returning(std::move(branch), bound, valueVar, span);
    define(name, params, std::move(branch), span);
    BodySeq call;
    call.emplace_back(Call{name, varRefs(params, span)}, span);
    return call;
  }

  // ---- star ------------------------------------------------------------

  BodySeq starSeq(BodySeq seq) {
    BodySeq out;
    for (Body& b : seq) {
      if (auto* bind = b.as<Bind>()) {
        bind->body = starSeq(std::move(bind->body));
      } else if (auto* o = b.as<Or>()) {
        o->left = starSeq(std::move(o->left));
        o->right = starSeq(std::move(o->right));
      } else if (auto* el = b.as<ElementSpec>()) {
        for (auto& gb : el->guarded) gb.body = starSeq(std::move(gb.body));
        el->elseBody = starSeq(std::move(el->elseBody));
      } else if (auto* star = b.as<Star>()) {
        out.push_back(liftStar(std::move(star->body), b.span));
        continue;
      }
      out.push_back(std::move(b));
    }
    return out;
  }

  Body liftStar(BodySeq x, SourceSpan span) {
    changed_ = true;
    const NameSet free = freeVars(x);
    const std::vector<std::string> params = sorted(free);

    // Each repetition sees the variables as they were before the star, so a
    // body that rebinds one of its own inputs runs in a rule of its own.
    const NameSet bound = boundVars(x);
    if (std::any_of(bound.begin(), bound.end(), [&](const auto& n) { return free.count(n) > 0; })) {
      const std::string inner = freshRule();
      define(inner, params, std::move(x), span);
      x.clear();
      x.emplace_back(Call{inner, varRefs(params, span)}, span);
    }

    const std::string d = freshRule();
    const std::string head = freshVar("x");
    const std::string tail = freshVar("xs");

    BodySeq recursive;
    recursive.emplace_back(Bind{{head}, std::move(x)}, span);
    BodySeq again;
    again.emplace_back(Call{d, varRefs(params, span)}, span);
    recursive.emplace_back(Bind{{tail}, std::move(again)}, span);
    recursive.emplace_back(
        Actions{{Expr(Construct{"Cons", {Expr(VarRef{head}, span), Expr(VarRef{tail}, span)}}, span)}},
        span);
    define(d, params, std::move(recursive), span);

    BodySeq nil;
    nil.emplace_back(Actions{{Expr(Construct{"Nil", {}}, span)}}, span);
    define(d, params, std::move(nil), span);

    return Body(Call{d, varRefs(params, span)}, span);
  }

  // ---- disjunction -----------------------------------------------------

  BodySeq orSeq(BodySeq seq) {
    BodySeq out;
    for (std::size_t i = 0; i < seq.size(); ++i) {
      const bool last = i + 1 == seq.size();
      Body b = std::move(seq[i]);
      if (auto* bind = b.as<Bind>()) {
        bind->body = orSeq(std::move(bind->body));
      } else if (auto* star = b.as<Star>()) {
        star->body = orSeq(std::move(star->body));
      } else if (auto* el = b.as<ElementSpec>()) {
        for (auto& gb : el->guarded) gb.body = orSeq(std::move(gb.body));
        el->elseBody = orSeq(std::move(el->elseBody));
      } else if (b.is<Or>()) {
        liftOr(std::move(*b.as<Or>()), b.span, last, out);
        continue;
      }
      out.push_back(std::move(b));
    }
    return out;
  }

  void liftOr(Or o, SourceSpan span, bool last, BodySeq& out) {
    changed_ = true;
    Body whole(Or{o.left, o.right}, span);
    const std::vector<std::string> params = sorted(freeVars(whole));
    const std::vector<std::string> bound = sorted(boundVars(whole));
    const std::string d = freshRule();

    std::string valueVar;
    const std::string* vv = nullptr;
    if (!bound.empty() && last) {
      valueVar = freshVar("v");
      vv = &valueVar;
    }
    for (BodySeq* branch : {&o.left, &o.right}) {
      BodySeq body = std::move(*branch);
      if (!bound.empty()) body = returning(std::move(body), bound, vv, span);
      define(d, params, std::move(body), span);
    }
    emitSite(out, Body(Call{d, varRefs(params, span)}, span), bound, vv, span);
  }

  Grammar g_;
  std::set<std::string> ruleNames_;
  NameSet names_;
  std::vector<Clause> pending_;
  std::size_t current_ = 0;
  int ruleCounter_ = 0;
  bool changed_ = false;
};

}  // namespace

Grammar liftDisjunction(const Grammar& g) {
  Normalizer n(g);
  n.toFixpoint(Pass::Disjunction);
  return n.take();
}

Grammar liftElementGuards(const Grammar& g) {
  Normalizer n(g);
  n.toFixpoint(Pass::Guards);
  return n.take();
}

Grammar removeStar(const Grammar& g) {
  Normalizer n(g);
  n.toFixpoint(Pass::Star);
  return n.take();
}

Grammar normalizeGrammar(const Grammar& g) {
  Normalizer n(g);
  while (true) {
    bool changed = n.run(Pass::Guards);
    changed = n.run(Pass::Star) || changed;
    changed = n.run(Pass::Disjunction) || changed;
    if (!changed) break;
  }
  return n.take();
}

bool isNormalForm(const Grammar& g) {
  bool ok = true;
  for (const Clause& c : g.clauses) {
    forEachBody(c.body, [&](const Body& b) {
      if (b.is<Or>() || b.is<Star>()) ok = false;
      if (const auto* el = b.as<ElementSpec>()) {
        for (const auto& gb : el->guarded) ok = ok && isCallOkEmpty(gb.body);
        ok = ok && isCallOkEmpty(el->elseBody);
      }
    });
  }
  return ok;
}

}  // namespace xmlgram
