#include "xmlgram/oracle.hpp"

#include <algorithm>
#include <cstdlib>
#include <functional>
#include <map>

#include "xmlgram/eval.hpp"
#include "xmlgram/wellformed.hpp"

namespace xmlgram {

OracleOptions OracleOptions::fromEnvironment() {
  OracleOptions o;
  if (const char* cap = std::getenv("XMLGRAM_MAX_DERIVATIONS")) {
    char* end = nullptr;
    unsigned long long n = std::strtoull(cap, &end, 10);
    if (end != cap && *end == '\0' && n > 0) o.maxDerivations = static_cast<std::size_t>(n);
  }
  return o;
}

Value treeValue(const XmlTree& tree) {
  if (const auto* t = tree.text()) return Value::string(t->text);
  const XmlElement& el = *tree.element();
  std::vector<Value> attrs;
  for (const auto& [k, v] : el.attrs) attrs.push_back(Value::tuple({Value::string(k), Value::string(v)}));
  std::vector<Value> children;
  for (const XmlTree& c : el.children) children.push_back(treeValue(c));
  return Value::term("Element",
                     {Value::string(el.tag), Value::list(std::move(attrs)), Value::list(std::move(children))});
}

namespace {

using Trees = std::span<const XmlTree>;
// Receives (position after the match, environment, value); returns false to
// stop the enumeration.
using Cont = std::function<bool(std::size_t, const Env&, const Value&)>;

NameSet intersect(const NameSet& a, const NameSet& b) {
  NameSet out;
  for (const auto& n : a) {
    if (b.count(n)) out.insert(n);
  }
  return out;
}

class Oracle {
 public:
  Oracle(const Grammar& g, const OracleOptions& options) : g_(g), opt_(options) {}

  bool truncated() const { return truncated_; }

  bool seq(std::span<const Body> body, Trees trees, std::size_t pos, const Env& env,
           const Value& last, const Cont& k) {
    if (body.empty()) return k(pos, env, last);
    return item(body.front(), trees, pos, env, [&](std::size_t p, const Env& e, const Value& v) {
      return seq(body.subspan(1), trees, p, e, v, k);
    });
  }

 private:
  struct ActiveCall {
    const std::string* name;
    const XmlTree* base;
    std::size_t size;
    std::size_t pos;
    std::vector<Value> args;

    bool operator==(const ActiveCall& o) const {
      return *name == *o.name && base == o.base && size == o.size && pos == o.pos && args == o.args;
    }
  };

  bool item(const Body& b, Trees trees, std::size_t pos, const Env& env, const Cont& k) {
    if (++steps_ > opt_.maxSteps) {
      truncated_ = true;
      return false;
    }
    if (b.is<Empty>()) return pos == trees.size() ? k(pos, env, Value::null()) : true;
    if (b.is<Ok>()) return k(pos, env, Value::null());
    if (b.is<Text>()) {
      if (pos < trees.size() && trees[pos].text()) {
        return k(pos + 1, env, Value::string(trees[pos].text()->text));
      }
      return true;
    }
    if (b.is<Any>()) {
      if (pos >= trees.size()) return true;
      return k(pos + 1, env, opt_.anyYieldsTree ? treeValue(trees[pos]) : Value::null());
    }
    if (const auto* actions = b.as<Actions>()) {
      Value v;
      try {
        v = evalActions(actions->exprs, env);
      } catch (const EvalError&) {
        return true;
      }
      return k(pos, env, v);
    }
    if (const auto* bind = b.as<Bind>()) {
      return seq(bind->body, trees, pos, env, Value::null(),
                 [&](std::size_t p, const Env& e, const Value& v) {
                   Env out = e;
                   if (bind->names.size() == 1) {
                     out.bind(bind->names.front(), v);
                   } else if (v.kind() == Value::Kind::Tuple &&
                              v.items().size() == bind->names.size()) {
                     for (std::size_t i = 0; i < bind->names.size(); ++i) {
                       out.bind(bind->names[i], v.items()[i]);
                     }
                   } else {
                     return true;
                   }
                   return k(p, out, v);
                 });
    }
    if (const auto* call = b.as<Call>()) return callRule(*call, trees, pos, env, k);
    if (const auto* el = b.as<ElementSpec>()) return element(*el, trees, pos, env, k);
    if (const auto* o = b.as<Or>()) {
      const NameSet& escaping = boundOf(&b);
      auto join = [&](std::size_t p, const Env& e, const Value& v) {
        return k(p, envMerge(env, e.restricted(escaping)), v);
      };
      if (!seq(o->left, trees, pos, env, Value::null(), join)) return false;
      return seq(o->right, trees, pos, env, Value::null(), join);
    }
    const auto& star = *b.as<Star>();
    return repeat(star.body, trees, pos, env, k);
  }

  // Longest match first; every iteration consumes at least one tree.
  bool repeat(std::span<const Body> body, Trees trees, std::size_t pos, const Env& env,
              const Cont& k) {
    const bool go = seq(body, trees, pos, env, Value::null(),
                        [&](std::size_t p, const Env&, const Value& head) {
                          if (p == pos) return true;
                          return repeat(body, trees, p, env,
                                        [&](std::size_t q, const Env&, const Value& tail) {
                                          return k(q, env, Value::term("Cons", {head, tail}));
                                        });
                        });
    if (!go) return false;
    return k(pos, env, Value::term("Nil"));
  }

  bool callRule(const Call& call, Trees trees, std::size_t pos, const Env& env, const Cont& k) {
    std::vector<Value> args;
    try {
      for (const Expr& e : call.args) args.push_back(evalExpr(e, env));
    } catch (const EvalError&) {
      return true;
    }
    return invoke(call.name, std::move(args), trees, pos, [&](std::size_t p, const Env&, const Value& v) {
      return k(p, env, v);
    });
  }

 public:
  bool invoke(const std::string& name, std::vector<Value> args, Trees trees, std::size_t pos,
              const Cont& k) {
    ActiveCall key{&name, trees.data(), trees.size(), pos, args};
    for (const ActiveCall& a : active_) {
      if (a == key) return true;
    }
    for (std::size_t index : g_.definitionsOf(name)) {
      const Clause& c = g_.clauses[index];
      if (c.params.size() != args.size()) continue;
      Env callee;
      for (std::size_t i = 0; i < args.size(); ++i) callee.bind(c.params[i], args[i]);
      active_.push_back(key);
      const bool go = seq(c.body, trees, pos, callee, Value::null(),
                          [&](std::size_t p, const Env& e, const Value& v) {
                            // The call is finished; what follows may call
                            // the same rule at the same place again.
                            ActiveCall saved = std::move(active_.back());
                            active_.pop_back();
                            const bool r = k(p, e, v);
                            active_.push_back(std::move(saved));
                            return r;
                          });
      active_.pop_back();
      if (!go) return false;
    }
    return true;
  }

 private:
  bool element(const ElementSpec& el, Trees trees, std::size_t pos, const Env& env, const Cont& k) {
    if (pos >= trees.size()) return true;
    const XmlElement* node = trees[pos].element();
    if (!node || node->tag != el.tag) return true;

    Env attrs;
    for (const auto& a : el.attrs) {
      auto it = node->attrs.find(a.attr);
      if (it == node->attrs.end()) return true;
      attrs.bind(a.var, Value::string(it->second));
    }
    const Env inner = envMerge(env, attrs);

    std::vector<const BodySeq*> branches;
    try {
      for (const auto& gb : el.guarded) {
        if (evalGuard(gb.guard, inner)) {
          branches.push_back(&gb.body);
          if (opt_.firstGuardOnly) break;
        }
      }
    } catch (const EvalError&) {
      return true;
    }
    if (branches.empty()) branches.push_back(&el.elseBody);

    const NameSet& escaping = elementBound(el);
    const Trees children(node->children);
    for (const BodySeq* branch : branches) {
      const bool go = seq(*branch, children, 0, inner, Value::null(),
                          [&](std::size_t p, const Env& e, const Value& v) {
                            if (p != children.size()) return true;
                            return k(pos + 1, envMerge(inner, e.restricted(escaping)), v);
                          });
      if (!go) return false;
    }
    return true;
  }

  const NameSet& boundOf(const Body* b) {
    auto it = boundCache_.find(b);
    if (it == boundCache_.end()) it = boundCache_.emplace(b, boundVars(*b)).first;
    return it->second;
  }

  // Names every branch binds; attribute variables are added separately.
  const NameSet& elementBound(const ElementSpec& el) {
    const void* key = &el;
    auto it = boundCache_.find(key);
    if (it != boundCache_.end()) return it->second;
    std::optional<NameSet> common;
    for (const auto& gb : el.guarded) {
      NameSet b = boundVars(gb.body);
      common = common ? intersect(*common, b) : b;
    }
    NameSet b = boundVars(el.elseBody);
    common = common ? intersect(*common, b) : b;
    return boundCache_.emplace(key, std::move(*common)).first->second;
  }

  const Grammar& g_;
  const OracleOptions& opt_;
  std::size_t steps_ = 0;
  bool truncated_ = false;
  std::vector<ActiveCall> active_;
  std::map<const void*, NameSet> boundCache_;
};

}  // namespace

SatisfyResult satisfy(const Grammar& g, std::span<const Body> seq, std::span<const XmlTree> trees,
                      const Env& env, const OracleOptions& options) {
  SatisfyResult out;
  Oracle oracle(g, options);
  bool capped = false;
  oracle.seq(seq, trees, 0, env, Value::null(), [&](std::size_t p, const Env& e, const Value& v) {
    out.derivations.push_back(Derivation{p, e, v});
    if (out.derivations.size() >= options.maxDerivations) {
      capped = true;
      return false;
    }
    return true;
  });
  out.truncated = capped || oracle.truncated();
  return out;
}

OracleResult acceptsForest(const Grammar& g, std::string_view startRule,
                           std::span<const XmlTree> forest, const OracleOptions& options,
                           std::vector<Value> args) {
  OracleResult out;
  Oracle oracle(g, options);
  std::size_t found = 0;
  const std::string name(startRule);
  oracle.invoke(name, std::move(args), forest, 0, [&](std::size_t p, const Env&, const Value& v) {
    if (p != forest.size()) return true;
    if (!out.value) out.value = v;
    if (std::find(out.distinct.begin(), out.distinct.end(), v) == out.distinct.end()) {
      out.distinct.push_back(v);
    }
    if (++found >= options.maxDerivations) {
      out.truncated = true;
      return false;
    }
    return true;
  });
  out.truncated = out.truncated || oracle.truncated();
  return out;
}

OracleResult accepts(const Grammar& g, std::string_view startRule, const XmlTree& doc,
                     const OracleOptions& options, std::vector<Value> args) {
  return acceptsForest(g, startRule, std::span<const XmlTree>(&doc, 1), options, std::move(args));
}

}  // namespace xmlgram
