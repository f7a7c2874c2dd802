#include "testing.hpp"

#include <algorithm>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

#include "xmlgram/analysis.hpp"
#include "xmlgram/eval.hpp"
#include "xmlgram/frontend.hpp"
#include "xmlgram/pipeline.hpp"
#include "xmlgram/render.hpp"
#include "xmlgram/wellformed.hpp"

#ifndef XMLGRAM_TEST_DATA
#error "XMLGRAM_TEST_DATA must name the test data directory"
#endif

namespace xmlgram::testing {

Grammar parse(std::string_view source, bool allowGeneratedNames) {
  GrammarParseOptions options;
  options.allowGeneratedNames = allowGeneratedNames;
  GrammarParseResult r = parseGrammar(source, options);
  if (!r.ok()) {
    std::string msg = "grammar does not parse:";
    for (const auto& d : r.diagnostics) msg += "\n  " + d.str();
    throw std::runtime_error(msg);
  }
  return std::move(*r.grammar);
}

std::string dataFile(std::string_view name) {
  return std::string(XMLGRAM_TEST_DATA) + "/" + std::string(name);
}

std::string readData(std::string_view name) {
  std::ifstream in(dataFile(name), std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + dataFile(name));
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

Grammar loadData(std::string_view name) { return parse(readData(name), true); }

// ---- renaming ---------------------------------------------------------------

namespace {

class Renamer {
 public:
  using Lookup = std::function<std::string(const std::string&)>;

  Renamer(Lookup rules, Lookup vars) : rules_(std::move(rules)), vars_(std::move(vars)) {}

  Expr expr(const Expr& e) const {
    return std::visit(
        [&](const auto& n) -> Expr {
          using T = std::decay_t<decltype(n)>;
          if constexpr (std::is_same_v<T, VarRef>) {
            return Expr(VarRef{vars_(n.name)}, e.span);
          } else if constexpr (std::is_same_v<T, Construct>) {
            return Expr(Construct{n.ctor, exprs(n.args)}, e.span);
          } else if constexpr (std::is_same_v<T, ListLit>) {
            return Expr(ListLit{exprs(n.items)}, e.span);
          } else if constexpr (std::is_same_v<T, ConsExpr>) {
            return Expr(ConsExpr{expr(*n.head), expr(*n.tail)}, e.span);
          } else if constexpr (std::is_same_v<T, Fold>) {
            // The fold's source comes first in the concrete syntax.
            Expr over = expr(*n.over);
            std::string elem = vars_(n.elemVar);
            std::string acc = vars_(n.accVar);
            Expr init = expr(*n.init);
            return Expr(Fold{elem, acc, init, expr(*n.step), over}, e.span);
          } else if constexpr (std::is_same_v<T, Compare>) {
            return Expr(Compare{n.op, expr(*n.left), expr(*n.right)}, e.span);
          } else {
            return e;
          }
        },
        e.node);
  }

  std::vector<Expr> exprs(const std::vector<Expr>& es) const {
    std::vector<Expr> out;
    for (const Expr& e : es) out.push_back(expr(e));
    return out;
  }

  BodySeq seq(const BodySeq& s) const {
    BodySeq out;
    for (const Body& b : s) out.push_back(body(b));
    return out;
  }

  Body body(const Body& b) const {
    if (const auto* o = b.as<Or>()) return Body(Or{seq(o->left), seq(o->right)}, b.span);
    if (const auto* bind = b.as<Bind>()) {
      std::vector<std::string> names;
      for (const auto& n : bind->names) names.push_back(vars_(n));
      return Body(Bind{names, seq(bind->body)}, b.span);
    }
    if (const auto* star = b.as<Star>()) return Body(Star{seq(star->body)}, b.span);
    if (const auto* call = b.as<Call>()) return Body(Call{rules_(call->name), exprs(call->args)}, b.span);
    if (const auto* actions = b.as<Actions>()) return Body(Actions{exprs(actions->exprs)}, b.span);
    if (const auto* el = b.as<ElementSpec>()) {
      ElementSpec out;
      out.tag = el->tag;
      for (const auto& a : el->attrs) out.attrs.push_back(AttrBinding{vars_(a.var), a.attr});
      for (const auto& gb : el->guarded) out.guarded.push_back(GuardedBody{expr(gb.guard), seq(gb.body)});
      out.elseBody = seq(el->elseBody);
      return Body(std::move(out), b.span);
    }
    return b;
  }

 private:
  Lookup rules_;
  Lookup vars_;
};

std::string keep(const std::string& s) { return s; }

}  // namespace

Grammar renameRules(const Grammar& g,
                    const std::vector<std::pair<std::string, std::string>>& renaming) {
  std::map<std::string, std::string> m(renaming.begin(), renaming.end());
  auto rules = [&](const std::string& n) {
    auto it = m.find(n);
    return it == m.end() ? n : it->second;
  };
  Renamer r(rules, keep);
  Grammar out;
  out.name = g.name;
  for (const Clause& c : g.clauses) out.clauses.push_back(Clause{rules(c.name), c.params, r.seq(c.body), c.span});
  return out;
}

Grammar canonical(const Grammar& g, std::string_view start) {
  std::map<std::string, std::string> ruleNames;
  std::vector<std::string> order;
  std::function<void(const std::string&)> visit = [&](const std::string& rule) {
    if (ruleNames.count(rule)) return;
    ruleNames.emplace(rule, "R" + std::to_string(ruleNames.size()));
    order.push_back(rule);
    for (std::size_t i : g.definitionsOf(rule)) {
      forEachBody(g.clauses[i].body, [&](const Body& b) {
        if (const auto* call = b.as<Call>()) visit(call->name);
      });
    }
  };
  visit(std::string(start));

  auto rules = [&](const std::string& n) {
    auto it = ruleNames.find(n);
    return it == ruleNames.end() ? n : it->second;
  };

  Grammar out;
  for (const std::string& rule : order) {
    std::vector<Clause> defs;
    for (std::size_t i : g.definitionsOf(rule)) {
      const Clause& c = g.clauses[i];
      std::map<std::string, std::string> vars;
      auto var = [&](const std::string& n) {
        auto it = vars.find(n);
        if (it == vars.end()) it = vars.emplace(n, "v" + std::to_string(vars.size())).first;
        return it->second;
      };
      std::vector<std::string> params;
      for (const auto& p : c.params) params.push_back(var(p));
      Renamer r(rules, var);
      defs.push_back(Clause{rules(rule), params, r.seq(c.body), {}});
    }
    std::sort(defs.begin(), defs.end(), [](const Clause& a, const Clause& b) {
      return prettyPrint(a) < prettyPrint(b);
    });
    for (auto& d : defs) out.clauses.push_back(std::move(d));
  }
  return out;
}

bool alphaEquivalent(const Grammar& a, const Grammar& b, std::string_view start) {
  return canonical(a, start) == canonical(b, start);
}

// ---- random grammars --------------------------------------------------------

namespace {

const std::vector<std::string> kTags = {"a", "b", "c", "d"};

class GrammarGen {
 public:
  GrammarGen(std::mt19937& rng, const GrammarShape& shape) : rng_(rng), shape_(shape) {}

  Grammar run() {
    const int rules = pick(2, shape_.maxRules);
    params_.assign(static_cast<std::size_t>(rules), 0);
    for (int r = 1; r < rules; ++r) params_[static_cast<std::size_t>(r)] = chance(0.25) ? 1 : 0;

    Grammar g;
    g.name = "Random";
    for (int r = 0; r < rules; ++r) {
      rule_ = r;
      const int defs = r == 0 ? 1 : pick(1, 2);
      for (int d = 0; d < defs; ++d) {
        counter_ = 0;
        std::vector<std::string> params;
        std::set<std::string> scope;
        if (params_[static_cast<std::size_t>(r)]) {
          params.push_back("p");
          scope.insert("p");
        }
        BodySeq body;
        if (r == 0) {
          body.push_back(element(0, scope));
        } else {
          body = seq(0, scope, pick(1, 3), true);
        }
        body.push_back(Body(Actions{{result(scope)}}));
        g.clauses.push_back(Clause{name(r), params, std::move(body), {}});
      }
    }
    return g;
  }

 private:
  int pick(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
  bool chance(double p) { return std::uniform_real_distribution<double>(0, 1)(rng_) < p; }

  static std::string name(int r) { return "R" + std::to_string(r); }

  std::string freshVar() { return "x" + std::to_string(++counter_); }

  Expr result(const std::set<std::string>& scope) {
    std::vector<Expr> args;
    for (const auto& v : scope) args.push_back(var(v));
    return construct("T" + std::to_string(rule_), std::move(args));
  }

  Expr argument(const std::set<std::string>& scope) {
    if (!scope.empty() && chance(0.6)) {
      auto it = scope.begin();
      std::advance(it, pick(0, static_cast<int>(scope.size()) - 1));
      return var(*it);
    }
    return str(chance(0.5) ? "x" : "y");
  }

  // `head` marks positions where a call to an earlier rule could recurse
  // without consuming input.
  BodySeq seq(int depth, std::set<std::string>& scope, int length, bool head) {
    BodySeq out;
    for (int i = 0; i < length; ++i) {
      Body b = item(depth, scope, head);
      if (!b.is<Ok>() && !b.is<Empty>()) head = false;
      out.push_back(std::move(b));
    }
    return out;
  }

  Body item(int depth, std::set<std::string>& scope, bool head) {
    const bool bind = chance(0.3);
    Body b = unit(depth, scope, head);
    if (bind && !b.is<Ok>() && !b.is<Empty>()) {
      std::string x = freshVar();
      scope.insert(x);
      return Body(Bind{{x}, {std::move(b)}});
    }
    return b;
  }

  Body unit(int depth, std::set<std::string>& scope, bool head) {
    const double roll = std::uniform_real_distribution<double>(0, 1)(rng_);
    double acc = shape_.starRate;
    if (roll < acc && depth < 3) {
      std::set<std::string> inner = scope;
      return Body(Star{seq(depth + 1, inner, 1, false)});
    }
    acc += shape_.orRate;
    if (roll < acc && depth < 3) {
      std::set<std::string> l = scope;
      std::set<std::string> r = scope;
      BodySeq left = seq(depth + 1, l, pick(1, 2), head);
      BodySeq right = seq(depth + 1, r, pick(1, 2), head);
      return Body(Or{std::move(left), std::move(right)});
    }
    acc += shape_.textRate;
    if (roll < acc) return Body(Text{});
    acc += shape_.anyRate;
    if (roll < acc) return Body(Any{});
    if (roll < acc + 0.3) {
      const int rules = static_cast<int>(params_.size());
      // Only later rules at the head of a rule, so no left recursion.
      const int lo = head ? rule_ + 1 : 1;
      if (lo < rules) {
        const int target = pick(lo, rules - 1);
        std::vector<Expr> args;
        if (params_[static_cast<std::size_t>(target)]) args.push_back(argument(scope));
        return Body(Call{name(target), std::move(args)});
      }
    }
    if (depth >= shape_.maxElementDepth) return Body(Text{});
    return element(depth + 1, scope);
  }

  Body element(int depth, std::set<std::string>& scope) {
    ElementSpec el;
    el.tag = kTags[static_cast<std::size_t>(pick(0, static_cast<int>(kTags.size()) - 1))];
    std::set<std::string> inner = scope;
    if (chance(0.4)) {
      std::string v = freshVar();
      el.attrs.push_back(AttrBinding{v, "k"});
      inner.insert(v);
      if (chance(shape_.guardRate)) {
        std::set<std::string> g = inner;
        el.guarded.push_back(
            GuardedBody{Expr(Compare{CompareOp::Eq, var(v), str("x")}), content(depth, g)});
      }
    }
    std::set<std::string> e = inner;
    el.elseBody = content(depth, e);
    // Attribute variables stay visible after the element.
    for (const auto& a : el.attrs) scope.insert(a.var);
    return Body(std::move(el));
  }

  BodySeq content(int depth, std::set<std::string>& scope) {
    if (chance(0.2)) return {Body(chance(0.5) ? Body(Ok{}) : Body(Empty{}))};
    BodySeq body = seq(depth, scope, pick(1, 2), false);
    if (chance(0.3)) body.push_back(Body(Actions{{argument(scope)}}));
    return body;
  }

  std::mt19937& rng_;
  GrammarShape shape_;
  std::vector<int> params_;
  int rule_ = 0;
  int counter_ = 0;
};

}  // namespace

Grammar randomGrammar(std::mt19937& rng, const GrammarShape& shape) {
  return GrammarGen(rng, shape).run();
}

// ---- documents --------------------------------------------------------------

namespace {

struct NoSample {};

class Sampler {
 public:
  Sampler(const Grammar& g, std::mt19937& rng, int maxDepth, int maxWidth)
      : g_(g), rng_(rng), maxDepth_(maxDepth), maxWidth_(maxWidth) {}

  std::vector<XmlTree> call(const std::string& rule, int depth) {
    if (++calls_ > 2000) throw NoSample{};
    auto defs = g_.definitionsOf(rule);
    if (defs.empty()) throw NoSample{};
    const Clause& c = g_.clauses[defs[pick(0, static_cast<int>(defs.size()) - 1)]];
    std::vector<XmlTree> out;
    seq(c.body, depth, out);
    return out;
  }

 private:
  int pick(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }

  void seq(std::span<const Body> body, int depth, std::vector<XmlTree>& out) {
    for (const Body& b : body) item(b, depth, out);
  }

  void item(const Body& b, int depth, std::vector<XmlTree>& out) {
    if (const auto* o = b.as<Or>()) {
      seq(pick(0, 1) ? o->left : o->right, depth, out);
    } else if (const auto* bind = b.as<Bind>()) {
      seq(bind->body, depth, out);
    } else if (const auto* star = b.as<Star>()) {
      const int n = pick(0, 2);
      for (int i = 0; i < n; ++i) {
        const std::size_t before = out.size();
        seq(star->body, depth, out);
        if (out.size() == before) break;
      }
    } else if (b.is<Text>()) {
      out.push_back(textNode(pick(0, 1) ? "t" : "u"));
    } else if (b.is<Any>()) {
      out.push_back(randomTree(rng_, std::max(0, maxDepth_ - depth - 1), 2));
    } else if (const auto* call = b.as<Call>()) {
      auto trees = this->call(call->name, depth);
      for (auto& t : trees) out.push_back(std::move(t));
    } else if (const auto* el = b.as<ElementSpec>()) {
      if (depth >= maxDepth_) throw NoSample{};
      Attributes attrs;
      Env env;
      for (const auto& a : el->attrs) {
        std::string v = pick(0, 2) ? "x" : "y";
        attrs[a.attr] = v;
        env.bind(a.var, Value::string(v));
      }
      const BodySeq* branch = &el->elseBody;
      for (const auto& gb : el->guarded) {
        try {
          if (evalGuard(gb.guard, env)) {
            branch = &gb.body;
            break;
          }
        } catch (const EvalError&) {
          break;
        }
      }
      std::vector<XmlTree> children;
      seq(*branch, depth + 1, children);
      if (static_cast<int>(children.size()) > maxWidth_) throw NoSample{};
      out.push_back(element(el->tag, std::move(attrs), std::move(children)));
    }
  }

  const Grammar& g_;
  std::mt19937& rng_;
  int maxDepth_;
  int maxWidth_;
  int calls_ = 0;
};

}  // namespace

std::optional<std::vector<XmlTree>> sampleForest(const Grammar& g, std::string_view start,
                                                 std::mt19937& rng, int maxDepth, int maxWidth) {
  for (int attempt = 0; attempt < 8; ++attempt) {
    try {
      Sampler s(g, rng, maxDepth, maxWidth);
      auto forest = s.call(std::string(start), 0);
      if (static_cast<int>(forest.size()) <= maxWidth) return forest;
    } catch (const NoSample&) {
    }
  }
  return std::nullopt;
}

XmlTree randomTree(std::mt19937& rng, int depth, int width) {
  auto pick = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
  if (depth <= 0 || pick(0, 4) == 0) {
    if (pick(0, 1)) return textNode("r");
    return element(kTags[static_cast<std::size_t>(pick(0, 3))], {{"k", pick(0, 1) ? "x" : "y"}});
  }
  std::vector<XmlTree> children;
  const int n = pick(0, width);
  for (int i = 0; i < n; ++i) {
    XmlTree t = randomTree(rng, depth - 1, width);
    // Adjacent text would merge in a real document.
    if (t.text() && !children.empty() && children.back().text()) continue;
    children.push_back(std::move(t));
  }
  return element(kTags[static_cast<std::size_t>(pick(0, 3))], {{"k", pick(0, 1) ? "x" : "y"}},
                 std::move(children));
}

namespace {

// Every node of the forest, as (sibling list, index) pairs.
void collect(std::vector<XmlTree>& forest, std::vector<std::pair<std::vector<XmlTree>*, std::size_t>>& out) {
  for (std::size_t i = 0; i < forest.size(); ++i) {
    out.emplace_back(&forest, i);
    if (auto* el = std::get_if<XmlElement>(&forest[i].node)) collect(el->children, out);
  }
}

}  // namespace

std::vector<XmlTree> mutate(std::vector<XmlTree> forest, std::mt19937& rng) {
  auto pick = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
  std::vector<std::pair<std::vector<XmlTree>*, std::size_t>> nodes;
  collect(forest, nodes);
  if (nodes.empty()) {
    forest.push_back(randomTree(rng, 1, 2));
    return forest;
  }
  auto [list, index] = nodes[static_cast<std::size_t>(pick(0, static_cast<int>(nodes.size()) - 1))];
  XmlTree& node = (*list)[index];
  switch (pick(0, 3)) {
    case 0:
      list->erase(list->begin() + static_cast<std::ptrdiff_t>(index));
      break;
    case 1:
      if (auto* el = std::get_if<XmlElement>(&node.node)) {
        el->tag = kTags[static_cast<std::size_t>(pick(0, 3))];
      } else {
        node = randomTree(rng, 0, 0);
      }
      break;
    case 2:
      list->insert(list->begin() + static_cast<std::ptrdiff_t>(index), randomTree(rng, 1, 2));
      break;
    default:
      if (auto* el = std::get_if<XmlElement>(&node.node)) {
        if (el->attrs.empty()) {
          el->attrs["k"] = "x";
        } else {
          el->attrs.clear();
        }
      }
      break;
  }
  return forest;
}

// ---- runs -------------------------------------------------------------------

RunOutcome engineRun(const Grammar& normal, const PredictTable& table, std::string_view start,
                     std::span<const XmlTree> forest, MachineStats* stats) {
  RunOutcome out;
  const std::vector<SaxEvent> events = flattenForest(forest);
  try {
    out.value = run(normal, table, start, {}, events, stats);
    out.accepted = true;
  } catch (const ParseFailure& e) {
    out.error = e.what();
  }
  return out;
}

RunOutcome oracleRun(const Grammar& g, std::string_view start, std::span<const XmlTree> forest) {
  RunOutcome out;
  OracleResult r = acceptsForest(g, start, forest);
  if (r.accepted()) {
    out.accepted = true;
    out.value = *r.value;
  } else {
    out.error = r.truncated ? "no derivation (search truncated)" : "no derivation";
  }
  return out;
}

std::string describe(std::span<const XmlTree> forest) {
  std::string out;
  for (const XmlTree& t : forest) out += serialize(t);
  return out;
}

DifferentialReport runDifferential(std::uint32_t seed, int pairs, const GrammarShape& shape) {
  DifferentialReport report;
  std::mt19937 rng(seed);
  for (int attempt = 0; report.pairs < pairs && attempt < 100 * pairs; ++attempt) {
    Grammar g = randomGrammar(rng, shape);
    if (!checkGrammar(g).empty()) continue;
    CompiledGrammar c = compile(g, "R0");
    if (!c.ll1.ok) continue;
    ++report.grammars;
    for (int d = 0; d < 4 && report.pairs < pairs; ++d) {
      auto forest = sampleForest(g, "R0", rng);
      if (!forest) continue;
      if (d == 3) forest = mutate(std::move(*forest), rng);
      OracleResult o = acceptsForest(g, "R0", *forest);
      if (o.truncated) {
        ++report.skipped;
        continue;
      }
      RunOutcome e = engineRun(c.normal, c.table, "R0", *forest);
      ++report.pairs;
      if (e.error.find("EvalError") != std::string::npos) ++report.evalFailures;
      const bool agree = e.accepted == o.accepted() && (!e.accepted || e.value == *o.value);
      if (agree) {
        report.accepted += e.accepted ? 1 : 0;
        continue;
      }
      report.disagreements.push_back(
          Disagreement{prettyPrint(g), describe(*forest),
                       e.accepted ? toTermString(e.value) : "rejected: " + e.error,
                       o.accepted() ? toTermString(*o.value) : "rejected"});
    }
  }
  return report;
}

}  // namespace xmlgram::testing
