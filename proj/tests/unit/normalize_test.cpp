#include <doctest.h>

#include <algorithm>
#include <random>

#include "testing.hpp"
#include "xmlgram/normalize.hpp"
#include "xmlgram/oracle.hpp"
#include "xmlgram/sax.hpp"
#include "xmlgram/wellformed.hpp"

using namespace xmlgram;

namespace {

std::size_t countNodes(const Grammar& g, bool (*pred)(const Body&)) {
  std::size_t n = 0;
  for (const Clause& c : g.clauses) forEachBody(c.body, [&](const Body& b) { n += pred(b) ? 1 : 0; });
  return n;
}

bool isOr(const Body& b) { return b.is<Or>(); }
bool isStar(const Body& b) { return b.is<Star>(); }

std::vector<std::string> sortedValues(const OracleResult& r) {
  std::vector<std::string> out;
  for (const Value& v : r.distinct) out.push_back(toTermString(v));
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

TEST_CASE("the Test grammar normalizes to the published form") {
  Grammar n = normalizeGrammar(testing::loadData("test.xg"));
  CHECK(isNormalForm(n));
  CHECK(n.clauses.size() == 7);
  CHECK(testing::alphaEquivalent(n, testing::loadData("test_normal.xg"), "A"));
  CHECK(prettyPrint(n) ==
        "@Grammar Test\n"
        "  A ::= b = <A> A$1 </A> { b }.\n"
        "  A$1 ::= x = A$2 xs = A$1 { Cons(x, xs) }.\n"
        "  A$1 ::= { Nil }.\n"
        "  A$2 ::= B.\n"
        "  A$2 ::= C.\n"
        "  B ::= <B n=name> OK </B> { n }.\n"
        "  C ::= <C n=name> OK </C> { n }.\n"
        "end\n");
}

TEST_CASE("liftDisjunction") {
  Grammar test = testing::loadData("test.xg");
  Grammar lifted = liftDisjunction(test);
  CHECK(countNodes(lifted, isOr) == 0);
  // (B | C) becomes a two-definition rule calling B and C.
  bool found = false;
  for (const std::string& name : lifted.clauseNames()) {
    auto defs = lifted.definitionsOf(name);
    if (name.find('$') == std::string::npos || defs.size() != 2) continue;
    CHECK(lifted.clauses[defs[0]].body == BodySeq{Body(Call{"B", {}})});
    CHECK(lifted.clauses[defs[1]].body == BodySeq{Body(Call{"C", {}})});
    found = true;
  }
  CHECK(found);

  Grammar plain = testing::parse("@Grammar P A ::= <A> B </A>. B ::= <B/>. end");
  CHECK(liftDisjunction(plain) == plain);

  Grammar nested = testing::parse(R"(
    @Grammar N
      S ::= <S> v = (A | (B | C)) </S> {v}.
      A ::= <A/> {1}. B ::= <B/> {2}. C ::= <C/> {3}.
    end)");
  Grammar ln = liftDisjunction(nested);
  CHECK(countNodes(ln, isOr) == 0);
  std::size_t fresh = 0, alternatives = 0;
  for (const std::string& name : ln.clauseNames()) {
    if (name.find('$') == std::string::npos) continue;
    ++fresh;
    for (std::size_t i : ln.definitionsOf(name)) {
      if (ln.clauses[i].body.size() == 1 && ln.clauses[i].body[0].is<Call>() &&
          ln.clauses[i].body[0].as<Call>()->name.find('$') == std::string::npos) {
        ++alternatives;
      }
    }
  }
  // The inner alternative splits into further definitions of the same rule.
  CHECK(fresh == 1);
  CHECK(alternatives == 3);
  for (const char* doc : {"A", "B", "C"}) {
    XmlTree t = element("S", {}, {element(doc)});
    CHECK(accepts(nested, "S", t).value == accepts(ln, "S", t).value);
  }
}

TEST_CASE("an alternative binding names returns them") {
  Grammar g = testing::parse(R"(
    @Grammar G
      S ::= <S> (x = X y = Y | y = Y x = X) {Pair(x, y)} </S>.
      X ::= <X/> {"x"}. Y ::= <Y/> {"y"}.
    end)");
  Grammar n = normalizeGrammar(g);
  CHECK(isNormalForm(n));
  CHECK(checkGrammar(n).empty());
  for (auto kids : {std::vector<XmlTree>{element("X"), element("Y")},
                    std::vector<XmlTree>{element("Y"), element("X")}}) {
    XmlTree t = element("S", {}, kids);
    auto before = accepts(g, "S", t);
    REQUIRE(before.accepted());
    CHECK(*before.value == Value::term("Pair", {Value::string("x"), Value::string("y")}));
    CHECK(accepts(n, "S", t).value == before.value);
  }
}

TEST_CASE("liftElementGuards") {
  Grammar single = testing::parse("@Grammar G A ::= <A> B </A>. B ::= OK. end");
  CHECK(liftElementGuards(single) == single);

  Grammar guarded = testing::parse(R"(
    @Grammar G
      A ::= <A k when k = "x" => B C else C </A>.
      B ::= <B/> {"b"}. C ::= <C/> {"c"}.
    end)");
  Grammar lifted = liftElementGuards(guarded);
  const auto* el = lifted.clauses[0].body[0].as<ElementSpec>();
  REQUIRE(el);
  REQUIRE(el->guarded.size() == 1);
  CHECK(el->guarded[0].body.size() == 1);
  CHECK(el->guarded[0].body[0].is<Call>());
  CHECK(el->elseBody == BodySeq{Body(Call{"C", {}})});
  CHECK(lifted.clauses.size() == guarded.clauses.size() + 1);
  for (const char* k : {"x", "y"}) {
    for (auto kids : {std::vector<XmlTree>{element("B"), element("C")}, std::vector<XmlTree>{element("C")}}) {
      XmlTree t = element("A", {{"k", k}}, kids);
      CHECK(accepts(guarded, "A", t).value == accepts(lifted, "A", t).value);
    }
  }

  Grammar models = testing::loadData("models.xg");
  Grammar lm = liftElementGuards(models);
  // The Class element keeps one call as content; the binding moves outside.
  const Clause& cls = lm.clauses[lm.definitionsOf("Class")[0]];
  const auto* bind = cls.body[0].as<Bind>();
  REQUIRE(bind);
  CHECK(bind->names == std::vector<std::string>{"elements"});
  const auto* clsEl = bind->body[0].as<ElementSpec>();
  REQUIRE(clsEl);
  CHECK(clsEl->elseBody.size() == 1);
}

TEST_CASE("element content that binds and continues is lifted with its bindings") {
  Grammar g = testing::parse(R"(
    @Grammar G
      A ::= <A n> v = B w = C </A> {Got(n, v, w)}.
      B ::= <B/> {"b"}. C ::= <C/> {"c"}.
    end)");
  Grammar n = normalizeGrammar(g);
  CHECK(isNormalForm(n));
  CHECK(checkGrammar(n).empty());
  XmlTree t = element("A", {{"n", "1"}}, {element("B"), element("C")});
  auto v = accepts(g, "A", t);
  REQUIRE(v.accepted());
  CHECK(*v.value == Value::term("Got", {Value::string("1"), Value::string("b"), Value::string("c")}));
  CHECK(accepts(n, "A", t).value == v.value);
}

TEST_CASE("removeStar") {
  Grammar lifted = liftDisjunction(testing::loadData("test.xg"));
  Grammar removed = removeStar(lifted);
  CHECK(countNodes(removed, isStar) == 0);
  bool consRule = false, nilRule = false;
  for (const Clause& c : removed.clauses) {
    if (c.body.size() == 3 && c.body[2] == Body(Actions{{construct("Cons", {var("x"), var("xs")})}})) {
      consRule = true;
    }
    if (c.body == BodySeq{Body(Actions{{construct("Nil")}})}) nilRule = true;
  }
  CHECK(consRule);
  CHECK(nilRule);

  Grammar plain = testing::parse("@Grammar P A ::= <A> B </A>. B ::= <B/>. end");
  CHECK(removeStar(plain) == plain);

  Grammar anyStar = testing::parse("@Grammar G A ::= <A> ANY* </A>. end");
  Grammar n = normalizeGrammar(anyStar);
  CHECK(isNormalForm(n));
  XmlTree doc = element("A", {}, {element("B"), element("C")});
  auto r = accepts(n, "A", doc);
  REQUIRE(r.accepted());
  CHECK(*r.value == Value::term("Cons", {Value::null(), Value::term("Cons", {Value::null(), Value::term("Nil")})}));
}

TEST_CASE("the Models grammar normalizes and keeps its meaning") {
  Grammar models = testing::loadData("models.xg");
  Grammar n = normalizeGrammar(models);
  CHECK(isNormalForm(n));
  CHECK(checkGrammar(n).empty());
  CHECK(countNodes(n, isOr) == 0);
  CHECK(countNodes(n, isStar) == 0);
  // Whole-body alternatives become sibling definitions.
  CHECK(n.definitionsOf("ClassElement").size() == 2);
  CHECK(n.definitionsOf("PackageElement").size() == 3);

  auto forest = buildForest(readEvents(testing::readData("models.xml")));
  REQUIRE(forest.size() == 1);
  auto before = accepts(models, "Package", forest[0]);
  REQUIRE(before.accepted());
  CHECK(accepts(n, "Package", forest[0]).value == before.value);
}

TEST_CASE("normalization is idempotent") {
  for (const char* file : {"test.xg", "models.xg", "test_normal.xg"}) {
    Grammar n = normalizeGrammar(testing::loadData(file));
    CHECK(normalizeGrammar(n) == n);
  }
  std::mt19937 rng(21);
  for (int i = 0; i < 200; ++i) {
    Grammar g = testing::randomGrammar(rng);
    if (!checkGrammar(g).empty()) continue;
    Grammar n = normalizeGrammar(g);
    CAPTURE(prettyPrint(g));
    CHECK(isNormalForm(n));
    CHECK(checkGrammar(n).empty());
    CHECK(normalizeGrammar(n) == n);
  }
}

TEST_CASE("normalization preserves the language and the values") {
  std::mt19937 rng(1234);
  int compared = 0, acceptedCount = 0;
  for (int i = 0; i < 250; ++i) {
    Grammar g = testing::randomGrammar(rng);
    if (!checkGrammar(g).empty()) continue;
    Grammar n = normalizeGrammar(g);
    for (int d = 0; d < 4; ++d) {
      auto forest = testing::sampleForest(g, "R0", rng);
      if (!forest) continue;
      if (d % 2) forest = testing::mutate(*forest, rng);
      auto a = acceptsForest(g, "R0", *forest);
      auto b = acceptsForest(n, "R0", *forest);
      if (a.truncated || b.truncated) continue;
      CAPTURE(prettyPrint(g));
      CAPTURE(testing::describe(*forest));
      CHECK(a.accepted() == b.accepted());
      CHECK(sortedValues(a) == sortedValues(b));
      ++compared;
      acceptedCount += a.accepted() ? 1 : 0;
    }
  }
  CHECK(compared >= 300);
  CHECK(acceptedCount >= compared / 3);
}

TEST_CASE("fresh names avoid user names") {
  Grammar g = testing::parse(R"(
    @Grammar G
      A ::= <A> (B | C) </A>.
      B ::= <B/>. C ::= <C/>.
    end)");
  g.clauses.push_back(Clause{"A$1", {}, {Body(Ok{})}, {}});
  Grammar n = normalizeGrammar(g);
  CHECK(n.definitionsOf("A$1").size() == 1);
  CHECK(n.definitionsOf("A$2").size() == 2);
}
