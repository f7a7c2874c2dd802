#include <doctest.h>

#include <random>

#include "testing.hpp"
#include "xmlgram/env.hpp"
#include "xmlgram/render.hpp"
#include "xmlgram/xml.hpp"

using namespace xmlgram;

TEST_CASE("flattenTree linearizes in pre-order") {
  XmlTree t = element("A", {{"x", "1"}}, {element("B")});
  std::vector<SaxEvent> expected = {StartTag{"A", {{"x", "1"}}}, StartTag{"B", {}}, EndTag{"B"},
                                    EndTag{"A"}};
  CHECK(flattenTree(t) == expected);

  CHECK(flattenTree(textNode("hi")) == std::vector<SaxEvent>{TextEvt{"hi"}});
  CHECK(flattenTree(element("A")) == std::vector<SaxEvent>{StartTag{"A", {}}, EndTag{"A"}});
}

TEST_CASE("buildForest inverts flattenForest") {
  std::mt19937 rng(7);
  for (int i = 0; i < 200; ++i) {
    std::vector<XmlTree> forest;
    const int n = static_cast<int>(rng() % 3);
    for (int k = 0; k < n; ++k) forest.push_back(testing::randomTree(rng, 3, 3));
    CHECK(buildForest(flattenForest(forest)) == forest);
  }
  std::vector<SaxEvent> unbalanced = {StartTag{"A", {}}, EndTag{"B"}};
  CHECK_THROWS_AS(buildForest(unbalanced), std::invalid_argument);
  std::vector<SaxEvent> open = {StartTag{"A", {}}};
  CHECK_THROWS_AS(buildForest(open), std::invalid_argument);
}

TEST_CASE("flattened streams are balanced") {
  std::mt19937 rng(11);
  for (int i = 0; i < 300; ++i) {
    XmlTree t = testing::randomTree(rng, 4, 4);
    long depth = 0;
    for (const SaxEvent& e : flattenTree(t)) {
      if (std::holds_alternative<StartTag>(e)) ++depth;
      if (std::holds_alternative<EndTag>(e)) --depth;
      REQUIRE(depth >= 0);
    }
    CHECK(depth == 0);
  }
}

TEST_CASE("envMerge prefers the right operand") {
  Env x1({{"x", Value::integer(1)}});
  Env y2({{"y", Value::integer(2)}});
  Env x2({{"x", Value::integer(2)}});
  CHECK(envMerge(x1, y2) == Env({{"x", Value::integer(1)}, {"y", Value::integer(2)}}));
  CHECK(envMerge(x1, x2) == x2);
  CHECK(envMerge(Env(), Env()) == Env());
}

TEST_CASE("envMerge is associative with the empty environment as identity") {
  std::mt19937 rng(3);
  auto randomEnv = [&] {
    Env e;
    for (const char* n : {"a", "b", "c", "d"}) {
      if (rng() % 2) e.bind(n, Value::integer(static_cast<int>(rng() % 5)));
    }
    return e;
  };
  for (int i = 0; i < 500; ++i) {
    Env a = randomEnv(), b = randomEnv(), c = randomEnv();
    CHECK(envMerge(envMerge(a, b), c) == envMerge(a, envMerge(b, c)));
    CHECK(envMerge(a, Env()) == a);
    CHECK(envMerge(Env(), a) == a);
  }
}

TEST_CASE("env extension and restriction") {
  Env e({{"x", Value::integer(1)}, {"y", Value::integer(2)}});
  CHECK(e.extended("x", Value::integer(5)).find("x")->asInt() == 5);
  CHECK(e.find("x")->asInt() == 1);
  Env r = e.restricted(NameSet{"y", "z"});
  CHECK(r.size() == 1);
  CHECK(r.contains("y"));
}

TEST_CASE("values compare structurally") {
  Value a = Value::term("Cons", {Value::string("a"), Value::term("Nil")});
  Value b = Value::term("Cons", {Value::string("a"), Value::term("Nil")});
  CHECK(a == b);
  CHECK_FALSE(a == Value::term("Cons", {Value::string("b"), Value::term("Nil")}));
  CHECK_FALSE(Value::list({}) == Value::tuple({}));
  CHECK_FALSE(Value::integer(1) == Value::string("1"));
}

TEST_CASE("long Cons chains are built, compared and destroyed without recursion") {
  Value a = Value::term("Nil");
  Value b = Value::term("Nil");
  for (int i = 0; i < 300000; ++i) {
    a = Value::term("Cons", {Value::integer(i), a});
    b = Value::term("Cons", {Value::integer(i), b});
  }
  CHECK(a == b);
}

TEST_CASE("term syntax") {
  CHECK(toTermString(Value::term("Cons", {Value::string("x"), Value::term("Nil")})) ==
        "Cons(\"x\",Nil)");
  CHECK(toTermString(Value::list({Value::integer(1), Value::boolean(true)})) == "[1,true]");
  CHECK(toTermString(Value::tuple({Value::integer(10), Value::integer(20)})) == "(10,20)");
  CHECK(toTermString(Value::null()) == "null");
  CHECK(toTermString(Value::string("a\"b\\")) == "\"a\\\"b\\\\\"");
}

TEST_CASE("json rendering") {
  Value v = Value::term("P", {Value::string("n"), Value::list({Value::integer(1)}), Value::null()});
  CHECK(toJson(v).dump() == R"({"args":["n",[1],null],"ctor":"P"})");
}

TEST_CASE("flattenLists turns Cons chains into lists") {
  Value chain = Value::term("Cons", {Value::string("x"),
                                     Value::term("Cons", {Value::string("y"), Value::term("Nil")})});
  CHECK(flattenLists(Value::term("Wrap", {chain})) ==
        Value::term("Wrap", {Value::list({Value::string("x"), Value::string("y")})}));
  CHECK(flattenLists(Value::term("Nil")) == Value::list({}));
}

TEST_CASE("serialize escapes markup") {
  XmlTree t = element("A", {{"q", "a\"<&"}}, {textNode("1 < 2 & 3")});
  CHECK(serialize(t) == "<A q=\"a&quot;&lt;&amp;\">1 &lt; 2 &amp; 3</A>");
  CHECK(serialize(element("E")) == "<E/>");
}
