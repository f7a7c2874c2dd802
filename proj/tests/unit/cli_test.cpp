#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>

#include "testing.hpp"
#include "xmlgram/cli.hpp"

using namespace xmlgram;
using namespace xmlgram::cli;

namespace {

struct Output {
  int code = 0;
  std::string out;
  std::string err;
};

std::string tempFile(const std::string& name, const std::string& content) {
  std::string path = std::string("/tmp/xmlgram_cli_test_") + name;
  std::ofstream(path, std::ios::binary) << content;
  return path;
}

Output check(const std::string& path) {
  std::ostringstream out, err;
  int code = cmdCheck(path, out, err);
  return {code, out.str(), err.str()};
}

Output tables(const std::string& path, TableFormat f) {
  std::ostringstream out, err;
  int code = cmdTables(path, f, std::nullopt, out, err);
  return {code, out.str(), err.str()};
}

Output parse(ParseCommand cmd) {
  std::ostringstream out, err;
  int code = cmdParse(cmd, out, err);
  return {code, out.str(), err.str()};
}

ParseCommand parseCmd(const std::string& grammar, const std::string& xml, const char* start) {
  ParseCommand cmd;
  cmd.grammarPath = grammar;
  cmd.xmlPath = xml;
  if (start) cmd.start = start;
  return cmd;
}

}  // namespace

TEST_CASE("check") {
  CHECK(check(testing::dataFile("test.xg")).code == kOk);
  CHECK(check(testing::dataFile("models.xg")).code == kOk);

  Output w = check(testing::dataFile("w_unbound.xg"));
  CHECK(w.code == kLanguageError);
  CHECK(w.err.find("variable x may be unbound") != std::string::npos);

  CHECK(check("/nonexistent/grammar.xg").code == kIoError);

  Output syntax = check(tempFile("syntax.xg", "@Grammar X A ::= <A/> end"));
  CHECK(syntax.code == kLanguageError);
  CHECK(syntax.err.find(":1:23: error:") != std::string::npos);

  Output conflict = check(testing::dataFile("conflict.xg"));
  CHECK(conflict.code == kLanguageError);
  CHECK(conflict.err.find("not LL(1)") != std::string::npos);
}

TEST_CASE("tables") {
  Output text = tables(testing::dataFile("test.xg"), TableFormat::Text);
  CHECK(text.code == kOk);
  CHECK(text.out.find("x = A$2 xs = A$1 { Cons(x, xs) }") != std::string::npos);

  Output kv = tables(testing::dataFile("test.xg"), TableFormat::Kv);
  CHECK(kv.code == kOk);
  CHECK(kv.out == tables(testing::dataFile("test.xg"), TableFormat::Kv).out);
  CHECK(kv.out.find("A$1\t/A\t1\n") != std::string::npos);

  Output conflict = tables(testing::dataFile("conflict.xg"), TableFormat::Text);
  CHECK(conflict.code == kLanguageError);
  CHECK(conflict.out.find(" !! ") != std::string::npos);

  Output empty = tables(testing::dataFile("empty.xg"), TableFormat::Kv);
  CHECK(empty.code == kOk);
  CHECK(empty.out.empty());
}

TEST_CASE("normalize") {
  std::ostringstream out, err;
  CHECK(cmdNormalize(testing::dataFile("test.xg"), out, err) == kOk);
  CHECK(out.str().find("A$1 ::= { Nil }.") != std::string::npos);
}

TEST_CASE("parse") {
  const std::string doc = tempFile("test.xml", R"(<A><B name="x"/><C name="y"/></A>)");
  Output r = parse(parseCmd(testing::dataFile("test.xg"), doc, "A"));
  CHECK(r.code == kOk);
  CHECK(r.out == "Cons(\"x\",Cons(\"y\",Nil))\n");

  ParseCommand flat = parseCmd(testing::dataFile("test.xg"), doc, nullptr);
  flat.flattenLists = true;
  flat.format = ValueFormat::Json;
  CHECK(parse(flat).out == "[\"x\",\"y\"]\n");

  Output models = parse(parseCmd(testing::dataFile("models.xg"), testing::dataFile("models.xml"), "Package"));
  CHECK(models.code == kOk);
  CHECK(models.out.find("Package(\"Library\",Class(\"Book\"") == 0);

  Output malformed = parse(parseCmd(testing::dataFile("test.xg"), tempFile("bad.xml", "<A>\n<B name=\"x\"></C></A>"), "A"));
  CHECK(malformed.code == kLanguageError);
  CHECK(malformed.err.find(":2:") != std::string::npos);
  CHECK(malformed.err.find("malformed XML") != std::string::npos);

  Output rejected = parse(parseCmd(testing::dataFile("test.xg"), tempFile("x.xml", "<X/>"), "A"));
  CHECK(rejected.code == kLanguageError);
  CHECK(rejected.err.find("NoPredictEntry at event 0") != std::string::npos);

  CHECK(parse(parseCmd(testing::dataFile("test.xg"), "/nonexistent.xml", "A")).code == kIoError);
  CHECK(parse(parseCmd(testing::dataFile("test.xg"), doc, "Nope")).code == kLanguageError);
}

TEST_CASE("parse with and without the oracle agree") {
  struct Case {
    const char* grammar;
    std::string xml;
    const char* start;
  };
  std::vector<Case> cases = {
      {"test.xg", tempFile("t1.xml", R"(<A><B name="x"/><C name="y"/></A>)"), "A"},
      {"test.xg", tempFile("t2.xml", "<A/>"), "A"},
      {"test.xg", tempFile("t3.xml", "<A><D/></A>"), "A"},
      {"models.xg", testing::dataFile("models.xml"), "Package"},
      {"models.xg", tempFile("m2.xml", R"(<Package name="p"><Package name="q"/></Package>)"), "Package"},
  };
  for (const Case& c : cases) {
    CAPTURE(c.xml);
    ParseCommand engine = parseCmd(testing::dataFile(c.grammar), c.xml, c.start);
    ParseCommand oracle = engine;
    oracle.oracle = true;
    Output a = parse(engine), b = parse(oracle);
    CHECK(a.code == b.code);
    CHECK(a.out == b.out);
  }
}
