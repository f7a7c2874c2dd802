#include "xmlgram/cli.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

#include "xmlgram/engine.hpp"
#include "xmlgram/frontend.hpp"
#include "xmlgram/normalize.hpp"
#include "xmlgram/oracle.hpp"
#include "xmlgram/pipeline.hpp"
#include "xmlgram/render.hpp"
#include "xmlgram/sax.hpp"
#include "xmlgram/wellformed.hpp"

namespace xmlgram::cli {

namespace {

std::optional<std::string> readFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) return std::nullopt;
  return buf.str();
}

// Reads, parses and checks a grammar; on failure reports and returns the
// exit code.
std::optional<int> loadGrammar(const std::string& path, Grammar& out, std::ostream& err) {
  auto source = readFile(path);
  if (!source) {
    err << path << ": cannot read file\n";
    return kIoError;
  }
  GrammarParseResult parsed = parseGrammar(*source);
  for (const auto& d : parsed.diagnostics) err << path << ":" << d.str() << "\n";
  if (!parsed.ok()) return kLanguageError;

  std::vector<WfError> errors = checkGrammar(*parsed.grammar);
  for (const auto& e : errors) err << path << ": " << e.str() << "\n";
  if (!errors.empty()) return kLanguageError;

  out = std::move(*parsed.grammar);
  return std::nullopt;
}

std::string defaultStart(const Grammar& g, const std::optional<std::string>& start) {
  if (start) return *start;
  return g.clauses.empty() ? std::string() : g.clauses.front().name;
}

std::optional<int> compileOrReport(const std::string& path, const Grammar& g,
                                   const std::string& start, CompiledGrammar& out,
                                   std::ostream& err) {
  try {
    out = compile(g, start);
  } catch (const AnalysisError& e) {
    err << path << ": " << e.what() << "\n";
    return kLanguageError;
  }
  return std::nullopt;
}

void reportConflicts(const std::string& path, const CompiledGrammar& c, std::ostream& err) {
  err << path << ": grammar is not LL(1)\n";
  for (const auto& m : c.ll1.messages) err << "  " << m << "\n";
}

}  // namespace

int cmdCheck(const std::string& grammarPath, std::ostream& out, std::ostream& err) {
  Grammar g;
  if (auto code = loadGrammar(grammarPath, g, err)) return *code;
  CompiledGrammar c;
  if (auto code = compileOrReport(grammarPath, g, defaultStart(g, std::nullopt), c, err)) return *code;
  if (!c.ll1.ok) {
    reportConflicts(grammarPath, c, err);
    return kLanguageError;
  }
  out << grammarPath << ": ok: grammar " << g.name << ", " << c.normal.clauseNames().size()
      << " rules and " << c.normal.clauses.size() << " definitions in normal form, LL(1)\n";
  return kOk;
}

int cmdTables(const std::string& grammarPath, TableFormat format,
              const std::optional<std::string>& start, std::ostream& out, std::ostream& err) {
  Grammar g;
  if (auto code = loadGrammar(grammarPath, g, err)) return *code;
  CompiledGrammar c;
  if (auto code = compileOrReport(grammarPath, g, defaultStart(g, start), c, err)) return *code;
  out << (format == TableFormat::Text ? renderTableText(c.normal, c.table)
                                      : renderTableKv(c.normal, c.table));
  if (!c.ll1.ok) {
    reportConflicts(grammarPath, c, err);
    return kLanguageError;
  }
  return kOk;
}

int cmdNormalize(const std::string& grammarPath, std::ostream& out, std::ostream& err) {
  Grammar g;
  if (auto code = loadGrammar(grammarPath, g, err)) return *code;
  out << prettyPrint(normalizeGrammar(g));
  return kOk;
}

int cmdParse(const ParseCommand& cmd, std::ostream& out, std::ostream& err) {
  Grammar g;
  if (auto code = loadGrammar(cmd.grammarPath, g, err)) return *code;
  const std::string start = defaultStart(g, cmd.start);
  if (!g.defines(start)) {
    err << cmd.grammarPath << ": no rule named '" << start << "'\n";
    return kLanguageError;
  }

  std::ifstream file;
  std::istream* in = &std::cin;
  if (cmd.xmlPath != "-") {
    file.open(cmd.xmlPath, std::ios::binary);
    if (!file) {
      err << cmd.xmlPath << ": cannot read file\n";
      return kIoError;
    }
    in = &file;
  }
  const SaxOptions saxOptions{cmd.keepWhitespace};

  Value value;
  try {
    if (cmd.oracle) {
      std::vector<SaxEvent> events = readEvents(*in, saxOptions);
      std::vector<XmlTree> forest = buildForest(events);
      OracleResult r = acceptsForest(g, start, forest, OracleOptions::fromEnvironment());
      if (r.ambiguous()) err << cmd.xmlPath << ": warning: grammar is ambiguous on this document\n";
      if (!r.accepted()) {
        err << cmd.xmlPath << ": document does not satisfy rule " << start
            << (r.truncated ? " (search was cut short)" : "") << "\n";
        return kLanguageError;
      }
      value = *r.value;
    } else {
      CompiledGrammar c;
      if (auto code = compileOrReport(cmd.grammarPath, g, start, c, err)) return *code;
      if (!c.ll1.ok) {
        reportConflicts(cmd.grammarPath, c, err);
        return kLanguageError;
      }
      SaxReader reader(*in, saxOptions);
      ReaderEventSource source(reader);
      value = run(c.normal, c.table, start, {}, source);
    }
  } catch (const XmlError& e) {
    err << cmd.xmlPath << ":" << e.what() << "\n";
    return kLanguageError;
  } catch (const ParseFailure& e) {
    err << cmd.xmlPath << ": " << e.what() << "\n";
    return kLanguageError;
  }

  if (cmd.flattenLists) value = flattenLists(value);
  if (cmd.format == ValueFormat::Json) {
    out << toJson(value).dump() << "\n";
  } else {
    out << toTermString(value) << "\n";
  }
  return kOk;
}

}  // namespace xmlgram::cli
