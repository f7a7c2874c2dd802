#include <iostream>
#include <map>

#include <CLI11.hpp>

#include "xmlgram/cli.hpp"

namespace cli = xmlgram::cli;

int main(int argc, char** argv) {
  CLI::App app{"Grammar-driven streaming XML parser"};
  app.require_subcommand(1);

  std::string grammar;

  auto* check = app.add_subcommand("check", "Check a grammar: syntax, well-formedness, LL(1)");
  check->add_option("grammar", grammar, "Grammar file (.xg)")->required();

  auto* tables = app.add_subcommand("tables", "Print the predict table of a grammar");
  tables->add_option("grammar", grammar, "Grammar file (.xg)")->required();
  cli::TableFormat tableFormat = cli::TableFormat::Text;
  std::optional<std::string> tableStart;
  tables->add_option("--format", tableFormat, "text or kv")
      ->transform(CLI::CheckedTransformer(
          std::map<std::string, cli::TableFormat>{{"text", cli::TableFormat::Text},
                                                  {"kv", cli::TableFormat::Kv}}));
  tables->add_option("--start", tableStart, "Start rule (default: first rule)");

  auto* normalize = app.add_subcommand("normalize", "Print the grammar in normal form");
  normalize->add_option("grammar", grammar, "Grammar file (.xg)")->required();

  auto* parse = app.add_subcommand("parse", "Parse a document and print the synthesized value");
  cli::ParseCommand cmd;
  parse->add_option("grammar", cmd.grammarPath, "Grammar file (.xg)")->required();
  parse->add_option("document", cmd.xmlPath, "XML document, - for standard input")->required();
  parse->add_option("--start", cmd.start, "Start rule (default: first rule)");
  parse->add_option("--format", cmd.format, "term or json")
      ->transform(CLI::CheckedTransformer(
          std::map<std::string, cli::ValueFormat>{{"term", cli::ValueFormat::Term},
                                                  {"json", cli::ValueFormat::Json}}));
  parse->add_flag("--oracle", cmd.oracle, "Use the backtracking reference interpreter");
  parse->add_flag("--keep-whitespace", cmd.keepWhitespace, "Report whitespace-only text");
  parse->add_flag("--flatten-lists", cmd.flattenLists, "Print Cons/Nil chains as lists");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : cli::kIoError;
  }

  if (*check) return cli::cmdCheck(grammar, std::cout, std::cerr);
  if (*tables) return cli::cmdTables(grammar, tableFormat, tableStart, std::cout, std::cerr);
  if (*normalize) return cli::cmdNormalize(grammar, std::cout, std::cerr);
  return cli::cmdParse(cmd, std::cout, std::cerr);
}
