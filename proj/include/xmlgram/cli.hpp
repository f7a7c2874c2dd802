#pragma once

#include <iosfwd>
#include <optional>
#include <string>

namespace xmlgram::cli {

// Exit codes.
inline constexpr int kOk = 0;
inline constexpr int kLanguageError = 1;
inline constexpr int kIoError = 2;

enum class TableFormat { Text, Kv };
enum class ValueFormat { Term, Json };

struct ParseCommand {
  std::string grammarPath;
  std::string xmlPath;  // "-" reads standard input
  std::optional<std::string> start;  // default: the first rule
  ValueFormat format = ValueFormat::Term;
  bool oracle = false;
  bool keepWhitespace = false;
  bool flattenLists = false;
};

int cmdCheck(const std::string& grammarPath, std::ostream& out, std::ostream& err);
int cmdTables(const std::string& grammarPath, TableFormat format,
              const std::optional<std::string>& start, std::ostream& out, std::ostream& err);
int cmdNormalize(const std::string& grammarPath, std::ostream& out, std::ostream& err);
int cmdParse(const ParseCommand& cmd, std::ostream& out, std::ostream& err);

}  // namespace xmlgram::cli
