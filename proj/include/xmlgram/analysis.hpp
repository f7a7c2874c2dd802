#pragma once

#include <map>
#include <optional>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "xmlgram/ast.hpp"
#include "xmlgram/token.hpp"

namespace xmlgram {

using TokenSet = std::set<Token>;

class AnalysisError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct AnalysisResult {
  std::map<std::string, bool, std::less<>> nullable;
  std::map<std::string, TokenSet, std::less<>> first;
  std::map<std::string, TokenSet, std::less<>> follow;

  bool isNullable(std::string_view clause) const;
  const TokenSet& firstOf(std::string_view clause) const;
  const TokenSet& followOf(std::string_view clause) const;

  bool operator==(const AnalysisResult&) const = default;
};

using NullableMap = std::map<std::string, bool, std::less<>>;

bool bodyNull(const Body& b, const NullableMap& nullable);
bool seqNull(std::span<const Body> seq, const NullableMap& nullable);
/// Tokens that can begin `seq`: the first sets of its items up to and
/// including the first one that is not nullable.
TokenSet seqFirst(std::span<const Body> seq, const AnalysisResult& sets);

/// Least fixpoint of nullable/first/follow. follow(start) contains the end of
/// input. When `trace` is given it receives the sets after every round.
/// Throws AnalysisError when a call names an undefined rule.
AnalysisResult computeSets(const Grammar& g, std::string_view startRule,
                           std::vector<AnalysisResult>* trace = nullptr);

struct Conflict {
  std::string clause;
  Token token;
  std::vector<std::size_t> definitions;  // indices into Grammar::clauses

  std::string str(const Grammar& g) const;
};

/// Rows are rules, columns tokens, cells indices into Grammar::clauses. A
/// Wildcard column holds the row default used for start tags and text that
/// have no exact entry.
struct PredictTable {
  std::map<std::pair<std::string, Token>, std::size_t> entries;
  std::vector<Conflict> conflicts;

  /// Definition to run for `clause` when the next event has token `t`.
  std::optional<std::size_t> predict(std::string_view clause, const Token& t) const;
};

PredictTable buildPredictTable(const Grammar& g, const AnalysisResult& sets);

struct LL1Report {
  bool ok = true;
  std::vector<std::string> messages;
};

LL1Report checkLL1(const Grammar& g, const PredictTable& table);

/// Position of definition `index` among the definitions sharing its name.
std::size_t definitionOrdinal(const Grammar& g, std::size_t index);

/// Aligned text table: one row per rule, columns `t` and `/t` for every
/// element tag, then TEXT, `*` and the end-of-input column when used.
std::string renderTableText(const Grammar& g, const PredictTable& table);

/// `clause<TAB>token<TAB>definition` lines, sorted; the definition is the
/// 0-based position among the rule's definitions.
std::string renderTableKv(const Grammar& g, const PredictTable& table);

}  // namespace xmlgram
