#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "xmlgram/ast.hpp"

namespace xmlgram {

struct ParseDiagnostic {
  enum class Severity { Error, Warning };

  SourceSpan span;
  std::string message;
  Severity severity = Severity::Error;

  /// `line:col: error: message`
  std::string str() const;
};

struct GrammarParseResult {
  std::optional<Grammar> grammar;  // absent iff an error diagnostic was reported
  std::vector<ParseDiagnostic> diagnostics;

  bool ok() const { return grammar.has_value(); }
};

struct GrammarParseOptions {
  /// Accept '$' inside identifiers. Off for user sources, where '$' is
  /// reserved for names invented by normalization; on for re-reading
  /// normalized output.
  bool allowGeneratedNames = false;
};

/// Parses the `.xg` grammar language:
///
///   @Grammar Name
///     Rule(p, q) ::= <Tag a v=attr when guard> body when g => body else body </Tag>
///                    x = Call(e)* [y, z] = (A | B) { Ctor(x, y), z }.
///   end
///
/// Errors are reported per rule; after an error the parser resynchronizes at
/// the next `.` and keeps going.
GrammarParseResult parseGrammar(std::string_view source, GrammarParseOptions options = {});

/// Concrete syntax that parseGrammar reads back to a structurally equal AST.
std::string prettyPrint(const Grammar& g);
std::string prettyPrint(const Clause& c);
/// Body of a clause without head or terminator, as used in table cells.
std::string prettyPrint(std::span<const Body> seq);
std::string prettyPrint(const Expr& e);

}  // namespace xmlgram
