#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "xmlgram/ast.hpp"
#include "xmlgram/env.hpp"
#include "xmlgram/value.hpp"
#include "xmlgram/xml.hpp"

namespace xmlgram {

struct OracleOptions {
  /// Stop after this many complete derivations.
  std::size_t maxDerivations = 10000;
  /// Stop after this many body items have been tried.
  std::size_t maxSteps = 20'000'000;
  /// Select the first satisfied guard in textual order. When false every
  /// satisfied guard's branch is explored.
  bool firstGuardOnly = true;
  /// ANY yields the skipped tree as a value instead of null.
  bool anyYieldsTree = false;

  /// Defaults, with maxDerivations taken from XMLGRAM_MAX_DERIVATIONS when set.
  static OracleOptions fromEnvironment();
};

struct Derivation {
  std::size_t consumed = 0;  // trees consumed from the front of the input
  Env env;
  Value value;
};

struct SatisfyResult {
  std::vector<Derivation> derivations;
  bool truncated = false;  // a cap was hit; the set may be incomplete
};

/// All ways `seq` can match a prefix of `trees` starting from `env`. Works
/// on any well-formed grammar: alternatives and repetition are interpreted
/// directly (a repetition yields Cons/Nil terms, longest match first, and
/// every iteration must consume input). A call that re-enters itself with
/// the same arguments at the same input position is cut.
SatisfyResult satisfy(const Grammar& g, std::span<const Body> seq, std::span<const XmlTree> trees,
                      const Env& env, const OracleOptions& options = {});

struct OracleResult {
  std::optional<Value> value;      // first derivation consuming all input
  std::vector<Value> distinct;     // every distinct value found
  bool truncated = false;

  bool accepted() const { return value.has_value(); }
  bool ambiguous() const { return distinct.size() > 1; }
};

/// Whether `doc` satisfies `startRule(args)`, and with which value.
OracleResult accepts(const Grammar& g, std::string_view startRule, const XmlTree& doc,
                     const OracleOptions& options = {}, std::vector<Value> args = {});

/// As accepts, for a sequence of sibling trees (possibly empty).
OracleResult acceptsForest(const Grammar& g, std::string_view startRule,
                           std::span<const XmlTree> forest, const OracleOptions& options = {},
                           std::vector<Value> args = {});

/// Value used for a skipped tree when OracleOptions::anyYieldsTree is set:
/// `Element("tag", [("attr","value"),...], [children])`, text as a string.
Value treeValue(const XmlTree& tree);

}  // namespace xmlgram
