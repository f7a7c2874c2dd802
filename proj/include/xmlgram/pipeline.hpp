#pragma once

#include <string>
#include <string_view>

#include "xmlgram/analysis.hpp"
#include "xmlgram/ast.hpp"

namespace xmlgram {

/// A well-formed grammar prepared for the parsing machine.
struct CompiledGrammar {
  Grammar normal;
  std::string start;
  AnalysisResult sets;
  PredictTable table;
  LL1Report ll1;
};

/// Normalizes `g`, computes its sets from `startRule` and builds the table.
/// Throws AnalysisError when a call names an undefined rule.
CompiledGrammar compile(const Grammar& g, std::string_view startRule);

}  // namespace xmlgram
