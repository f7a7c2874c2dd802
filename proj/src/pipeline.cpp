#include "xmlgram/pipeline.hpp"

#include "xmlgram/normalize.hpp"

namespace xmlgram {

CompiledGrammar compile(const Grammar& g, std::string_view startRule) {
  CompiledGrammar c;
  c.normal = normalizeGrammar(g);
  c.start = std::string(startRule);
  c.sets = computeSets(c.normal, startRule);
  c.table = buildPredictTable(c.normal, c.sets);
  c.ll1 = checkLL1(c.normal, c.table);
  return c;
}

}  // namespace xmlgram
