#include "xmlgram/analysis.hpp"

#include <algorithm>

#include "xmlgram/frontend.hpp"

namespace xmlgram {

namespace {

const TokenSet kNoTokens;

bool lookupNullable(const NullableMap& nullable, std::string_view name) {
  auto it = nullable.find(name);
  return it != nullable.end() && it->second;
}

TokenSet itemFirst(const Body& b, const AnalysisResult& sets) {
  TokenSet out;
  if (const auto* el = b.as<ElementSpec>()) {
    out.insert(Token::startTag(el->tag));
  } else if (b.is<Text>()) {
    out.insert(Token::text());
  } else if (b.is<Any>()) {
    out.insert(Token::wildcard());
  } else if (const auto* call = b.as<Call>()) {
    out = sets.firstOf(call->name);
  } else if (const auto* bind = b.as<Bind>()) {
    out = seqFirst(bind->body, sets);
  } else if (const auto* star = b.as<Star>()) {
    out = seqFirst(star->body, sets);
  } else if (const auto* o = b.as<Or>()) {
    out = seqFirst(o->left, sets);
    TokenSet r = seqFirst(o->right, sets);
    out.insert(r.begin(), r.end());
  }
  return out;
}

bool addAll(TokenSet& into, const TokenSet& from) {
  const std::size_t before = into.size();
  into.insert(from.begin(), from.end());
  return into.size() != before;
}

class SetBuilder {
 public:
  SetBuilder(const Grammar& g, AnalysisResult& r) : g_(g), r_(r) {}

  bool round() {
    changed_ = false;
    for (const Clause& c : g_.clauses) {
      if (seqNull(c.body, r_.nullable) && !r_.nullable[c.name]) {
        r_.nullable[c.name] = true;
        changed_ = true;
      }
      changed_ = addAll(r_.first[c.name], seqFirst(c.body, r_)) || changed_;
      // Copy: propagate may insert into follow(c) itself.
      TokenSet after = r_.follow[c.name];
      propagate(c.body, after);
    }
    return changed_;
  }

 private:
  // Adds to the follow set of every call in `seq` what may come after it,
  // given that `after` may follow the whole of `seq`.
  void propagate(std::span<const Body> seq, const TokenSet& after) {
    for (std::size_t i = 0; i < seq.size(); ++i) {
      auto rest = seq.subspan(i + 1);
      TokenSet next = seqFirst(rest, r_);
      if (seqNull(rest, r_.nullable)) next.insert(after.begin(), after.end());
      const Body& b = seq[i];
      if (const auto* call = b.as<Call>()) {
        changed_ = addAll(r_.follow[call->name], next) || changed_;
      } else if (const auto* bind = b.as<Bind>()) {
        propagate(bind->body, next);
      } else if (const auto* o = b.as<Or>()) {
        propagate(o->left, next);
        propagate(o->right, next);
      } else if (const auto* star = b.as<Star>()) {
        TokenSet again = seqFirst(star->body, r_);
        again.insert(next.begin(), next.end());
        propagate(star->body, again);
      } else if (const auto* el = b.as<ElementSpec>()) {
        const TokenSet close{Token::endTag(el->tag)};
        for (const auto& gb : el->guarded) propagate(gb.body, close);
        propagate(el->elseBody, close);
      }
    }
  }

  const Grammar& g_;
  AnalysisResult& r_;
  bool changed_ = false;
};

}  // namespace

bool AnalysisResult::isNullable(std::string_view clause) const {
  return lookupNullable(nullable, clause);
}

const TokenSet& AnalysisResult::firstOf(std::string_view clause) const {
  auto it = first.find(clause);
  return it == first.end() ? kNoTokens : it->second;
}

const TokenSet& AnalysisResult::followOf(std::string_view clause) const {
  auto it = follow.find(clause);
  return it == follow.end() ? kNoTokens : it->second;
}

bool bodyNull(const Body& b, const NullableMap& nullable) {
  if (b.is<Empty>() || b.is<Ok>() || b.is<Actions>() || b.is<Star>()) return true;
  if (b.is<Any>() || b.is<Text>() || b.is<ElementSpec>()) return false;
  if (const auto* call = b.as<Call>()) return lookupNullable(nullable, call->name);
  if (const auto* bind = b.as<Bind>()) return seqNull(bind->body, nullable);
  const auto& o = *b.as<Or>();
  return seqNull(o.left, nullable) || seqNull(o.right, nullable);
}

bool seqNull(std::span<const Body> seq, const NullableMap& nullable) {
  return std::all_of(seq.begin(), seq.end(), [&](const Body& b) { return bodyNull(b, nullable); });
}

TokenSet seqFirst(std::span<const Body> seq, const AnalysisResult& sets) {
  TokenSet out;
  for (const Body& b : seq) {
    addAll(out, itemFirst(b, sets));
    if (!bodyNull(b, sets.nullable)) break;
  }
  return out;
}

AnalysisResult computeSets(const Grammar& g, std::string_view startRule,
                           std::vector<AnalysisResult>* trace) {
  for (const Clause& c : g.clauses) {
    forEachBody(c.body, [&](const Body& b) {
      if (const auto* call = b.as<Call>(); call && !g.defines(call->name)) {
        throw AnalysisError("rule " + c.name + " calls undefined rule " + call->name);
      }
    });
  }
  if (!g.clauses.empty() && !g.defines(startRule)) {
    throw AnalysisError("start rule " + std::string(startRule) + " is not defined");
  }

  AnalysisResult r;
  for (const Clause& c : g.clauses) {
    r.nullable[c.name] = false;
    r.first[c.name];
    r.follow[c.name];
  }
  if (g.defines(startRule)) r.follow[std::string(startRule)].insert(Token::endOfInput());

  SetBuilder builder(g, r);
  while (true) {
    const bool changed = builder.round();
    if (trace) trace->push_back(r);
    if (!changed) break;
  }
  return r;
}

std::optional<std::size_t> PredictTable::predict(std::string_view clause, const Token& t) const {
  const std::string name(clause);
  if (auto it = entries.find({name, t}); it != entries.end()) return it->second;
  if (t.kind == Token::Kind::Tag || t.kind == Token::Kind::Text) {
    if (auto it = entries.find({name, Token::wildcard()}); it != entries.end()) return it->second;
  }
  return std::nullopt;
}

std::size_t definitionOrdinal(const Grammar& g, std::size_t index) {
  std::size_t ordinal = 0;
  for (std::size_t i = 0; i < index; ++i) {
    if (g.clauses[i].name == g.clauses[index].name) ++ordinal;
  }
  return ordinal;
}

std::string Conflict::str(const Grammar& g) const {
  std::string out = "conflict in rule " + clause + " on " + toString(token) + ":";
  for (std::size_t d : definitions) {
    out += "\n    [" + std::to_string(definitionOrdinal(g, d)) + "] " + prettyPrint(g.clauses[d]);
  }
  return out;
}

PredictTable buildPredictTable(const Grammar& g, const AnalysisResult& sets) {
  std::map<std::pair<std::string, Token>, std::vector<std::size_t>> cells;
  auto add = [&](const std::string& clause, const Token& t, std::size_t def) {
    auto& cell = cells[{clause, t}];
    if (std::find(cell.begin(), cell.end(), def) == cell.end()) cell.push_back(def);
  };
  for (std::size_t i = 0; i < g.clauses.size(); ++i) {
    const Clause& c = g.clauses[i];
    for (const Token& t : seqFirst(c.body, sets)) add(c.name, t, i);
    if (seqNull(c.body, sets.nullable)) {
      for (const Token& t : sets.followOf(c.name)) add(c.name, t, i);
    }
  }

  PredictTable table;
  for (const auto& [key, defs] : cells) {
    table.entries.emplace(key, defs.front());
    if (defs.size() > 1) table.conflicts.push_back(Conflict{key.first, key.second, defs});
  }
  // A row default competes with every exact start-tag or text entry of the
  // same row that selects a different definition.
  for (const auto& [key, defs] : cells) {
    if (key.second.kind != Token::Kind::Wildcard) continue;
    for (const auto& [other, otherDefs] : cells) {
      if (other.first != key.first) continue;
      if (other.second.kind != Token::Kind::Tag && other.second.kind != Token::Kind::Text) continue;
      if (otherDefs.front() == defs.front()) continue;
      table.conflicts.push_back(Conflict{key.first, other.second, {otherDefs.front(), defs.front()}});
    }
  }
  return table;
}

LL1Report checkLL1(const Grammar& g, const PredictTable& table) {
  LL1Report report;
  for (const Conflict& c : table.conflicts) {
    report.ok = false;
    report.messages.push_back(c.str(g));
  }
  return report;
}

namespace {

std::vector<Token> tableColumns(const Grammar& g, const PredictTable& table) {
  std::set<std::string> tags;
  for (const Clause& c : g.clauses) {
    forEachBody(c.body, [&](const Body& b) {
      if (const auto* el = b.as<ElementSpec>()) tags.insert(el->tag);
    });
  }
  std::set<Token> used;
  for (const auto& [key, def] : table.entries) {
    used.insert(key.second);
    if (key.second.kind == Token::Kind::Tag || key.second.kind == Token::Kind::EndTag) {
      if (!key.second.isEndOfInput()) tags.insert(key.second.tag);
    }
  }
  std::vector<Token> cols;
  for (const auto& t : tags) {
    cols.push_back(Token::startTag(t));
    cols.push_back(Token::endTag(t));
  }
  for (const Token& t : {Token::text(), Token::wildcard(), Token::endOfInput()}) {
    if (used.count(t)) cols.push_back(t);
  }
  return cols;
}

}  // namespace

std::string renderTableText(const Grammar& g, const PredictTable& table) {
  const std::vector<std::string> rows = g.clauseNames();
  const std::vector<Token> cols = tableColumns(g, table);

  std::map<std::pair<std::string, Token>, std::vector<std::size_t>> cells;
  for (const auto& [key, def] : table.entries) cells[key].push_back(def);
  for (const Conflict& c : table.conflicts) {
    auto& cell = cells[{c.clause, c.token}];
    for (std::size_t d : c.definitions) {
      if (std::find(cell.begin(), cell.end(), d) == cell.end()) cell.push_back(d);
    }
  }

  std::vector<std::vector<std::string>> grid;
  std::vector<std::string> header{""};
  for (const Token& t : cols) header.push_back(toString(t));
  grid.push_back(header);
  for (const std::string& r : rows) {
    std::vector<std::string> line{r};
    for (const Token& t : cols) {
      std::string text;
      auto it = cells.find({r, t});
      if (it != cells.end()) {
        for (std::size_t d : it->second) {
          if (!text.empty()) text += " !! ";
          text += prettyPrint(g.clauses[d].body);
        }
      }
      line.push_back(text);
    }
    grid.push_back(line);
  }

  std::vector<std::size_t> width(header.size(), 0);
  for (const auto& line : grid) {
    for (std::size_t i = 0; i < line.size(); ++i) width[i] = std::max(width[i], line[i].size());
  }
  auto rule = [&] {
    std::string s = "+";
    for (std::size_t w : width) s += std::string(w + 2, '-') + "+";
    return s + "\n";
  };
  std::string out = rule();
  for (std::size_t r = 0; r < grid.size(); ++r) {
    out += "|";
    for (std::size_t i = 0; i < grid[r].size(); ++i) {
      out += " " + grid[r][i] + std::string(width[i] - grid[r][i].size(), ' ') + " |";
    }
    out += "\n";
    if (r == 0) out += rule();
  }
  out += rule();
  return out;
}

std::string renderTableKv(const Grammar& g, const PredictTable& table) {
  std::vector<std::string> lines;
  std::set<std::pair<std::string, Token>> conflicted;
  for (const Conflict& c : table.conflicts) {
    for (std::size_t d : c.definitions) {
      lines.push_back(c.clause + "\t" + toString(c.token) + "\t" +
                      std::to_string(definitionOrdinal(g, d)));
    }
    conflicted.insert({c.clause, c.token});
  }
  for (const auto& [key, def] : table.entries) {
    if (conflicted.count(key)) continue;
    lines.push_back(key.first + "\t" + toString(key.second) + "\t" +
                    std::to_string(definitionOrdinal(g, def)));
  }
  std::sort(lines.begin(), lines.end());
  lines.erase(std::unique(lines.begin(), lines.end()), lines.end());
  std::string out;
  for (const auto& l : lines) out += l + "\n";
  return out;
}

}  // namespace xmlgram
