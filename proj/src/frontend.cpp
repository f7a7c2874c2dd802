#include "xmlgram/frontend.hpp"

#include <cctype>
#include <charconv>
#include <set>
#include <stdexcept>

#include "xmlgram/render.hpp"

namespace xmlgram {

std::string ParseDiagnostic::str() const {
  return toString(span) + (severity == Severity::Error ? ": error: " : ": warning: ") + message;
}

namespace {

enum class Tok {
  Ident,
  String,
  Int,
  AtGrammar,
  End,
  KwOk,
  KwAny,
  KwEmpty,
  KwText,
  When,
  Else,
  True,
  False,
  Null,
  Define,     // ::=
  Dot,
  Bar,
  Star,
  LParen,
  RParen,
  LBrace,
  RBrace,
  LBracket,
  RBracket,
  Comma,
  Eq,
  Ne,         // <>
  Lt,
  LtSlash,    // </
  Gt,
  SlashGt,    // />
  Arrow,      // ->
  FatArrow,   // =>
  Colon,
  Eof,
  Error,
};

struct Token {
  Tok kind = Tok::Eof;
  std::string text;  // identifier name, decoded string, or error message
  std::int64_t number = 0;
  SourceSpan span;
};

std::string describe(const Token& t) {
  switch (t.kind) {
    case Tok::Ident: return "identifier '" + t.text + "'";
    case Tok::String: return "string literal";
    case Tok::Int: return "integer literal";
    case Tok::Eof: return "end of input";
    case Tok::Error: return "invalid token";
    default: return "'" + t.text + "'";
  }
}

bool isIdentStart(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool isIdentChar(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

bool isVariableName(std::string_view s) {
  return !s.empty() && (std::islower(static_cast<unsigned char>(s[0])) || s[0] == '_');
}

class Lexer {
 public:
  Lexer(std::string_view src, bool allowDollar) : src_(src), allowDollar_(allowDollar) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    while (true) {
      skipTrivia();
      Token t = next();
      out.push_back(t);
      if (t.kind == Tok::Eof) break;
    }
    return out;
  }

 private:
  char peek(std::size_t k = 0) const { return pos_ + k < src_.size() ? src_[pos_ + k] : '\0'; }

  void advance() {
    if (src_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  void skipTrivia() {
    while (pos_ < src_.size()) {
      char c = peek();
      if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
        advance();
      } else if (c == '/' && peek(1) == '/') {
        while (pos_ < src_.size() && peek() != '\n') advance();
      } else {
        break;
      }
    }
  }

  Token make(Tok kind, std::string text, int line, int col, std::size_t start) {
    Token t;
    t.kind = kind;
    t.text = std::move(text);
    t.span = SourceSpan{line, col, static_cast<int>(pos_ - start)};
    return t;
  }

  Token next() {
    const int line = line_;
    const int col = col_;
    const std::size_t start = pos_;
    if (pos_ >= src_.size()) return make(Tok::Eof, "", line, col, start);
    const char c = peek();

    auto punct = [&](Tok kind, std::size_t len) {
      std::string text(src_.substr(pos_, len));
      for (std::size_t i = 0; i < len; ++i) advance();
      return make(kind, std::move(text), line, col, start);
    };

    if (isIdentStart(c)) {
      bool dollar = false;
      while (pos_ < src_.size() && (isIdentChar(peek()) || peek() == '$')) {
        dollar = dollar || peek() == '$';
        advance();
      }
      std::string word(src_.substr(start, pos_ - start));
      if (dollar && !allowDollar_) {
        return make(Tok::Error, "'$' is reserved for generated names in '" + word + "'", line, col,
                    start);
      }
      static const std::pair<const char*, Tok> keywords[] = {
          {"end", Tok::End},     {"OK", Tok::KwOk},     {"ANY", Tok::KwAny},
          {"EMPTY", Tok::KwEmpty}, {"TEXT", Tok::KwText}, {"when", Tok::When},
          {"else", Tok::Else},   {"true", Tok::True},   {"false", Tok::False},
          {"null", Tok::Null}};
      for (const auto& [kw, kind] : keywords) {
        if (word == kw) return make(kind, word, line, col, start);
      }
      return make(Tok::Ident, word, line, col, start);
    }
    if (std::isdigit(static_cast<unsigned char>(c)) ||
        (c == '-' && std::isdigit(static_cast<unsigned char>(peek(1))))) {
      advance();
      while (std::isdigit(static_cast<unsigned char>(peek()))) advance();
      std::string_view digits = src_.substr(start, pos_ - start);
      Token t = make(Tok::Int, std::string(digits), line, col, start);
      auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), t.number);
      if (ec != std::errc()) {
        return make(Tok::Error, "integer literal out of range", line, col, start);
      }
      return t;
    }
    if (c == '"') return lexString(line, col, start);
    if (c == '@') {
      advance();
      std::size_t wordStart = pos_;
      while (isIdentChar(peek())) advance();
      if (src_.substr(wordStart, pos_ - wordStart) == "Grammar") {
        return make(Tok::AtGrammar, "@Grammar", line, col, start);
      }
      return make(Tok::Error, "unknown directive '" + std::string(src_.substr(start, pos_ - start)) + "'",
                  line, col, start);
    }
    switch (c) {
      case ':':
        if (peek(1) == ':' && peek(2) == '=') return punct(Tok::Define, 3);
        return punct(Tok::Colon, 1);
      case '.': return punct(Tok::Dot, 1);
      case '|': return punct(Tok::Bar, 1);
      case '*': return punct(Tok::Star, 1);
      case '(': return punct(Tok::LParen, 1);
      case ')': return punct(Tok::RParen, 1);
      case '{': return punct(Tok::LBrace, 1);
      case '}': return punct(Tok::RBrace, 1);
      case '[': return punct(Tok::LBracket, 1);
      case ']': return punct(Tok::RBracket, 1);
      case ',': return punct(Tok::Comma, 1);
      case '=':
        if (peek(1) == '>') return punct(Tok::FatArrow, 2);
        return punct(Tok::Eq, 1);
      case '<':
        if (peek(1) == '/') return punct(Tok::LtSlash, 2);
        if (peek(1) == '>') return punct(Tok::Ne, 2);
        return punct(Tok::Lt, 1);
      case '>': return punct(Tok::Gt, 1);
      case '/':
        if (peek(1) == '>') return punct(Tok::SlashGt, 2);
        break;
      case '-':
        if (peek(1) == '>') return punct(Tok::Arrow, 2);
        break;
      default:
        break;
    }
    advance();
    return make(Tok::Error, "unknown token '" + std::string(1, c) + "'", line, col, start);
  }

  Token lexString(int line, int col, std::size_t start) {
    advance();  // opening quote
    std::string value;
    while (true) {
      if (pos_ >= src_.size() || peek() == '\n') {
        return make(Tok::Error, "unterminated string literal", line, col, start);
      }
      char c = peek();
      advance();
      if (c == '"') break;
      if (c == '\\') {
        char e = peek();
        if (pos_ >= src_.size()) continue;
        advance();
        switch (e) {
          case 'n': value += '\n'; break;
          case 't': value += '\t'; break;
          case 'r': value += '\r'; break;
          case '"': value += '"'; break;
          case '\\': value += '\\'; break;
          default:
            return make(Tok::Error, std::string("unknown escape '\\") + e + "'", line, col, start);
        }
      } else {
        value += c;
      }
    }
    return make(Tok::String, std::move(value), line, col, start);
  }

  std::string_view src_;
  bool allowDollar_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
};

struct SyntaxError {
  SourceSpan span;
  std::string message;
};

class Parser {
 public:
  explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

  GrammarParseResult run() {
    GrammarParseResult result;
    Grammar g;
    try {
      expect(Tok::AtGrammar, "expected '@Grammar'");
      g.name = expect(Tok::Ident, "expected grammar name").text;
    } catch (const SyntaxError& e) {
      report(e);
      result.diagnostics = std::move(diags_);
      return result;
    }
    while (true) {
      if (at(Tok::End)) {
        ++pos_;
        if (!at(Tok::Eof)) report({cur().span, "unexpected " + describe(cur()) + " after 'end'"});
        break;
      }
      if (at(Tok::Eof)) {
        report({cur().span, "unterminated grammar: missing 'end'"});
        break;
      }
      try {
        g.clauses.push_back(parseRule());
      } catch (const SyntaxError& e) {
        report(e);
        resync();
      }
    }
    result.diagnostics = std::move(diags_);
    bool failed = false;
    for (const auto& d : result.diagnostics) failed = failed || d.severity == ParseDiagnostic::Severity::Error;
    if (!failed) result.grammar = std::move(g);
    return result;
  }

 private:
  const Token& cur() const { return toks_[pos_]; }
  const Token& lookahead(std::size_t k) const {
    return toks_[std::min(pos_ + k, toks_.size() - 1)];
  }
  bool at(Tok k) const { return cur().kind == k; }

  bool accept(Tok k) {
    if (!at(k)) return false;
    ++pos_;
    return true;
  }

  const Token& expect(Tok k, const std::string& what) {
    if (!at(k)) fail(what);
    return toks_[pos_++];
  }

  [[noreturn]] void fail(const std::string& what) const {
    if (at(Tok::Error)) throw SyntaxError{cur().span, cur().text};
    throw SyntaxError{cur().span, what + ", found " + describe(cur())};
  }

  void report(const SyntaxError& e) {
    diags_.push_back(ParseDiagnostic{e.span, e.message, ParseDiagnostic::Severity::Error});
  }

  void resync() {
    while (!at(Tok::Eof) && !at(Tok::End)) {
      if (accept(Tok::Dot)) return;
      ++pos_;
    }
  }

  void checkVariable(const Token& t) {
    if (!isVariableName(t.text)) {
      throw SyntaxError{t.span, "variable '" + t.text + "' must start with a lowercase letter"};
    }
  }

  Clause parseRule() {
    Clause c;
    const Token& name = expect(Tok::Ident, "expected rule name");
    c.name = name.text;
    c.span = name.span;
    if (accept(Tok::LParen)) {
      std::set<std::string> seen;
      if (!at(Tok::RParen)) {
        do {
          const Token& p = expect(Tok::Ident, "expected parameter name");
          checkVariable(p);
          if (!seen.insert(p.text).second) {
            throw SyntaxError{p.span, "duplicate parameter '" + p.text + "' in rule " + c.name};
          }
          c.params.push_back(p.text);
        } while (accept(Tok::Comma));
      }
      expect(Tok::RParen, "expected ')' after parameters");
    }
    expect(Tok::Define, "expected '::='");
    c.body = parseAlt();
    if (at(Tok::LtSlash)) {
      throw SyntaxError{cur().span, "unbalanced closing tag </" + lookahead(1).text + ">"};
    }
    expect(Tok::Dot, "expected '.' to end rule " + c.name);
    return c;
  }

  BodySeq parseAlt() {
    std::vector<std::pair<BodySeq, SourceSpan>> alts;
    alts.emplace_back(parseSeq(), cur().span);
    while (at(Tok::Bar)) {
      SourceSpan bar = cur().span;
      ++pos_;
      alts.emplace_back(parseSeq(), bar);
    }
    if (alts.size() == 1) return std::move(alts.front().first);
    BodySeq right = std::move(alts.back().first);
    for (std::size_t i = alts.size() - 1; i-- > 0;) {
      BodySeq node;
      node.emplace_back(Or{std::move(alts[i].first), std::move(right)}, alts[i + 1].second);
      right = std::move(node);
    }
    return right;
  }

  bool startsItem() const {
    switch (cur().kind) {
      case Tok::Ident:
      case Tok::LBracket:
      case Tok::LParen:
      case Tok::Lt:
      case Tok::KwOk:
      case Tok::KwAny:
      case Tok::KwEmpty:
      case Tok::KwText:
      case Tok::LBrace:
        return true;
      default:
        return false;
    }
  }

  BodySeq parseSeq() {
    BodySeq out;
    while (startsItem()) parseItem(out);
    if (at(Tok::Error)) fail("");
    return out;
  }

  void parseItem(BodySeq& out) {
    const SourceSpan start = cur().span;
    std::vector<std::string> names;
    bool isBind = false;
    if (at(Tok::Ident) && lookahead(1).kind == Tok::Eq) {
      checkVariable(cur());
      names.push_back(cur().text);
      pos_ += 2;
      isBind = true;
    } else if (at(Tok::LBracket)) {
      ++pos_;
      std::set<std::string> seen;
      if (!at(Tok::RBracket)) {
        do {
          const Token& n = expect(Tok::Ident, "expected variable name");
          checkVariable(n);
          if (!seen.insert(n.text).second) {
            throw SyntaxError{n.span, "variable '" + n.text + "' bound twice"};
          }
          names.push_back(n.text);
        } while (accept(Tok::Comma));
      }
      expect(Tok::RBracket, "expected ']'");
      expect(Tok::Eq, "expected '=' after binding names");
      isBind = true;
    }
    BodySeq unit = parseUnit();
    if (isBind) {
      out.emplace_back(Bind{std::move(names), std::move(unit)}, start);
    } else {
      for (Body& b : unit) out.push_back(std::move(b));
    }
  }

  BodySeq parseUnit() {
    const SourceSpan start = cur().span;
    BodySeq seq = parseAtom();
    while (accept(Tok::Star)) {
      BodySeq starred;
      starred.emplace_back(Star{std::move(seq)}, start);
      seq = std::move(starred);
    }
    return seq;
  }

  BodySeq parseAtom() {
    const Token& t = cur();
    const SourceSpan span = t.span;
    BodySeq out;
    switch (t.kind) {
      case Tok::LParen: {
        ++pos_;
        BodySeq inner = parseAlt();
        expect(Tok::RParen, "expected ')'");
        return inner;
      }
      case Tok::Lt:
        out.push_back(parseElement());
        return out;
      case Tok::Ident: {
        Call call{t.text, {}};
        ++pos_;
        if (accept(Tok::LParen)) {
          call.args = parseExprList(Tok::RParen);
          expect(Tok::RParen, "expected ')' after arguments");
        }
        out.emplace_back(std::move(call), span);
        return out;
      }
      case Tok::KwOk: ++pos_; out.emplace_back(Ok{}, span); return out;
      case Tok::KwAny: ++pos_; out.emplace_back(Any{}, span); return out;
      case Tok::KwEmpty: ++pos_; out.emplace_back(Empty{}, span); return out;
      case Tok::KwText: ++pos_; out.emplace_back(Text{}, span); return out;
      case Tok::LBrace: {
        ++pos_;
        Actions actions{parseExprList(Tok::RBrace)};
        expect(Tok::RBrace, "expected '}' to close actions");
        out.emplace_back(std::move(actions), span);
        return out;
      }
      default:
        fail("expected a rule body element");
    }
  }

  Body parseElement() {
    const SourceSpan span = cur().span;
    expect(Tok::Lt, "expected '<'");
    ElementSpec el;
    el.tag = expect(Tok::Ident, "expected element tag").text;
    std::set<std::string> seen;
    while (at(Tok::Ident)) {
      const Token& v = cur();
      ++pos_;
      std::string attr = v.text;
      if (accept(Tok::Eq)) attr = expect(Tok::Ident, "expected attribute name").text;
      checkVariable(v);
      if (!seen.insert(v.text).second) {
        throw SyntaxError{v.span, "attribute variable '" + v.text + "' bound twice in <" + el.tag + ">"};
      }
      el.attrs.push_back(AttrBinding{v.text, std::move(attr)});
    }
    std::optional<Expr> firstGuard;
    if (accept(Tok::When)) firstGuard = parseExpr();
    if (accept(Tok::SlashGt)) {
      if (firstGuard) el.guarded.push_back(GuardedBody{std::move(*firstGuard), {}});
      return Body(std::move(el), span);
    }
    // The first guard may also end in '=>', matching the later ones.
    if (!(firstGuard && accept(Tok::FatArrow))) expect(Tok::Gt, "expected '>' or '/>' to end <" + el.tag + ">");

    if (firstGuard) {
      el.guarded.push_back(GuardedBody{std::move(*firstGuard), parseAlt()});
    }
    if (firstGuard || at(Tok::When)) {
      while (accept(Tok::When)) {
        Expr g = parseExpr();
        expect(Tok::FatArrow, "expected '=>' after guard");
        el.guarded.push_back(GuardedBody{std::move(g), parseAlt()});
      }
      if (accept(Tok::Else)) el.elseBody = parseAlt();
    } else {
      el.elseBody = parseAlt();
    }

    if (!at(Tok::LtSlash)) {
      if (at(Tok::Dot) || at(Tok::End) || at(Tok::Eof)) {
        throw SyntaxError{span, "unterminated element <" + el.tag + ">"};
      }
      fail("expected </" + el.tag + ">");
    }
    const SourceSpan closeSpan = cur().span;
    ++pos_;
    const Token& closing = expect(Tok::Ident, "expected tag name after '</'");
    if (closing.text != el.tag) {
      throw SyntaxError{closeSpan, "mismatched closing tag </" + closing.text + ">, expected </" +
                                       el.tag + ">"};
    }
    expect(Tok::Gt, "expected '>'");
    return Body(std::move(el), span);
  }

  std::vector<Expr> parseExprList(Tok close) {
    std::vector<Expr> out;
    if (at(close)) return out;
    do {
      out.push_back(parseExpr());
    } while (accept(Tok::Comma));
    return out;
  }

  Expr parseExpr() {
    const SourceSpan span = cur().span;
    Expr left = parseCons();
    if (at(Tok::Eq) || at(Tok::Ne)) {
      CompareOp op = at(Tok::Eq) ? CompareOp::Eq : CompareOp::Ne;
      ++pos_;
      Expr right = parseCons();
      return Expr(Compare{op, std::move(left), std::move(right)}, span);
    }
    return left;
  }

  Expr parseCons() {
    const SourceSpan span = cur().span;
    Expr head = parsePostfix();
    if (accept(Tok::Colon)) {
      Expr tail = parseCons();
      return Expr(ConsExpr{std::move(head), std::move(tail)}, span);
    }
    return head;
  }

  Expr parsePostfix() {
    const SourceSpan span = cur().span;
    Expr e = parsePrimary();
    while (true) {
      if (at(Tok::Arrow)) {
        ++pos_;
        const Token& op = expect(Tok::Ident, "expected 'iterate' after '->'");
        if (op.text != "iterate") throw SyntaxError{op.span, "unknown operation '" + op.text + "'"};
        expect(Tok::LParen, "expected '(' after iterate");
        const Token& elemVar = expect(Tok::Ident, "expected element variable");
        checkVariable(elemVar);
        const Token& accVar = expect(Tok::Ident, "expected accumulator variable");
        checkVariable(accVar);
        expect(Tok::Eq, "expected '=' after accumulator");
        Expr init = parseExpr();
        expect(Tok::Bar, "expected '|' in iterate");
        Expr step = parseExpr();
        expect(Tok::RParen, "expected ')' to close iterate");
        e = Expr(Fold{elemVar.text, accVar.text, std::move(init), std::move(step), std::move(e)},
                 span);
      } else if (at(Tok::Dot) && lookahead(1).kind == Tok::Ident && lookahead(1).text == "add" &&
                 lookahead(2).kind == Tok::LParen) {
        pos_ += 3;
        Expr child = parseExpr();
        expect(Tok::RParen, "expected ')' after add");
        std::vector<Expr> args;
        args.push_back(std::move(e));
        args.push_back(std::move(child));
        e = Expr(Construct{kAddChildCtor, std::move(args)}, span);
      } else {
        return e;
      }
    }
  }

  Expr parsePrimary() {
    const Token& t = cur();
    const SourceSpan span = t.span;
    switch (t.kind) {
      case Tok::String: ++pos_; return Expr(StrLit{t.text}, span);
      case Tok::Int: ++pos_; return Expr(IntLit{t.number}, span);
      case Tok::True: ++pos_; return Expr(BoolLit{true}, span);
      case Tok::False: ++pos_; return Expr(BoolLit{false}, span);
      case Tok::Null: ++pos_; return Expr(NullLit{}, span);
      case Tok::LParen: {
        ++pos_;
        Expr inner = parseExpr();
        expect(Tok::RParen, "expected ')'");
        return inner;
      }
      case Tok::Ident: {
        std::string name = t.text;
        ++pos_;
        if (accept(Tok::LParen)) {
          std::vector<Expr> args = parseExprList(Tok::RParen);
          expect(Tok::RParen, "expected ')' after arguments");
          return Expr(Construct{std::move(name), std::move(args)}, span);
        }
        if (name == "Seq" && accept(Tok::LBrace)) {
          std::vector<Expr> items = parseExprList(Tok::RBrace);
          expect(Tok::RBrace, "expected '}' to close Seq");
          return Expr(ListLit{std::move(items)}, span);
        }
        if (isVariableName(name)) return Expr(VarRef{std::move(name)}, span);
        return Expr(Construct{std::move(name), {}}, span);
      }
      default:
        fail("expected an expression");
    }
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  std::vector<ParseDiagnostic> diags_;
};

// ---- printing -------------------------------------------------------------

std::string printExpr(const Expr& e, int level);

std::string printExprList(const std::vector<Expr>& es) {
  std::string out;
  for (std::size_t i = 0; i < es.size(); ++i) {
    if (i > 0) out += ", ";
    out += printExpr(es[i], 0);
  }
  return out;
}

// Levels: 0 comparison, 1 cons, 2 postfix/primary.
std::string printExpr(const Expr& e, int level) {
  auto wrap = [&](std::string s, int own) { return level > own ? "(" + s + ")" : s; };
  return std::visit(
      [&](const auto& n) -> std::string {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, VarRef>) {
          return n.name;
        } else if constexpr (std::is_same_v<T, StrLit>) {
          return quoteString(n.value);
        } else if constexpr (std::is_same_v<T, IntLit>) {
          return std::to_string(n.value);
        } else if constexpr (std::is_same_v<T, BoolLit>) {
          return n.value ? "true" : "false";
        } else if constexpr (std::is_same_v<T, NullLit>) {
          return "null";
        } else if constexpr (std::is_same_v<T, Construct>) {
          if (n.args.empty() && !isVariableName(n.ctor)) return n.ctor;
          return n.ctor + "(" + printExprList(n.args) + ")";
        } else if constexpr (std::is_same_v<T, ListLit>) {
          return "Seq{" + printExprList(n.items) + "}";
        } else if constexpr (std::is_same_v<T, ConsExpr>) {
          return wrap(printExpr(*n.head, 2) + " : " + printExpr(*n.tail, 1), 1);
        } else if constexpr (std::is_same_v<T, Fold>) {
          return printExpr(*n.over, 2) + "->iterate(" + n.elemVar + " " + n.accVar + " = " +
                 printExpr(*n.init, 0) + " | " + printExpr(*n.step, 0) + ")";
        } else {
          static_assert(std::is_same_v<T, Compare>);
          return wrap(printExpr(*n.left, 1) + (n.op == CompareOp::Eq ? " = " : " <> ") +
                          printExpr(*n.right, 1),
                      0);
        }
      },
      e.node);
}

std::string printSeq(std::span<const Body> seq);

std::string printItem(const Body& b);

std::string printUnit(std::span<const Body> seq) {
  if (seq.size() == 1 && !seq.front().is<Bind>()) return printItem(seq.front());
  return "(" + printSeq(seq) + ")";
}

std::string printElement(const ElementSpec& el) {
  std::string out = "<" + el.tag;
  for (const auto& a : el.attrs) {
    out += " " + a.var;
    if (a.attr != a.var) out += "=" + a.attr;
  }
  if (el.guarded.empty()) {
    if (el.elseBody.empty()) return out + "/>";
    return out + "> " + printSeq(el.elseBody) + " </" + el.tag + ">";
  }
  out += " when " + printExpr(el.guarded.front().guard, 0) + ">";
  if (!el.guarded.front().body.empty()) out += " " + printSeq(el.guarded.front().body);
  for (std::size_t i = 1; i < el.guarded.size(); ++i) {
    out += " when " + printExpr(el.guarded[i].guard, 0) + " =>";
    if (!el.guarded[i].body.empty()) out += " " + printSeq(el.guarded[i].body);
  }
  if (!el.elseBody.empty()) out += " else " + printSeq(el.elseBody);
  return out + " </" + el.tag + ">";
}

std::string printItem(const Body& b) {
  return std::visit(
      [&](const auto& n) -> std::string {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, Or>) {
          return "(" + printSeq(n.left) + " | " + printSeq(n.right) + ")";
        } else if constexpr (std::is_same_v<T, Bind>) {
          std::string names;
          if (n.names.size() == 1) {
            names = n.names.front();
          } else {
            names = "[";
            for (std::size_t i = 0; i < n.names.size(); ++i) {
              if (i > 0) names += ", ";
              names += n.names[i];
            }
            names += "]";
          }
          return names + " = " + printUnit(n.body);
        } else if constexpr (std::is_same_v<T, Star>) {
          return printUnit(n.body) + "*";
        } else if constexpr (std::is_same_v<T, Empty>) {
          return "EMPTY";
        } else if constexpr (std::is_same_v<T, Any>) {
          return "ANY";
        } else if constexpr (std::is_same_v<T, Ok>) {
          return "OK";
        } else if constexpr (std::is_same_v<T, Text>) {
          return "TEXT";
        } else if constexpr (std::is_same_v<T, Call>) {
          if (n.args.empty()) return n.name;
          return n.name + "(" + printExprList(n.args) + ")";
        } else if constexpr (std::is_same_v<T, Actions>) {
          if (n.exprs.empty()) return "{ }";
          return "{ " + printExprList(n.exprs) + " }";
        } else {
          static_assert(std::is_same_v<T, ElementSpec>);
          return printElement(n);
        }
      },
      b.node);
}

// A bare call directly before '(' would read as a call with arguments.
bool endsInBareCall(const Body& b) {
  if (const auto* c = b.as<Call>()) return c->args.empty();
  if (const auto* bind = b.as<Bind>()) return bind->body.size() == 1 && endsInBareCall(bind->body.front());
  return false;
}

std::string printSeq(std::span<const Body> seq) {
  std::string out;
  for (std::size_t i = 0; i < seq.size(); ++i) {
    std::string item = printItem(seq[i]);
    if (i + 1 < seq.size() && endsInBareCall(seq[i]) && printItem(seq[i + 1]).front() == '(') item += "()";
    if (!out.empty()) out += " ";
    out += item;
  }
  return out;
}

}  // namespace

GrammarParseResult parseGrammar(std::string_view source, GrammarParseOptions options) {
  Lexer lexer(source, options.allowGeneratedNames);
  Parser parser(lexer.run());
  return parser.run();
}

std::string prettyPrint(std::span<const Body> seq) { return printSeq(seq); }

std::string prettyPrint(const Expr& e) { return printExpr(e, 0); }

std::string prettyPrint(const Clause& c) {
  std::string out = c.name;
  if (!c.params.empty()) {
    out += "(";
    for (std::size_t i = 0; i < c.params.size(); ++i) {
      if (i > 0) out += ", ";
      out += c.params[i];
    }
    out += ")";
  }
  out += " ::=";
  if (!c.body.empty()) out += " " + printSeq(c.body);
  return out + ".";
}

std::string prettyPrint(const Grammar& g) {
  std::string out = "@Grammar " + g.name + "\n";
  for (const Clause& c : g.clauses) out += "  " + prettyPrint(c) + "\n";
  return out + "end\n";
}

}  // namespace xmlgram
