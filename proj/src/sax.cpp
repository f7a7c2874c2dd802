#include "xmlgram/sax.hpp"

#include <sstream>

namespace xmlgram {

namespace {

bool isSpace(int c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n'; }

bool isNameStart(int c) {
  return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || c == '_' || c >= 0x80;
}

bool isNameChar(int c) {
  return isNameStart(c) || (c >= '0' && c <= '9') || c == '-' || c == '.';
}

bool allSpace(std::string_view s) {
  for (char c : s) {
    if (!isSpace(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

}  // namespace

XmlError::XmlError(Kind kind, const std::string& message, int line, int column)
    : std::runtime_error(std::to_string(line) + ":" + std::to_string(column) + ": " +
                         (kind == Kind::MalformedXml ? "malformed XML: " : "unsupported XML: ") +
                         message),
      kind_(kind),
      line_(line),
      column_(column) {}

SaxReader::SaxReader(std::istream& in, SaxOptions options) : in_(in), options_(options) {}

int SaxReader::get() {
  int c = in_.get();
  if (c == std::char_traits<char>::eof()) return -1;
  if (c == '\n') {
    ++line_;
    column_ = 1;
  } else {
    ++column_;
  }
  return static_cast<unsigned char>(c);
}

int SaxReader::peek() {
  int c = in_.peek();
  return c == std::char_traits<char>::eof() ? -1 : static_cast<unsigned char>(c);
}

void SaxReader::malformed(const std::string& message) const {
  throw XmlError(XmlError::Kind::MalformedXml, message, line_, column_);
}

void SaxReader::unsupported(const std::string& message) const {
  throw XmlError(XmlError::Kind::UnsupportedFeature, message, line_, column_);
}

void SaxReader::expectLiteral(std::string_view lit) {
  for (char c : lit) {
    if (get() != static_cast<unsigned char>(c)) malformed("expected '" + std::string(lit) + "'");
  }
}

void SaxReader::skipSpace() {
  while (isSpace(peek())) get();
}

std::string SaxReader::readName() {
  std::string name;
  if (!isNameStart(peek())) malformed("expected a name");
  while (isNameChar(peek())) name += static_cast<char>(get());
  if (peek() == ':') unsupported("namespace-prefixed name '" + name + ":...'");
  return name;
}

void SaxReader::decodeEntity(std::string& out) {
  std::string ref;
  while (true) {
    int c = get();
    if (c < 0) malformed("unterminated entity reference");
    if (c == ';') break;
    if (ref.size() > 8) malformed("unterminated entity reference");
    ref += static_cast<char>(c);
  }
  if (ref == "amp") {
    out += '&';
  } else if (ref == "lt") {
    out += '<';
  } else if (ref == "gt") {
    out += '>';
  } else if (ref == "quot") {
    out += '"';
  } else if (ref == "apos") {
    out += '\'';
  } else {
    unsupported("entity reference &" + ref + ";");
  }
}

void SaxReader::skipComment() {
  // After "<!--".
  int dashes = 0;
  while (true) {
    int c = get();
    if (c < 0) malformed("unterminated comment");
    if (c == '>' && dashes >= 2) return;
    dashes = c == '-' ? dashes + 1 : 0;
  }
}

void SaxReader::skipDeclaration() {
  // After "<?".
  std::string target = readName();
  if (target != "xml" || anyContent_) unsupported("processing instruction <?" + target + "?>");
  int prev = 0;
  while (true) {
    int c = get();
    if (c < 0) malformed("unterminated XML declaration");
    if (c == '>' && prev == '?') return;
    prev = c;
  }
}

SaxEvent SaxReader::readStartTag() {
  // After "<".
  StartTag tag;
  tag.tag = readName();
  if (rootClosed_) malformed("content after the root element");
  while (true) {
    const bool spaced = isSpace(peek());
    skipSpace();
    int c = peek();
    if (c == '/') {
      get();
      if (get() != '>') malformed("expected '>' after '/'");
      pendingEnd_ = tag.tag;
      break;
    }
    if (c == '>') {
      get();
      open_.push_back(tag.tag);
      break;
    }
    if (c < 0) malformed("unterminated start tag <" + tag.tag + ">");
    if (!spaced) malformed("expected whitespace before attribute in <" + tag.tag + ">");
    std::string name = readName();
    skipSpace();
    if (get() != '=') malformed("expected '=' after attribute " + name);
    skipSpace();
    int quote = get();
    if (quote != '"' && quote != '\'') malformed("attribute value must be quoted");
    std::string value;
    while (true) {
      int v = get();
      if (v < 0) malformed("unterminated attribute value");
      if (v == quote) break;
      if (v == '<') malformed("'<' in attribute value");
      if (v == '&') {
        decodeEntity(value);
      } else {
        value += static_cast<char>(v);
      }
    }
    if (!tag.attrs.emplace(std::move(name), std::move(value)).second) {
      malformed("duplicate attribute in <" + tag.tag + ">");
    }
  }
  rootSeen_ = true;
  anyContent_ = true;
  if (pendingEnd_ && open_.empty()) rootClosed_ = true;
  return tag;
}

SaxEvent SaxReader::readEndTag() {
  // After "</".
  std::string name = readName();
  skipSpace();
  if (get() != '>') malformed("expected '>' to close </" + name + ">");
  if (open_.empty()) malformed("unexpected end tag </" + name + ">");
  if (open_.back() != name) {
    malformed("mismatched end tag </" + name + ">, expected </" + open_.back() + ">");
  }
  open_.pop_back();
  if (open_.empty()) rootClosed_ = true;
  return EndTag{std::move(name)};
}

std::optional<SaxEvent> SaxReader::next() {
  if (pendingEnd_) {
    EndTag end{std::move(*pendingEnd_)};
    pendingEnd_.reset();
    return end;
  }
  // Character data runs across comments; it ends at the next tag.
  std::string text;
  bool haveText = false;
  auto flush = [&]() -> std::optional<SaxEvent> {
    if (!haveText) return std::nullopt;
    haveText = false;
    if (open_.empty()) {
      if (!allSpace(text)) malformed("character data outside the root element");
      return std::nullopt;
    }
    if (!options_.keepWhitespace && allSpace(text)) return std::nullopt;
    return TextEvt{std::move(text)};
  };
  while (true) {
    int c = afterLt_ ? '<' : peek();
    if (c < 0) {
      if (!open_.empty()) malformed("end of document inside <" + open_.back() + ">");
      flush();
      if (!rootSeen_) malformed("document has no root element");
      return std::nullopt;
    }
    if (c == '<') {
      if (!afterLt_) get();
      afterLt_ = false;
      int d = peek();
      if (d == '!') {
        get();
        if (peek() == '-') {
          expectLiteral("--");
          skipComment();
          continue;
        }
        if (peek() == '[') unsupported("CDATA section");
        if (peek() == 'D') unsupported("DOCTYPE declaration");
        malformed("unexpected '<!'");
      }
      if (d == '?') {
        get();
        skipDeclaration();
        continue;
      }
      if (auto ev = flush()) {
        afterLt_ = true;
        return ev;
      }
      text.clear();
      if (d == '/') {
        get();
        return readEndTag();
      }
      if (!isNameStart(d)) malformed("stray '<'");
      return readStartTag();
    }

    if (!haveText) text.clear();
    haveText = true;
    while (true) {
      int t = peek();
      if (t < 0 || t == '<') break;
      get();
      if (t == '&') {
        decodeEntity(text);
      } else {
        text += static_cast<char>(t);
      }
    }
  }
}

std::size_t SaxReader::retainedBytes() const {
  std::size_t n = sizeof(*this);
  for (const auto& s : open_) n += s.capacity();
  if (pendingEnd_) n += pendingEnd_->capacity();
  return n;
}

std::vector<SaxEvent> readEvents(std::istream& in, SaxOptions options) {
  SaxReader reader(in, options);
  std::vector<SaxEvent> out;
  while (auto ev = reader.next()) out.push_back(std::move(*ev));
  return out;
}

std::vector<SaxEvent> readEvents(std::string_view xml, SaxOptions options) {
  std::istringstream in{std::string(xml)};
  return readEvents(in, options);
}

const SaxEvent* ReaderEventSource::peek() {
  if (!fetched_) {
    head_ = reader_.next();
    fetched_ = true;
  }
  return head_ ? &*head_ : nullptr;
}

void ReaderEventSource::pop() {
  peek();
  fetched_ = false;
  head_.reset();
  ++pos_;
}

}  // namespace xmlgram
