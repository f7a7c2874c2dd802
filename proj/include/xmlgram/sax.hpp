#pragma once

#include <cstddef>
#include <istream>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "xmlgram/xml.hpp"

namespace xmlgram {

class XmlError : public std::runtime_error {
 public:
  enum class Kind { MalformedXml, UnsupportedFeature };

  XmlError(Kind kind, const std::string& message, int line, int column);

  Kind kind() const { return kind_; }
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  Kind kind_;
  int line_;
  int column_;
};

struct SaxOptions {
  /// Report whitespace-only character data between elements.
  bool keepWhitespace = false;
};

/// Pull tokenizer for a subset of XML: elements, quoted attributes,
/// character data, the five predefined entities, comments and the XML
/// declaration. DOCTYPE, CDATA, processing instructions, namespace prefixes
/// and other entity references raise UnsupportedFeature.
///
/// Reads one character at a time; besides the event being built it keeps
/// only the names of the currently open elements.
class SaxReader {
 public:
  explicit SaxReader(std::istream& in, SaxOptions options = {});

  /// Next event, or nullopt once the root element is closed and only
  /// trailing whitespace or comments remain.
  std::optional<SaxEvent> next();

  /// Bytes of reader state held between events.
  std::size_t retainedBytes() const;

  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int get();
  int peek();
  [[noreturn]] void malformed(const std::string& message) const;
  [[noreturn]] void unsupported(const std::string& message) const;
  void expectLiteral(std::string_view lit);
  void skipSpace();
  std::string readName();
  void decodeEntity(std::string& out);
  void skipComment();
  void skipDeclaration();
  SaxEvent readStartTag();
  SaxEvent readEndTag();

  std::istream& in_;
  SaxOptions options_;
  int line_ = 1;
  int column_ = 1;
  std::vector<std::string> open_;
  std::optional<std::string> pendingEnd_;
  bool rootSeen_ = false;
  bool rootClosed_ = false;
  bool anyContent_ = false;
  bool afterLt_ = false;
};

std::vector<SaxEvent> readEvents(std::istream& in, SaxOptions options = {});
std::vector<SaxEvent> readEvents(std::string_view xml, SaxOptions options = {});

/// One-event lookahead over a stream of SAX events.
class EventSource {
 public:
  virtual ~EventSource() = default;
  /// Next event without consuming it; nullptr at end of input.
  virtual const SaxEvent* peek() = 0;
  virtual void pop() = 0;
  /// Number of events consumed so far.
  virtual std::size_t position() const = 0;
};

class VectorEventSource : public EventSource {
 public:
  explicit VectorEventSource(std::span<const SaxEvent> events) : events_(events) {}

  const SaxEvent* peek() override { return pos_ < events_.size() ? &events_[pos_] : nullptr; }
  void pop() override { ++pos_; }
  std::size_t position() const override { return pos_; }

 private:
  std::span<const SaxEvent> events_;
  std::size_t pos_ = 0;
};

class ReaderEventSource : public EventSource {
 public:
  explicit ReaderEventSource(SaxReader& reader) : reader_(reader) {}

  const SaxEvent* peek() override;
  void pop() override;
  std::size_t position() const override { return pos_; }

 private:
  SaxReader& reader_;
  std::optional<SaxEvent> head_;
  bool fetched_ = false;
  std::size_t pos_ = 0;
};

}  // namespace xmlgram
