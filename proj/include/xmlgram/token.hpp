#pragma once

#include <compare>
#include <string>
#include <string_view>

#include "xmlgram/xml.hpp"

namespace xmlgram {

/// Reserved tag whose end tag stands for end of input. XML names cannot
/// contain '$', so it never collides with a document tag.
inline constexpr std::string_view kEndOfInputTag = "$end";

/// Lookahead alphabet of predict tables.
struct Token {
  enum class Kind { Tag, EndTag, Text, Wildcard };

  Kind kind = Kind::Text;
  std::string tag;  // empty for Text and Wildcard

  static Token startTag(std::string t) { return {Kind::Tag, std::move(t)}; }
  static Token endTag(std::string t) { return {Kind::EndTag, std::move(t)}; }
  static Token text() { return {Kind::Text, {}}; }
  static Token wildcard() { return {Kind::Wildcard, {}}; }
  static Token endOfInput() { return endTag(std::string(kEndOfInputTag)); }

  bool isEndOfInput() const { return kind == Kind::EndTag && tag == kEndOfInputTag; }

  auto operator<=>(const Token&) const = default;
  bool operator==(const Token&) const = default;
};

/// `A`, `/A`, `TEXT`, `*`.
std::string toString(const Token& token);

Token tokenOf(const SaxEvent& event);

}  // namespace xmlgram
