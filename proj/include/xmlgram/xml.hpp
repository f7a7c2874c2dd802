#pragma once

#include <map>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace xmlgram {

using Attributes = std::map<std::string, std::string, std::less<>>;

struct XmlTree;

struct XmlElement {
  std::string tag;
  Attributes attrs;
  std::vector<XmlTree> children;
  bool operator==(const XmlElement&) const = default;
};

struct XmlText {
  std::string text;
  bool operator==(const XmlText&) const = default;
};

/// A materialized XML tree. Only the test oracle and tree-based tooling build
/// these; the parsing engine works on events.
struct XmlTree {
  std::variant<XmlElement, XmlText> node;

  const XmlElement* element() const { return std::get_if<XmlElement>(&node); }
  const XmlText* text() const { return std::get_if<XmlText>(&node); }

  bool operator==(const XmlTree&) const = default;
};

XmlTree element(std::string tag, Attributes attrs = {}, std::vector<XmlTree> children = {});
XmlTree textNode(std::string text);

struct StartTag {
  std::string tag;
  Attributes attrs;
  bool operator==(const StartTag&) const = default;
};
struct EndTag {
  std::string tag;
  bool operator==(const EndTag&) const = default;
};
struct TextEvt {
  std::string text;
  bool operator==(const TextEvt&) const = default;
};

using SaxEvent = std::variant<StartTag, EndTag, TextEvt>;

std::string toString(const SaxEvent& event);

/// Pre-order linearization of a tree into SAX events.
std::vector<SaxEvent> flattenTree(const XmlTree& tree);
void flattenTree(const XmlTree& tree, std::vector<SaxEvent>& out);
std::vector<SaxEvent> flattenForest(std::span<const XmlTree> forest);

/// Inverse of flattenForest. Throws std::invalid_argument when the stream is
/// not well nested.
std::vector<XmlTree> buildForest(std::span<const SaxEvent> events);

/// Serializes a tree as XML text, escaping the five predefined entities.
std::string serialize(const XmlTree& tree);
std::string escapeXml(std::string_view text, bool attribute);

}  // namespace xmlgram
