#include "xmlgram/xml.hpp"

#include <stdexcept>

namespace xmlgram {

XmlTree element(std::string tag, Attributes attrs, std::vector<XmlTree> children) {
  return XmlTree{XmlElement{std::move(tag), std::move(attrs), std::move(children)}};
}

XmlTree textNode(std::string text) { return XmlTree{XmlText{std::move(text)}}; }

std::string toString(const SaxEvent& event) {
  if (const auto* s = std::get_if<StartTag>(&event)) {
    std::string out = "<" + s->tag;
    for (const auto& [k, v] : s->attrs) out += " " + k + "=\"" + escapeXml(v, true) + "\"";
    return out + ">";
  }
  if (const auto* e = std::get_if<EndTag>(&event)) return "</" + e->tag + ">";
  return "text(\"" + std::get<TextEvt>(event).text + "\")";
}

void flattenTree(const XmlTree& tree, std::vector<SaxEvent>& out) {
  if (const auto* t = tree.text()) {
    out.emplace_back(TextEvt{t->text});
    return;
  }
  const XmlElement& el = *tree.element();
  out.emplace_back(StartTag{el.tag, el.attrs});
  for (const XmlTree& child : el.children) flattenTree(child, out);
  out.emplace_back(EndTag{el.tag});
}

std::vector<SaxEvent> flattenTree(const XmlTree& tree) {
  std::vector<SaxEvent> out;
  flattenTree(tree, out);
  return out;
}

std::vector<SaxEvent> flattenForest(std::span<const XmlTree> forest) {
  std::vector<SaxEvent> out;
  for (const XmlTree& t : forest) flattenTree(t, out);
  return out;
}

std::vector<XmlTree> buildForest(std::span<const SaxEvent> events) {
  std::vector<XmlTree> top;
  std::vector<XmlElement> open;
  auto emit = [&](XmlTree t) {
    if (open.empty()) {
      top.push_back(std::move(t));
    } else {
      open.back().children.push_back(std::move(t));
    }
  };
  for (const SaxEvent& ev : events) {
    if (const auto* s = std::get_if<StartTag>(&ev)) {
      open.push_back(XmlElement{s->tag, s->attrs, {}});
    } else if (const auto* e = std::get_if<EndTag>(&ev)) {
      if (open.empty() || open.back().tag != e->tag) {
        throw std::invalid_argument("unbalanced end tag </" + e->tag + ">");
      }
      XmlElement done = std::move(open.back());
      open.pop_back();
      emit(XmlTree{std::move(done)});
    } else {
      emit(textNode(std::get<TextEvt>(ev).text));
    }
  }
  if (!open.empty()) throw std::invalid_argument("unclosed element <" + open.back().tag + ">");
  return top;
}

std::string escapeXml(std::string_view text, bool attribute) {
  std::string out;
  out.reserve(text.size());
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += attribute ? "&quot;" : "\""; break;
      case '\'': out += attribute ? "&apos;" : "'"; break;
      default: out += c;
    }
  }
  return out;
}

namespace {

void serializeInto(const XmlTree& tree, std::string& out) {
  if (const auto* t = tree.text()) {
    out += escapeXml(t->text, false);
    return;
  }
  const XmlElement& el = *tree.element();
  out += "<" + el.tag;
  for (const auto& [k, v] : el.attrs) out += " " + k + "=\"" + escapeXml(v, true) + "\"";
  if (el.children.empty()) {
    out += "/>";
    return;
  }
  out += ">";
  for (const XmlTree& c : el.children) serializeInto(c, out);
  out += "</" + el.tag + ">";
}

}  // namespace

std::string serialize(const XmlTree& tree) {
  std::string out;
  serializeInto(tree, out);
  return out;
}

}  // namespace xmlgram
