#include "xmlgram/token.hpp"

namespace xmlgram {

std::string toString(const Token& token) {
  switch (token.kind) {
    case Token::Kind::Tag: return token.tag;
    case Token::Kind::EndTag: return "/" + token.tag;
    case Token::Kind::Text: return "TEXT";
    case Token::Kind::Wildcard: return "*";
  }
  return "?";
}

Token tokenOf(const SaxEvent& event) {
  if (const auto* s = std::get_if<StartTag>(&event)) return Token::startTag(s->tag);
  if (const auto* e = std::get_if<EndTag>(&event)) return Token::endTag(e->tag);
  return Token::text();
}

}  // namespace xmlgram
