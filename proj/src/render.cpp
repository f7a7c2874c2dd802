#include "xmlgram/render.hpp"

#include <cstdio>

#include "xmlgram/eval.hpp"

namespace xmlgram {

std::string quoteString(std::string_view s) {
  std::string out = "\"";
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      case '\r': out += "\\r"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof buf, "\\u%04x", static_cast<unsigned>(c));
          out += buf;
        } else {
          out += c;
        }
    }
  }
  return out + "\"";
}

namespace {

void writeTerm(const Value& root, std::string& out) {
  // The spine of a Cons chain is walked iteratively; only heads recurse.
  const Value* v = &root;
  std::size_t open = 0;
  while (v->isTerm("Cons") && v->items().size() == 2) {
    out += "Cons(";
    writeTerm(v->items()[0], out);
    out += ",";
    v = &v->items()[1];
    ++open;
  }
  switch (v->kind()) {
    case Value::Kind::Null: out += "null"; break;
    case Value::Kind::Bool: out += v->asBool() ? "true" : "false"; break;
    case Value::Kind::Int: out += std::to_string(v->asInt()); break;
    case Value::Kind::Str: out += quoteString(v->asString()); break;
    case Value::Kind::Term:
    case Value::Kind::List:
    case Value::Kind::Tuple: {
      const bool term = v->kind() == Value::Kind::Term;
      if (term) {
        out += v->ctor();
        if (v->items().empty()) break;
      }
      out += v->kind() == Value::Kind::List ? "[" : "(";
      bool first = true;
      for (const Value& item : v->items()) {
        if (!first) out += ",";
        first = false;
        writeTerm(item, out);
      }
      out += v->kind() == Value::Kind::List ? "]" : ")";
      break;
    }
  }
  out.append(open, ')');
}

}  // namespace

std::string toTermString(const Value& v) {
  std::string out;
  writeTerm(v, out);
  return out;
}

nlohmann::json toJson(const Value& v) {
  switch (v.kind()) {
    case Value::Kind::Null: return nullptr;
    case Value::Kind::Bool: return v.asBool();
    case Value::Kind::Int: return v.asInt();
    case Value::Kind::Str: return v.asString();
    case Value::Kind::Term: {
      nlohmann::json args = nlohmann::json::array();
      for (const Value& a : v.items()) args.push_back(toJson(a));
      return nlohmann::json{{"ctor", v.ctor()}, {"args", std::move(args)}};
    }
    case Value::Kind::List:
    case Value::Kind::Tuple: {
      nlohmann::json arr = nlohmann::json::array();
      for (const Value& a : v.items()) arr.push_back(toJson(a));
      return arr;
    }
  }
  return nullptr;
}

Value flattenLists(const Value& v) {
  if (v.isTerm("Cons") || v.isTerm("Nil")) {
    if (auto elems = listElements(v)) {
      for (Value& e : *elems) e = flattenLists(e);
      return Value::list(std::move(*elems));
    }
  }
  switch (v.kind()) {
    case Value::Kind::Term:
    case Value::Kind::List:
    case Value::Kind::Tuple: {
      std::vector<Value> items;
      items.reserve(v.items().size());
      for (const Value& a : v.items()) items.push_back(flattenLists(a));
      if (v.kind() == Value::Kind::Term) return Value::term(v.ctor(), std::move(items));
      return v.kind() == Value::Kind::List ? Value::list(std::move(items))
                                           : Value::tuple(std::move(items));
    }
    default:
      return v;
  }
}

}  // namespace xmlgram
