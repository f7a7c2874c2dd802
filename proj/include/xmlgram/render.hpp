#pragma once

#include <string>

#include <json.hpp>

#include "xmlgram/value.hpp"

namespace xmlgram {

/// Canonical textual term syntax: `Ctor(a,b)`, nullary terms bare (`Nil`),
/// quoted strings, lists `[a,b]`, tuples `(a,b)`, `null`.
std::string toTermString(const Value& v);

/// Terms become {"ctor": ..., "args": [...]}; lists and tuples become arrays.
nlohmann::json toJson(const Value& v);

/// Replaces every `Cons(h, t)`/`Nil` chain by a List of the same elements.
Value flattenLists(const Value& v);

std::string quoteString(std::string_view s);

}  // namespace xmlgram
