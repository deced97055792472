#include "renarrate/css_selector.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>

#include "renarrate/error.hpp"
#include "renarrate/text_util.hpp"

namespace renarrate::css {

namespace {

[[noreturn]] void unsupported(std::string_view selector, std::string_view why) {
  throw Error(Errc::InvalidSelector, "css '" + std::string(selector) + "': " + std::string(why));
}

bool ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_';
}

std::string read_ident(std::string_view s, std::size_t& i) {
  const std::size_t start = i;
  while (i < s.size() && ident_char(s[i])) ++i;
  return std::string(s.substr(start, i - start));
}

Compound parse_compound(std::string_view selector, std::string_view s) {
  Compound c;
  std::size_t i = 0;
  if (i < s.size() && s[i] == '*') {
    c.tag = "*";
    ++i;
  } else if (i < s.size() && std::isalpha(static_cast<unsigned char>(s[i]))) {
    c.tag = text::to_lower_ascii(read_ident(s, i));
  }
  while (i < s.size()) {
    const char kind = s[i++];
    if (kind == '.') {
      auto name = read_ident(s, i);
      if (name.empty()) unsupported(selector, "empty class name");
      c.classes.push_back(std::move(name));
    } else if (kind == '#') {
      auto name = read_ident(s, i);
      if (name.empty()) unsupported(selector, "empty id");
      c.id = std::move(name);
    } else if (kind == ':') {
      const auto pseudo = read_ident(s, i);
      if (pseudo != "nth-of-type" || i >= s.size() || s[i] != '(') {
        unsupported(selector, "only :nth-of-type(n) is supported");
      }
      const auto close = s.find(')', i);
      if (close == std::string_view::npos) unsupported(selector, "unclosed :nth-of-type(");
      const std::string_view arg = s.substr(i + 1, close - i - 1);
      int n = 0;
      const auto [ptr, ec] = std::from_chars(arg.data(), arg.data() + arg.size(), n);
      if (ec != std::errc{} || ptr != arg.data() + arg.size() || n < 1) {
        unsupported(selector, ":nth-of-type needs a positive integer");
      }
      c.nth_of_type = n;
      i = close + 1;
    } else {
      unsupported(selector, std::string("unexpected '") + kind + "'");
    }
  }
  return c;
}

int nth_of_type(const ParsedDocument& doc, int index) {
  const Element& el = doc.elements[static_cast<std::size_t>(index)];
  if (el.parent < 0) return 1;
  int n = 0;
  for (int sibling : doc.elements[static_cast<std::size_t>(el.parent)].children) {
    if (doc.elements[static_cast<std::size_t>(sibling)].tag == el.tag) ++n;
    if (sibling == index) break;
  }
  return n;
}

bool matches(const ParsedDocument& doc, int index, const Compound& c) {
  const Element& el = doc.elements[static_cast<std::size_t>(index)];
  if (index == 0) return false;
  if (!c.tag.empty() && c.tag != "*" && c.tag != el.tag) return false;
  if (!c.id.empty() && c.id != el.id) return false;
  for (const auto& cls : c.classes) {
    if (std::find(el.classes.begin(), el.classes.end(), cls) == el.classes.end()) return false;
  }
  if (c.nth_of_type && nth_of_type(doc, index) != *c.nth_of_type) return false;
  return true;
}

}  // namespace

SelectorChain parse(std::string_view selector) {
  SelectorChain chain;
  std::size_t i = 0;
  while (i < selector.size()) {
    while (i < selector.size() && std::isspace(static_cast<unsigned char>(selector[i]))) ++i;
    if (i >= selector.size()) break;
    const std::size_t start = i;
    while (i < selector.size() && !std::isspace(static_cast<unsigned char>(selector[i]))) {
      if (selector[i] == '>' || selector[i] == '+' || selector[i] == '~' || selector[i] == ',' ||
          selector[i] == '[') {
        unsupported(selector, "only descendant combinators are supported");
      }
      ++i;
    }
    chain.parts.push_back(parse_compound(selector, selector.substr(start, i - start)));
  }
  if (chain.parts.empty()) unsupported(selector, "empty selector");
  return chain;
}

std::vector<int> select(const ParsedDocument& doc, const SelectorChain& chain) {
  std::vector<int> out;
  const int count = static_cast<int>(doc.elements.size());
  for (int index = 1; index < count; ++index) {
    if (!matches(doc, index, chain.parts.back())) continue;
    // Descendant-only chains: matching each remaining part against the
    // nearest qualifying ancestor is sufficient.
    int ancestor = doc.elements[static_cast<std::size_t>(index)].parent;
    std::size_t part = chain.parts.size() - 1;
    while (part > 0 && ancestor > 0) {
      if (matches(doc, ancestor, chain.parts[part - 1])) --part;
      ancestor = doc.elements[static_cast<std::size_t>(ancestor)].parent;
    }
    if (part == 0) out.push_back(index);
  }
  return out;
}

}  // namespace renarrate::css
