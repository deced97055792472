#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "renarrate/html_document.hpp"

namespace renarrate::css {

struct Compound {
  std::string tag;  // empty or "*" matches any element
  std::string id;
  std::vector<std::string> classes;
  std::optional<int> nth_of_type;
};

/// Compound selectors joined by descendant combinators, outermost first.
struct SelectorChain {
  std::vector<Compound> parts;
};

/// Supports type, `.class`, `#id`, `:nth-of-type(n)` and the descendant
/// combinator. Throws Error(InvalidSelector) for anything else.
SelectorChain parse(std::string_view selector);

/// Indices of matching elements in document order.
std::vector<int> select(const ParsedDocument& doc, const SelectorChain& chain);

}  // namespace renarrate::css
