#pragma once

#include <json.hpp>

#include <string>
#include <string_view>

#include "renarrate/model.hpp"

// JSON-LD wire format for renarrations. Only the fixed Web Annotation
// context shape is understood; no expansion or compaction is performed.
namespace renarrate::jsonld {

/// Local vocabulary for members the annotation context does not define
/// (`transformation`, the audience sub-fields).
const nlohmann::ordered_json& extension_context();

/// Throws Error with MalformedDocument, MissingContext, MissingTarget or
/// InvalidSelector.
Renarration parse_annotation(std::string_view doc);
Renarration from_json(const nlohmann::json& doc);

/// Canonical text: fixed key order, two-space indentation, UTF-8 left
/// unescaped. Throws Error(InvariantViolation) listing every violation.
std::string serialize_annotation(const Renarration& r);

/// Canonical object form without the validation step.
nlohmann::ordered_json to_json(const Renarration& r);

}  // namespace renarrate::jsonld
