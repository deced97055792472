#pragma once

#include <string>
#include <string_view>

#include "renarrate/timestamp.hpp"

namespace renarrate {

/// Immutable retrieved copy of a source document.
struct DocumentSnapshot {
  std::string id;  // assigned by the snapshot store, may be empty
  std::string source;
  std::string media_type;
  std::string content;
  Timestamp retrieved_at;
};

/// Lowercased media type with parameters stripped ("text/html; charset=x" -> "text/html").
std::string essence(std::string_view media_type);
bool is_html_media_type(std::string_view media_type);
/// HTML, XHTML and every text/* type.
bool is_textual_media_type(std::string_view media_type);

}  // namespace renarrate
