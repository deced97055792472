#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "renarrate/snapshot.hpp"

namespace renarrate {

struct ByteRange {
  std::size_t begin = 0;
  std::size_t end = 0;
  friend bool operator==(const ByteRange&, const ByteRange&) = default;
};

/// Half-open range of code-point offsets into extracted text.
struct TextSpan {
  std::size_t start = 0;
  std::size_t end = 0;
  std::size_t length() const noexcept { return end - start; }
  friend bool operator==(const TextSpan&, const TextSpan&) = default;
  friend auto operator<=>(const TextSpan&, const TextSpan&) = default;
};

/// Visible text of a document plus, for every code point, the content bytes
/// it was produced from. A collapsed whitespace run maps to the whole run;
/// a decoded entity maps to the whole entity.
struct ExtractedText {
  std::string text;
  std::u32string code_points;
  std::vector<ByteRange> map;

  std::size_t size() const noexcept { return code_points.size(); }
  /// Bytes covering code points [span.start, span.end). Requires a
  /// non-empty span within bounds.
  ByteRange bytes_for(TextSpan span) const;
  std::string slice(TextSpan span) const;
};

struct Element {
  std::string tag;
  std::string id;
  std::vector<std::string> classes;
  int parent = -1;
  std::vector<int> children;
  /// Visible text of the element, trimmed of boundary spaces.
  TextSpan text;
  /// Bytes between the end of the start tag and the start of the end tag.
  ByteRange inner;
};

/// A snapshot parsed for anchoring and composition.
struct ParsedDocument {
  bool html = false;
  ExtractedText text;
  /// Index 0 is a synthetic root; empty for plain text.
  std::vector<Element> elements;
  /// Non-empty paragraph spans in document order. HTML paragraphs are
  /// delimited by block-level element boundaries, plain-text paragraphs by
  /// blank lines.
  std::vector<TextSpan> paragraphs;
};

/// Throws Error(UnsupportedMediaType) for non-textual snapshots and
/// Error(MalformedDocument) when textual content is not valid UTF-8.
ParsedDocument parse_document(const DocumentSnapshot& snapshot);

/// Whitespace runs collapse to one space and element boundaries become a
/// single space; output is trimmed. Deterministic.
ExtractedText extract_text(const DocumentSnapshot& snapshot);

}  // namespace renarrate
