#pragma once

#include <json.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "renarrate/timestamp.hpp"

namespace renarrate {

inline constexpr std::string_view kAnnotationContext = "http://www.w3.org/ns/anno.jsonld";
inline constexpr std::string_view kMediaFragmentsSpec = "http://www.w3.org/TR/media-frags/";
inline constexpr std::string_view kAnnotationMediaType =
    "application/ld+json;profile=\"http://www.w3.org/ns/anno.jsonld\"";

struct Agent {
  std::optional<std::string> id;
  std::optional<std::string> name;
  /// e.g. "Person", "Software". Not required by the model.
  std::optional<std::string> type;

  friend bool operator==(const Agent&, const Agent&) = default;
};

/// Annotation motivation. Values outside the known set are kept verbatim in
/// `raw` and reported through `is_extension()`.
class Motivation {
public:
  enum class Kind { Describing, Editing, Replying, Tagging, Bookmarking, Renarrating, Other };

  Motivation() = default;
  explicit Motivation(Kind kind);
  static Motivation from_string(std::string_view raw);

  Kind kind() const noexcept { return kind_; }
  const std::string& str() const noexcept { return raw_; }
  bool is_extension() const noexcept { return kind_ == Kind::Other; }

  friend bool operator==(const Motivation&, const Motivation&) = default;

private:
  Kind kind_ = Kind::Describing;
  std::string raw_ = "describing";
};

namespace selector {

struct TextQuote {
  std::string exact;
  std::string prefix;
  std::string suffix;
  friend bool operator==(const TextQuote&, const TextQuote&) = default;
};

/// Code-point offsets, half open.
struct TextPosition {
  std::int64_t start = 0;
  std::int64_t end = 0;
  friend bool operator==(const TextPosition&, const TextPosition&) = default;
};

struct Css {
  std::string value;
  friend bool operator==(const Css&, const Css&) = default;
};

struct MediaFragment {
  std::string conforms_to{kMediaFragmentsSpec};
  std::string value;
  friend bool operator==(const MediaFragment&, const MediaFragment&) = default;
};

}  // namespace selector

using Selector =
    std::variant<selector::TextQuote, selector::TextPosition, selector::Css, selector::MediaFragment>;

std::string_view selector_type_name(const Selector& s) noexcept;

struct Target {
  std::string source;
  /// Empty means the whole resource. The first entry is the primary
  /// selector; later entries are alternatives tried in order.
  std::vector<Selector> selectors;

  friend bool operator==(const Target&, const Target&) = default;
};

enum class Medium { Text, Audio, Video, Image };

std::string_view to_string(Medium m) noexcept;
std::optional<Medium> medium_from_string(std::string_view s) noexcept;

namespace body {

struct Textual {
  std::string value;
  std::optional<std::string> language;
  std::optional<std::string> format;
  friend bool operator==(const Textual&, const Textual&) = default;
};

struct External {
  std::string id;
  /// WADM resource class such as "Sound", "Video", "Image", "Text".
  std::optional<std::string> type;
  std::optional<std::string> format;
  std::optional<std::string> language;
  friend bool operator==(const External&, const External&) = default;
};

}  // namespace body

using Body = std::variant<body::Textual, body::External>;

const std::optional<std::string>& body_language(const Body& b) noexcept;

/// Textual bodies are text; external bodies are classified by their format
/// (audio/*, video/*, image/*, text/*) and then by their resource type.
std::optional<Medium> body_medium(const Body& b) noexcept;

enum class TransformationKind { Simplification, Elaboration, Translation, MediaSubstitution };

std::string_view to_string(TransformationKind k) noexcept;
std::optional<TransformationKind> transformation_from_string(std::string_view s) noexcept;

struct AudienceSpec {
  std::vector<std::string> languages;
  std::optional<Medium> medium;
  std::optional<int> literacy_level;

  friend bool operator==(const AudienceSpec&, const AudienceSpec&) = default;
};

struct Renarration {
  std::optional<std::string> id;
  std::optional<Agent> creator;
  std::optional<Timestamp> created;
  std::optional<Timestamp> modified;
  std::optional<Motivation> motivation;
  std::optional<TransformationKind> transformation;
  std::optional<AudienceSpec> audience;
  std::vector<Body> bodies;
  Target target;

  /// Unknown top-level members, re-emitted verbatim after the known keys.
  nlohmann::json extras = nlohmann::json::object();
  /// `@context` entries other than the annotation context and the local
  /// extension context.
  std::vector<nlohmann::json> extra_contexts;

  bool is_renarrating() const noexcept {
    return motivation && motivation->kind() == Motivation::Kind::Renarrating;
  }

  friend bool operator==(const Renarration&, const Renarration&) = default;
};

struct Violation {
  std::string field;
  std::string rule;

  std::string to_string() const { return field + ": " + rule; }
  friend bool operator==(const Violation&, const Violation&) = default;
};

/// Checks every type invariant; empty result means the value is valid.
std::vector<Violation> validate(const Renarration& r);

}  // namespace renarrate
