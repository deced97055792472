#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "renarrate/anchoring.hpp"
#include "renarrate/html_document.hpp"
#include "renarrate/model.hpp"
#include "renarrate/snapshot.hpp"

namespace renarrate {

struct AudienceProfile {
  std::vector<std::string> languages;  // most preferred first
  std::optional<Medium> medium;
  std::optional<int> literacy_level;

  friend bool operator==(const AudienceProfile&, const AudienceProfile&) = default;
};

struct ScoreWeights {
  std::int64_t language = 1000;
  std::int64_t medium = 100;
  std::int64_t level = 10;

  ScoreWeights scaled(std::int64_t factor) const {
    return {language * factor, medium * factor, level * factor};
  }
};

struct ScoreBreakdown {
  std::int64_t language = 0;  // L - i for the first matching profile language, else 0
  std::int64_t medium = 0;    // 0 or 1
  std::int64_t level = 0;     // 0 or 1
  std::int64_t total = 0;
};

/// Throws Error(WrongMotivation) unless `r` is a renarration.
ScoreBreakdown score_breakdown(const Renarration& r, const AudienceProfile& profile,
                               const ScoreWeights& weights = {});
std::int64_t score_candidate(const Renarration& r, const AudienceProfile& profile,
                             const ScoreWeights& weights = {});

/// Highest score wins; ties go to the latest `created`, then the smallest
/// id. Nothing is chosen when the winner matches no profile language.
std::optional<std::size_t> select_best_index(std::span<const Renarration> candidates,
                                             const AudienceProfile& profile,
                                             const ScoreWeights& weights = {});
std::optional<Renarration> select_best(std::span<const Renarration> candidates,
                                       const AudienceProfile& profile,
                                       const ScoreWeights& weights = {});

/// A stretch of uncovered text handed to the fallback transformer.
struct FallbackInput {
  std::string_view text;  // visible text of the stretch
  std::string_view raw;   // the snapshot bytes it was extracted from
  bool html = false;
  const AudienceProfile& profile;
};

class FallbackTransformer {
public:
  virtual ~FallbackTransformer() = default;
  virtual std::string_view name() const = 0;
  /// Replacement bytes for `input.raw`, or nullopt to leave it unchanged.
  virtual std::optional<std::string> transform(const FallbackInput& input) const = 0;
};

class IdentityFallback final : public FallbackTransformer {
public:
  std::string_view name() const override { return "identity"; }
  std::optional<std::string> transform(const FallbackInput&) const override { return std::nullopt; }
};

/// Wraps every uncovered paragraph in a `needs-translation` marker: a span
/// with that class in HTML, `[needs-translation:<lang>]...[/needs-translation]`
/// in plain text.
class TaggingFallback final : public FallbackTransformer {
public:
  std::string_view name() const override { return "tagging"; }
  std::optional<std::string> transform(const FallbackInput& input) const override;
};

/// "identity" or "tagging"; throws Error(InvalidConfig) otherwise.
std::unique_ptr<FallbackTransformer> make_fallback(std::string_view name);

inline constexpr std::string_view kFallbackChoice = "fallback";

struct Substitution {
  TextSpan span;
  ByteRange bytes;
  /// Absent for fallback output.
  std::optional<AnchorResult> anchor;
  /// Annotation IRI, or kFallbackChoice.
  std::string chosen;
  std::int64_t score = 0;
  std::variant<Body, std::string> body_used;
  std::string replacement;

  bool is_fallback() const noexcept { return !anchor.has_value(); }
};

struct Rendition {
  std::string source;
  std::string snapshot_id;
  std::string media_type;
  AudienceProfile profile;
  std::string output;
  /// Ordered by position in the document; spans never overlap.
  std::vector<Substitution> substitutions;
  /// Ids of renarrations whose selectors could not be resolved.
  std::vector<std::string> orphaned;
  /// Candidates whose span overlapped a higher-scoring accepted substitution.
  std::size_t dropped_overlap = 0;
  /// Candidates that are not renarrations or anchored to a media region.
  std::size_t ineligible = 0;
  Timestamp composed_at;
};

struct ComposeOptions {
  ScoreWeights weights;
  std::optional<Timestamp> composed_at;
};

/// Throws Error with EmptyProfile, UnsupportedMediaType or SourceMismatch.
Rendition compose(const DocumentSnapshot& snapshot, std::span<const Renarration> renarrations,
                  const AudienceProfile& profile, const FallbackTransformer& fallback,
                  const ComposeOptions& options = {});

}  // namespace renarrate
