#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <variant>

#include "renarrate/html_document.hpp"
#include "renarrate/media_fragment.hpp"
#include "renarrate/model.hpp"
#include "renarrate/snapshot.hpp"

namespace renarrate {

/// Default maximum normalized edit distance accepted by the fuzzy stage.
inline constexpr double kDefaultFuzzyThreshold = 0.2;

/// Media fragments resolve with `Position`: they are coordinates, not text.
enum class AnchorMethod { Css, QuoteExact, Position, QuoteFuzzy, WholeResource };

std::string_view to_string(AnchorMethod m) noexcept;

/// Whole-resource anchor on a non-textual snapshot. Textual snapshots
/// anchor the whole resource as a span over the entire extracted text.
struct WholeResource {
  friend bool operator==(const WholeResource&, const WholeResource&) = default;
};

using AnchorLocation = std::variant<TextSpan, Region, TimeInterval, WholeResource>;

struct AnchorResult {
  AnchorLocation location;
  AnchorMethod method = AnchorMethod::WholeResource;
  /// 1 for every method except QuoteFuzzy, which is below 1.
  double confidence = 1.0;

  const TextSpan* span() const noexcept { return std::get_if<TextSpan>(&location); }
  friend bool operator==(const AnchorResult&, const AnchorResult&) = default;
};

/// Levenshtein distance over code points.
std::size_t edit_distance(std::u32string_view a, std::u32string_view b);

/// Best approximate occurrence of a quote: the window minimising
/// distance / max(|quote|, |window|).
struct FuzzyMatch {
  TextSpan span;
  std::size_t distance = 0;
  std::size_t normalizer = 1;  // max(|quote|, |window|)
  double ratio() const noexcept { return static_cast<double>(distance) / static_cast<double>(normalizer); }
};

/// Window lengths considered for a quote of `n` code points: n - n/5 to
/// n + n/5 (integer division), never below 1.
std::size_t min_window(std::size_t n) noexcept;
std::size_t max_window(std::size_t n) noexcept;

/// Slides every window length over `text` and returns the minimal
/// normalized-distance window; ties go to the smallest start, then the
/// shortest window. Returns nullopt when no window fits in the text.
std::optional<FuzzyMatch> best_fuzzy_window(std::u32string_view text, std::u32string_view quote);

/// Exact stage first (prefix/suffix disambiguate several hits), then the
/// fuzzy stage when the quote does not occur at all.
/// Throws Error(Ambiguous) or Error(NotFound).
AnchorResult anchor_text_quote(std::u32string_view text, const selector::TextQuote& sel,
                               double max_distance_ratio = kDefaultFuzzyThreshold);
AnchorResult anchor_text_quote(std::string_view utf8_text, const selector::TextQuote& sel,
                               double max_distance_ratio = kDefaultFuzzyThreshold);

/// Resolves a target against a snapshot, trying the primary selector and
/// then each alternative. Throws Error(SourceMismatch) or Error(Orphaned);
/// an Orphaned error lists every selector's failure in `details()`.
AnchorResult anchor(const Target& target, const DocumentSnapshot& snapshot);

/// Same, reusing an already parsed document (for textual snapshots).
AnchorResult anchor(const Target& target, const DocumentSnapshot& snapshot,
                    const ParsedDocument& parsed);

}  // namespace renarrate
