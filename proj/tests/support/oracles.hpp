#pragma once

// Reference implementations written straight from the stated contracts.
// They favour obviousness over speed and share no code with the library
// beyond its plain data types.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "renarrate/annotation_store.hpp"
#include "renarrate/composer.hpp"
#include "renarrate/model.hpp"

namespace oracle {

/// Full (|a|+1)x(|b|+1) Levenshtein table.
std::size_t levenshtein(const std::u32string& a, const std::u32string& b);

/// Start offsets of every occurrence of `needle`, overlapping ones included.
std::vector<std::size_t> occurrences(const std::u32string& text, const std::u32string& needle);

struct Window {
  std::size_t start = 0;
  std::size_t end = 0;
  std::size_t distance = 0;
  std::size_t normalizer = 1;
  double ratio() const { return static_cast<double>(distance) / static_cast<double>(normalizer); }
};

/// Every window whose length is within 20% of |quote|, scored by
/// distance / max(|quote|, |window|). Smallest ratio wins, then smallest
/// start, then shortest window.
std::optional<Window> best_window(const std::u32string& text, const std::u32string& quote);

std::u32string utf32(const std::string& utf8);

std::string primary_subtag(const std::string& tag);
/// Scheme and host lowercased, nothing else touched.
std::string normalize_iri(const std::string& iri);

struct Weights {
  std::int64_t language = 1000;
  std::int64_t medium = 100;
  std::int64_t level = 10;
};

struct Score {
  std::int64_t language = 0;
  std::int64_t total = 0;
};

Score score(const renarrate::Renarration& r, const renarrate::AudienceProfile& profile,
            const Weights& w = {});

/// Linear scan for the maximum, then latest created (absent is oldest),
/// then smallest id (absent is ""); no answer when the winner matches no
/// profile language.
std::optional<std::size_t> select(std::span<const renarrate::Renarration> candidates,
                                  const renarrate::AudienceProfile& profile, const Weights& w = {});

struct Stored {
  std::string id;
  renarrate::Renarration annotation;  // `created` must be set
};

/// Ids of every record passing the filters, ordered by created then id.
std::vector<std::string> search(const std::vector<Stored>& records, const renarrate::SearchQuery& q);

/// Plain-text reference composer: every renarration carries a TextQuote
/// that occurs exactly once in `text`; its span is that occurrence. Groups
/// by span, keeps each group's oracle winner, accepts groups by descending
/// score (ties: earlier span first) unless they overlap an accepted one,
/// then splices textual body values left to right.
struct ComposeResult {
  std::string output;
  std::vector<std::pair<std::size_t, std::size_t>> spans;
  std::vector<std::string> chosen;
};
ComposeResult compose_plain(const std::string& text, std::span<const renarrate::Renarration> rs,
                            const renarrate::AudienceProfile& profile);

}  // namespace oracle
