#include "renarrate/anchoring.hpp"

#include <algorithm>
#include <numeric>
#include <optional>
#include <vector>

#include "renarrate/css_selector.hpp"
#include "renarrate/error.hpp"
#include "renarrate/text_util.hpp"

namespace renarrate {

std::string_view to_string(AnchorMethod m) noexcept {
  switch (m) {
    case AnchorMethod::Css: return "css";
    case AnchorMethod::QuoteExact: return "quote-exact";
    case AnchorMethod::Position: return "position";
    case AnchorMethod::QuoteFuzzy: return "quote-fuzzy";
    case AnchorMethod::WholeResource: return "whole-resource";
  }
  return "whole-resource";
}

std::size_t edit_distance(std::u32string_view a, std::u32string_view b) {
  if (a.empty()) return b.size();
  if (b.empty()) return a.size();
  std::vector<std::size_t> row(b.size() + 1);
  std::iota(row.begin(), row.end(), std::size_t{0});
  for (std::size_t i = 0; i < a.size(); ++i) {
    std::size_t diagonal = row[0];
    row[0] = i + 1;
    for (std::size_t j = 0; j < b.size(); ++j) {
      const std::size_t up = row[j + 1];
      const std::size_t cost = a[i] == b[j] ? 0 : 1;
      row[j + 1] = std::min({up + 1, row[j] + 1, diagonal + cost});
      diagonal = up;
    }
  }
  return row[b.size()];
}

std::size_t min_window(std::size_t n) noexcept { return std::max<std::size_t>(1, n - n / 5); }
std::size_t max_window(std::size_t n) noexcept { return n + n / 5; }

std::optional<FuzzyMatch> best_fuzzy_window(std::u32string_view text, std::u32string_view quote) {
  const std::size_t n = quote.size();
  const std::size_t lo = min_window(n);
  const std::size_t hi = max_window(n);
  if (n == 0 || text.size() < lo) return std::nullopt;

  std::optional<FuzzyMatch> best;
  // column[i] = distance(quote[0, i), text[start, start + j)), advanced in j.
  std::vector<std::size_t> column(n + 1);
  for (std::size_t start = 0; start + lo <= text.size(); ++start) {
    std::iota(column.begin(), column.end(), std::size_t{0});
    const std::size_t longest = std::min(hi, text.size() - start);
    for (std::size_t j = 1; j <= longest; ++j) {
      const char32_t c = text[start + j - 1];
      std::size_t diagonal = column[0];
      column[0] = j;
      for (std::size_t i = 1; i <= n; ++i) {
        const std::size_t left = column[i];
        const std::size_t cost = quote[i - 1] == c ? 0 : 1;
        column[i] = std::min({left + 1, column[i - 1] + 1, diagonal + cost});
        diagonal = left;
      }
      if (j < lo) continue;
      const std::size_t distance = column[n];
      const std::size_t normalizer = std::max(n, j);
      // Strict improvement keeps the earliest start and shortest window.
      if (!best || distance * best->normalizer < best->distance * normalizer) {
        best = FuzzyMatch{{start, start + j}, distance, normalizer};
      }
    }
  }
  return best;
}

namespace {

bool context_matches(std::u32string_view text, std::size_t start, std::size_t end,
                     std::u32string_view prefix, std::u32string_view suffix) {
  if (!prefix.empty()) {
    if (start < prefix.size() || text.substr(start - prefix.size(), prefix.size()) != prefix) {
      return false;
    }
  }
  if (!suffix.empty()) {
    if (end + suffix.size() > text.size() || text.substr(end, suffix.size()) != suffix) {
      return false;
    }
  }
  return true;
}

}  // namespace

AnchorResult anchor_text_quote(std::u32string_view text, const selector::TextQuote& sel,
                               double max_distance_ratio) {
  const std::u32string exact = text::decode_utf8(sel.exact);
  if (exact.empty()) throw Error(Errc::NotFound, "empty quote");

  std::vector<std::size_t> hits;
  for (auto pos = text.find(exact); pos != std::u32string_view::npos; pos = text.find(exact, pos + 1)) {
    hits.push_back(pos);
  }

  if (hits.size() == 1) {
    return {TextSpan{hits[0], hits[0] + exact.size()}, AnchorMethod::QuoteExact, 1.0};
  }
  if (hits.size() > 1) {
    const std::u32string prefix = text::decode_utf8(sel.prefix);
    const std::u32string suffix = text::decode_utf8(sel.suffix);
    std::vector<std::size_t> survivors;
    for (std::size_t h : hits) {
      if (context_matches(text, h, h + exact.size(), prefix, suffix)) survivors.push_back(h);
    }
    if (survivors.size() == 1) {
      return {TextSpan{survivors[0], survivors[0] + exact.size()}, AnchorMethod::QuoteExact, 1.0};
    }
    throw Error(Errc::Ambiguous, std::to_string(hits.size()) + " exact matches, " +
                                     std::to_string(survivors.size()) + " after context check");
  }

  const auto best = best_fuzzy_window(text, exact);
  if (!best || static_cast<double>(best->distance) >
                   max_distance_ratio * static_cast<double>(best->normalizer)) {
    throw Error(Errc::NotFound, "no window within normalized distance " +
                                    std::to_string(max_distance_ratio));
  }
  return {best->span, AnchorMethod::QuoteFuzzy, 1.0 - best->ratio()};
}

AnchorResult anchor_text_quote(std::string_view utf8_text, const selector::TextQuote& sel,
                               double max_distance_ratio) {
  return anchor_text_quote(std::u32string_view(text::decode_utf8(utf8_text)), sel,
                           max_distance_ratio);
}

namespace {

class Resolver {
public:
  Resolver(const DocumentSnapshot& snapshot, const ParsedDocument* parsed)
      : snapshot_(snapshot), parsed_(parsed) {}

  AnchorResult whole() {
    if (!is_textual_media_type(snapshot_.media_type)) {
      return {WholeResource{}, AnchorMethod::WholeResource, 1.0};
    }
    return {TextSpan{0, doc().text.size()}, AnchorMethod::WholeResource, 1.0};
  }

  AnchorResult resolve(const Selector& sel) {
    return std::visit([this](const auto& s) { return resolve_one(s); }, sel);
  }

private:
  const ParsedDocument& doc() {
    if (parsed_) return *parsed_;
    if (!owned_) owned_ = parse_document(snapshot_);
    return *owned_;
  }

  AnchorResult resolve_one(const selector::TextQuote& q) {
    return anchor_text_quote(std::u32string_view(doc().text.code_points), q, kDefaultFuzzyThreshold);
  }

  AnchorResult resolve_one(const selector::TextPosition& p) {
    const auto size = static_cast<std::int64_t>(doc().text.size());
    if (p.start < 0 || !(p.start < p.end) || p.end > size) {
      throw Error(Errc::NotFound, "position [" + std::to_string(p.start) + ", " +
                                      std::to_string(p.end) + ") outside text of length " +
                                      std::to_string(size));
    }
    return {TextSpan{static_cast<std::size_t>(p.start), static_cast<std::size_t>(p.end)},
            AnchorMethod::Position, 1.0};
  }

  AnchorResult resolve_one(const selector::Css& c) {
    if (!is_html_media_type(snapshot_.media_type)) {
      throw Error(Errc::UnsupportedMediaType, "css selector on " + snapshot_.media_type);
    }
    const auto chain = css::parse(c.value);
    const auto& d = doc();
    const auto hits = css::select(d, chain);
    if (hits.empty()) throw Error(Errc::NotFound, "no element matches '" + c.value + "'");
    if (hits.size() > 1) {
      throw Error(Errc::Ambiguous, std::to_string(hits.size()) + " elements match '" + c.value + "'");
    }
    const TextSpan span = d.elements[static_cast<std::size_t>(hits.front())].text;
    if (span.length() == 0) throw Error(Errc::NotFound, "element '" + c.value + "' has no text");
    return {span, AnchorMethod::Css, 1.0};
  }

  AnchorResult resolve_one(const selector::MediaFragment& m) {
    const auto value = parse_media_fragment(m.value);
    if (const auto* r = std::get_if<Region>(&value)) return {*r, AnchorMethod::Position, 1.0};
    return {std::get<TimeInterval>(value), AnchorMethod::Position, 1.0};
  }

  const DocumentSnapshot& snapshot_;
  const ParsedDocument* parsed_;
  std::optional<ParsedDocument> owned_;
};

AnchorResult anchor_impl(const Target& target, const DocumentSnapshot& snapshot,
                         const ParsedDocument* parsed) {
  if (text::normalize_iri(target.source) != text::normalize_iri(snapshot.source)) {
    throw Error(Errc::SourceMismatch, target.source + " vs snapshot of " + snapshot.source);
  }
  Resolver resolver(snapshot, parsed);
  if (target.selectors.empty()) return resolver.whole();

  std::vector<std::string> causes;
  for (const auto& sel : target.selectors) {
    try {
      return resolver.resolve(sel);
    } catch (const Error& e) {
      causes.push_back(std::string(selector_type_name(sel)) + ": " + e.what());
    }
  }
  throw Error(Errc::Orphaned, causes.front(), causes);
}

}  // namespace

AnchorResult anchor(const Target& target, const DocumentSnapshot& snapshot) {
  return anchor_impl(target, snapshot, nullptr);
}

AnchorResult anchor(const Target& target, const DocumentSnapshot& snapshot,
                    const ParsedDocument& parsed) {
  return anchor_impl(target, snapshot, &parsed);
}

}  // namespace renarrate
