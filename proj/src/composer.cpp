#include "renarrate/composer.hpp"

#include <algorithm>
#include <map>

#include "renarrate/error.hpp"
#include "renarrate/text_util.hpp"

namespace renarrate {

namespace {

bool has_language(const Renarration& r, const std::string& primary) {
  for (const auto& b : r.bodies) {
    const auto& lang = body_language(b);
    if (lang && text::primary_subtag(*lang) == primary) return true;
  }
  if (r.audience) {
    for (const auto& lang : r.audience->languages) {
      if (text::primary_subtag(lang) == primary) return true;
    }
  }
  return false;
}

}  // namespace

ScoreBreakdown score_breakdown(const Renarration& r, const AudienceProfile& profile,
                               const ScoreWeights& weights) {
  if (!r.is_renarrating()) {
    throw Error(Errc::WrongMotivation,
                "motivation is " + (r.motivation ? r.motivation->str() : std::string("absent")));
  }
  ScoreBreakdown s;
  const auto count = static_cast<std::int64_t>(profile.languages.size());
  for (std::int64_t i = 0; i < count; ++i) {
    if (has_language(r, text::primary_subtag(profile.languages[static_cast<std::size_t>(i)]))) {
      s.language = count - i;
      break;
    }
  }
  if (!profile.medium) {
    s.medium = 1;
  } else if (!r.bodies.empty() && body_medium(r.bodies.front()) == profile.medium) {
    s.medium = 1;
  }
  const std::optional<int> level = r.audience ? r.audience->literacy_level : std::nullopt;
  if (!level || !profile.literacy_level || std::abs(*level - *profile.literacy_level) <= 1) {
    s.level = 1;
  }
  s.total = weights.language * s.language + weights.medium * s.medium + weights.level * s.level;
  return s;
}

std::int64_t score_candidate(const Renarration& r, const AudienceProfile& profile,
                             const ScoreWeights& weights) {
  return score_breakdown(r, profile, weights).total;
}

std::optional<std::size_t> select_best_index(std::span<const Renarration> candidates,
                                             const AudienceProfile& profile,
                                             const ScoreWeights& weights) {
  std::optional<std::size_t> best;
  ScoreBreakdown best_score;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    const ScoreBreakdown s = score_breakdown(candidates[i], profile, weights);
    bool better = !best || s.total > best_score.total;
    if (best && s.total == best_score.total) {
      const auto& a = candidates[i];
      const auto& b = candidates[*best];
      // Absent timestamps sort as oldest, absent ids as smallest.
      if (a.created != b.created) {
        better = a.created > b.created;
      } else {
        better = a.id.value_or("") < b.id.value_or("");
      }
    }
    if (better) {
      best = i;
      best_score = s;
    }
  }
  if (!best || best_score.language == 0) return std::nullopt;
  return best;
}

std::optional<Renarration> select_best(std::span<const Renarration> candidates,
                                       const AudienceProfile& profile, const ScoreWeights& weights) {
  const auto index = select_best_index(candidates, profile, weights);
  if (!index) return std::nullopt;
  return candidates[*index];
}

std::optional<std::string> TaggingFallback::transform(const FallbackInput& input) const {
  const std::string lang = input.profile.languages.empty() ? std::string() : input.profile.languages.front();
  if (input.html) {
    return "<span class=\"needs-translation\" data-target-lang=\"" + text::html_escape(lang) + "\">" +
           std::string(input.raw) + "</span>";
  }
  return "[needs-translation:" + lang + "]" + std::string(input.raw) + "[/needs-translation]";
}

std::unique_ptr<FallbackTransformer> make_fallback(std::string_view name) {
  if (name == "identity") return std::make_unique<IdentityFallback>();
  if (name == "tagging") return std::make_unique<TaggingFallback>();
  throw Error(Errc::InvalidConfig, "unknown fallback '" + std::string(name) + "'");
}

namespace {

// First body in the most preferred profile language; otherwise the first body.
const Body& choose_body(const Renarration& r, const AudienceProfile& profile) {
  for (const auto& lang : profile.languages) {
    const std::string primary = text::primary_subtag(lang);
    for (const auto& b : r.bodies) {
      const auto& bl = body_language(b);
      if (bl && text::primary_subtag(*bl) == primary) return b;
    }
  }
  return r.bodies.front();
}

std::string render_body(const Body& b, const std::string& annotation_id, bool html) {
  if (const auto* t = std::get_if<body::Textual>(&b)) {
    if (!html) return t->value;
    std::string out = "<span";
    if (t->language) out += " lang=\"" + text::html_escape(*t->language) + "\"";
    out += " data-renarration=\"" + text::html_escape(annotation_id) + "\">";
    // Contributed markup is never trusted.
    out += text::html_escape(t->value);
    out += "</span>";
    return out;
  }
  const auto& e = std::get<body::External>(b);
  if (!html) return "<" + e.id + ">";
  const std::string iri = text::html_escape(e.id);
  const std::string tag_id = " data-renarration=\"" + text::html_escape(annotation_id) + "\"";
  if (body_medium(b) == Medium::Image) return "<img src=\"" + iri + "\" alt=\"\"" + tag_id + ">";
  std::string out = "<a href=\"" + iri + "\"";
  if (e.language) out += " hreflang=\"" + text::html_escape(*e.language) + "\"";
  return out + tag_id + ">" + iri + "</a>";
}

struct Group {
  TextSpan span;
  AnchorResult anchor;
  std::vector<std::size_t> members;  // indices into the renarration list
  std::size_t best = 0;
  std::int64_t score = 0;
};

bool overlaps(TextSpan a, TextSpan b) { return a.start < b.end && b.start < a.end; }

}  // namespace

Rendition compose(const DocumentSnapshot& snapshot, std::span<const Renarration> renarrations,
                  const AudienceProfile& profile, const FallbackTransformer& fallback,
                  const ComposeOptions& options) {
  if (profile.languages.empty()) throw Error(Errc::EmptyProfile, "profile lists no languages");
  const ParsedDocument doc = parse_document(snapshot);
  const std::string source = text::normalize_iri(snapshot.source);

  Rendition out;
  out.source = snapshot.source;
  out.snapshot_id = snapshot.id;
  out.media_type = snapshot.media_type;
  out.profile = profile;
  out.composed_at = options.composed_at.value_or(Timestamp::now());

  // (1) anchor every renarration, grouping identical spans.
  std::map<TextSpan, Group> groups;
  for (std::size_t i = 0; i < renarrations.size(); ++i) {
    const Renarration& r = renarrations[i];
    if (text::normalize_iri(r.target.source) != source) {
      throw Error(Errc::SourceMismatch, r.target.source + " is not " + snapshot.source);
    }
    if (!r.is_renarrating() || r.bodies.empty()) {
      ++out.ineligible;
      continue;
    }
    AnchorResult anchored;
    try {
      anchored = anchor(r.target, snapshot, doc);
    } catch (const Error& e) {
      if (e.code() != Errc::Orphaned) throw;
      out.orphaned.push_back(r.id.value_or(""));
      continue;
    }
    const TextSpan* span = anchored.span();
    if (!span || span->length() == 0) {
      ++out.ineligible;
      continue;
    }
    auto [it, inserted] = groups.try_emplace(*span);
    if (inserted) {
      it->second.span = *span;
      it->second.anchor = anchored;
    }
    it->second.members.push_back(i);
  }

  // (2) best candidate per span; greedy by score, dropping overlaps.
  std::vector<Group> ranked;
  for (auto& [span, group] : groups) {
    std::vector<Renarration> members;
    for (std::size_t m : group.members) members.push_back(renarrations[m]);
    const auto best = select_best_index(members, profile, options.weights);
    if (!best) continue;
    group.best = group.members[*best];
    group.score = score_candidate(renarrations[group.best], profile, options.weights);
    ranked.push_back(std::move(group));
  }
  std::stable_sort(ranked.begin(), ranked.end(),
                   [](const Group& a, const Group& b) { return a.score > b.score; });
  std::vector<Group> accepted;
  for (auto& g : ranked) {
    const bool clash = std::any_of(accepted.begin(), accepted.end(),
                                   [&](const Group& a) { return overlaps(a.span, g.span); });
    if (clash) {
      out.dropped_overlap += g.members.size();
    } else {
      accepted.push_back(std::move(g));
    }
  }
  std::sort(accepted.begin(), accepted.end(),
            [](const Group& a, const Group& b) { return a.span < b.span; });

  // (3) substitutions for accepted fragments.
  const bool html = doc.html;
  for (const auto& g : accepted) {
    const Renarration& r = renarrations[g.best];
    const Body& body = choose_body(r, profile);
    Substitution s;
    s.span = g.span;
    s.bytes = doc.text.bytes_for(g.span);
    s.anchor = g.anchor;
    s.chosen = r.id.value_or("");
    s.score = g.score;
    s.body_used = body;
    s.replacement = render_body(body, s.chosen, html);
    out.substitutions.push_back(std::move(s));
  }

  // (4) uncovered stretches of each paragraph go through the fallback.
  std::vector<Substitution> fallbacks;
  const auto& cps = doc.text.code_points;
  for (const TextSpan& paragraph : doc.paragraphs) {
    std::size_t cursor = paragraph.start;
    const auto emit_piece = [&](std::size_t start, std::size_t end) {
      while (start < end && cps[start] == U' ') ++start;
      while (end > start && cps[end - 1] == U' ') --end;
      if (start == end) return;
      const TextSpan piece{start, end};
      const ByteRange bytes = doc.text.bytes_for(piece);
      const std::string visible = doc.text.slice(piece);
      const std::string_view raw =
          std::string_view(snapshot.content).substr(bytes.begin, bytes.end - bytes.begin);
      auto replacement = fallback.transform(FallbackInput{visible, raw, html, profile});
      if (!replacement || *replacement == raw) return;
      Substitution s;
      s.span = piece;
      s.bytes = bytes;
      s.chosen = std::string(kFallbackChoice);
      s.body_used = *replacement;
      s.replacement = std::move(*replacement);
      fallbacks.push_back(std::move(s));
    };
    for (const auto& sub : out.substitutions) {
      if (!overlaps(sub.span, paragraph)) continue;
      if (sub.span.start > cursor) emit_piece(cursor, sub.span.start);
      cursor = std::max(cursor, sub.span.end);
    }
    if (cursor < paragraph.end) emit_piece(cursor, paragraph.end);
  }
  for (auto& f : fallbacks) out.substitutions.push_back(std::move(f));
  std::sort(out.substitutions.begin(), out.substitutions.end(),
            [](const Substitution& a, const Substitution& b) { return a.span < b.span; });

  // (5) splice replacements into the original bytes.
  std::size_t copied = 0;
  for (const auto& s : out.substitutions) {
    out.output.append(snapshot.content, copied, s.bytes.begin - copied);
    out.output += s.replacement;
    copied = s.bytes.end;
  }
  out.output.append(snapshot.content, copied, std::string::npos);
  return out;
}

}  // namespace renarrate
