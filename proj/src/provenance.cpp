#include "renarrate/provenance.hpp"

namespace renarrate {

using nlohmann::ordered_json;

ordered_json provenance_report(const Rendition& rendition) {
  ordered_json report;
  report["source"] = rendition.source;
  report["snapshot"] = rendition.snapshot_id;
  report["composedAt"] = rendition.composed_at.to_string();

  ordered_json profile;
  profile["languages"] = rendition.profile.languages;
  profile["medium"] = rendition.profile.medium ? ordered_json(to_string(*rendition.profile.medium)) : ordered_json();
  profile["literacyLevel"] =
      rendition.profile.literacy_level ? ordered_json(*rendition.profile.literacy_level) : ordered_json();
  report["profile"] = std::move(profile);

  ordered_json entries = ordered_json::array();
  for (const auto& s : rendition.substitutions) {
    ordered_json e;
    e["start"] = s.span.start;
    e["end"] = s.span.end;
    e["byteStart"] = s.bytes.begin;
    e["byteEnd"] = s.bytes.end;
    e["chosen"] = s.chosen;
    e["score"] = s.score;
    if (s.anchor) {
      e["method"] = to_string(s.anchor->method);
      e["confidence"] = s.anchor->confidence;
    } else {
      e["method"] = "fallback";
      e["confidence"] = nullptr;
    }
    if (const auto* body = std::get_if<Body>(&s.body_used)) {
      const auto& lang = body_language(*body);
      e["language"] = lang ? ordered_json(*lang) : ordered_json();
      e["body"] = std::holds_alternative<body::Textual>(*body) ? "TextualBody" : std::get<body::External>(*body).id;
    } else {
      e["language"] = nullptr;
      e["body"] = "fallback-output";
    }
    entries.push_back(std::move(e));
  }
  report["substitutions"] = std::move(entries);
  report["orphaned"] = rendition.orphaned.size();
  report["orphanedIds"] = rendition.orphaned;
  report["droppedOverlap"] = rendition.dropped_overlap;
  report["ineligible"] = rendition.ineligible;
  return report;
}

}  // namespace renarrate
