#include "renarrate/model.hpp"

#include <array>

#include "renarrate/error.hpp"
#include "renarrate/media_fragment.hpp"
#include "renarrate/text_util.hpp"

namespace renarrate {

namespace {

constexpr std::array<std::pair<Motivation::Kind, std::string_view>, 6> kMotivations{{
    {Motivation::Kind::Describing, "describing"},
    {Motivation::Kind::Editing, "editing"},
    {Motivation::Kind::Replying, "replying"},
    {Motivation::Kind::Tagging, "tagging"},
    {Motivation::Kind::Bookmarking, "bookmarking"},
    {Motivation::Kind::Renarrating, "renarrating"},
}};

constexpr std::array<std::pair<TransformationKind, std::string_view>, 4> kTransformations{{
    {TransformationKind::Simplification, "simplification"},
    {TransformationKind::Elaboration, "elaboration"},
    {TransformationKind::Translation, "translation"},
    {TransformationKind::MediaSubstitution, "media-substitution"},
}};

constexpr std::array<std::pair<Medium, std::string_view>, 4> kMedia{{
    {Medium::Text, "text"},
    {Medium::Audio, "audio"},
    {Medium::Video, "video"},
    {Medium::Image, "image"},
}};

}  // namespace

Motivation::Motivation(Kind kind) : kind_(kind) {
  for (const auto& [k, name] : kMotivations) {
    if (k == kind) raw_ = std::string(name);
  }
  if (kind == Kind::Other) raw_.clear();
}

Motivation Motivation::from_string(std::string_view raw) {
  Motivation m;
  m.kind_ = Kind::Other;
  m.raw_ = std::string(raw);
  for (const auto& [k, name] : kMotivations) {
    if (name == raw) m.kind_ = k;
  }
  return m;
}

std::string_view selector_type_name(const Selector& s) noexcept {
  switch (s.index()) {
    case 0: return "TextQuoteSelector";
    case 1: return "TextPositionSelector";
    case 2: return "CssSelector";
    default: return "FragmentSelector";
  }
}

std::string_view to_string(Medium m) noexcept {
  for (const auto& [k, name] : kMedia) {
    if (k == m) return name;
  }
  return "text";
}

std::optional<Medium> medium_from_string(std::string_view s) noexcept {
  for (const auto& [k, name] : kMedia) {
    if (name == s) return k;
  }
  return std::nullopt;
}

std::string_view to_string(TransformationKind k) noexcept {
  for (const auto& [kind, name] : kTransformations) {
    if (kind == k) return name;
  }
  return "translation";
}

std::optional<TransformationKind> transformation_from_string(std::string_view s) noexcept {
  for (const auto& [kind, name] : kTransformations) {
    if (name == s) return kind;
  }
  return std::nullopt;
}

const std::optional<std::string>& body_language(const Body& b) noexcept {
  return std::visit([](const auto& v) -> const std::optional<std::string>& { return v.language; }, b);
}

std::optional<Medium> body_medium(const Body& b) noexcept {
  if (std::holds_alternative<body::Textual>(b)) return Medium::Text;
  const auto& ext = std::get<body::External>(b);
  if (ext.format) {
    const std::string_view f = *ext.format;
    if (f.rfind("audio/", 0) == 0) return Medium::Audio;
    if (f.rfind("video/", 0) == 0) return Medium::Video;
    if (f.rfind("image/", 0) == 0) return Medium::Image;
    if (f.rfind("text/", 0) == 0) return Medium::Text;
  }
  if (ext.type) {
    const std::string_view t = *ext.type;
    if (t == "Sound" || t == "Audio") return Medium::Audio;
    if (t == "Video") return Medium::Video;
    if (t == "Image") return Medium::Image;
    if (t == "Text" || t == "TextualBody") return Medium::Text;
  }
  return std::nullopt;
}

namespace {

void check_language(std::vector<Violation>& out, const std::string& field,
                    const std::optional<std::string>& tag) {
  if (tag && !text::is_well_formed_language_tag(*tag)) {
    out.push_back({field, "well-formed BCP-47 tag"});
  }
}

void check_selector(std::vector<Violation>& out, const std::string& field, const Selector& s) {
  if (const auto* q = std::get_if<selector::TextQuote>(&s)) {
    if (q->exact.empty()) out.push_back({field, "TextQuote.exact non-empty"});
  } else if (const auto* p = std::get_if<selector::TextPosition>(&s)) {
    if (p->start < 0) out.push_back({field, "TextPosition.start >= 0"});
    if (!(p->start < p->end)) out.push_back({field, "TextPosition.start < end"});
  } else if (const auto* c = std::get_if<selector::Css>(&s)) {
    if (c->value.empty()) out.push_back({field, "Css.value non-empty"});
  } else {
    const auto& m = std::get<selector::MediaFragment>(s);
    try {
      parse_media_fragment(m.value);
    } catch (const Error& e) {
      out.push_back({field, "MediaFragment.value parses (" + std::string(e.what()) + ")"});
    }
  }
}

}  // namespace

std::vector<Violation> validate(const Renarration& r) {
  std::vector<Violation> out;
  if (r.id && !text::is_absolute_iri(*r.id)) out.push_back({"id", "absolute IRI"});

  if (r.creator) {
    if (!r.creator->id && !r.creator->name) {
      out.push_back({"creator", "at least one of id, name"});
    }
    if (r.creator->id && !text::is_absolute_iri(*r.creator->id)) {
      out.push_back({"creator.id", "absolute IRI"});
    }
  }

  if (r.created && r.modified && *r.modified < *r.created) {
    out.push_back({"modified", "created <= modified"});
  }

  if (r.is_renarrating()) {
    if (!r.transformation) out.push_back({"transformation", "transformation required"});
  } else if (r.transformation) {
    out.push_back({"transformation", "only allowed when motivation is renarrating"});
  }

  if (r.audience) {
    for (std::size_t i = 0; i < r.audience->languages.size(); ++i) {
      check_language(out, "audience.languages[" + std::to_string(i) + "]",
                     r.audience->languages[i]);
    }
    if (r.audience->literacy_level &&
        (*r.audience->literacy_level < 1 || *r.audience->literacy_level > 5)) {
      out.push_back({"audience.literacyLevel", "integer in 1..5"});
    }
  }

  if (r.bodies.empty()) out.push_back({"body", "bodies non-empty"});
  for (std::size_t i = 0; i < r.bodies.size(); ++i) {
    const std::string field = "body[" + std::to_string(i) + "]";
    if (const auto* t = std::get_if<body::Textual>(&r.bodies[i])) {
      if (t->value.empty()) out.push_back({field + ".value", "Textual.value non-empty"});
      check_language(out, field + ".language", t->language);
    } else {
      const auto& e = std::get<body::External>(r.bodies[i]);
      if (!text::is_absolute_iri(e.id)) out.push_back({field + ".id", "absolute IRI"});
      check_language(out, field + ".language", e.language);
    }
  }

  if (!text::is_absolute_iri(r.target.source)) {
    out.push_back({"target.source", "absolute IRI"});
  }
  for (std::size_t i = 0; i < r.target.selectors.size(); ++i) {
    const std::string field = r.target.selectors.size() == 1
                                  ? std::string("target.selector")
                                  : "target.selector[" + std::to_string(i) + "]";
    check_selector(out, field, r.target.selectors[i]);
  }
  return out;
}

}  // namespace renarrate
