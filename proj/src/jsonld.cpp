#include "renarrate/jsonld.hpp"

#include "renarrate/error.hpp"
#include "renarrate/media_fragment.hpp"

namespace renarrate::jsonld {

using nlohmann::json;
using nlohmann::ordered_json;

const ordered_json& extension_context() {
  static const ordered_json ctx = {
      {"rn", "urn:x-renarration:vocab#"},
      {"transformation", "rn:transformation"},
      {"languages", "rn:languages"},
      {"medium", "rn:medium"},
      {"literacyLevel", "rn:literacyLevel"},
  };
  return ctx;
}

namespace {

[[noreturn]] void malformed(const std::string& what) {
  throw Error(Errc::MalformedDocument, what);
}

[[noreturn]] void bad_selector(const std::string& what) {
  throw Error(Errc::InvalidSelector, "target.selector: " + what);
}

std::string get_string(const json& obj, const char* key, const std::string& where) {
  const auto it = obj.find(key);
  if (it == obj.end() || !it->is_string()) malformed(where + "." + key + " must be a string");
  return it->get<std::string>();
}

std::optional<std::string> opt_string(const json& obj, const char* key, const std::string& where) {
  const auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return std::nullopt;
  if (!it->is_string()) malformed(where + "." + key + " must be a string");
  return it->get<std::string>();
}

Timestamp get_timestamp(const json& v, const char* key) {
  if (!v.is_string()) malformed(std::string(key) + " must be an RFC-3339 string");
  const auto ts = Timestamp::parse(v.get_ref<const std::string&>());
  if (!ts) malformed(std::string(key) + " is not an RFC-3339 timestamp");
  return *ts;
}

// Unwraps a single-element array; rejects longer arrays.
const json& single(const json& v, const char* key) {
  if (!v.is_array()) return v;
  if (v.size() != 1) malformed(std::string(key) + " must hold exactly one value");
  return v.front();
}

void parse_context(const json& doc, Renarration& r) {
  const auto it = doc.find("@context");
  if (it == doc.end()) throw Error(Errc::MissingContext, "no @context");
  if (it->is_string()) {
    if (*it != kAnnotationContext) throw Error(Errc::MissingContext, "@context is not the annotation context");
    return;
  }
  if (!it->is_array()) throw Error(Errc::MissingContext, "@context must be a string or array");
  bool found = false;
  for (const auto& entry : *it) {
    if (entry.is_string() && entry == kAnnotationContext) {
      found = true;
    } else if (entry.is_object() && entry == json(extension_context())) {
      continue;
    } else {
      r.extra_contexts.push_back(entry);
    }
  }
  if (!found) throw Error(Errc::MissingContext, "@context does not include the annotation context");
}

void check_type(const json& doc) {
  const auto it = doc.find("type");
  if (it == doc.end()) malformed("type must be Annotation");
  const json& t = single(*it, "type");
  if (t != "Annotation") malformed("type must be Annotation");
}

Agent parse_agent(const json& v) {
  const json& c = single(v, "creator");
  Agent a;
  if (c.is_string()) {
    a.id = c.get<std::string>();
  } else if (c.is_object()) {
    a.id = opt_string(c, "id", "creator");
    a.name = opt_string(c, "name", "creator");
    if (const auto t = c.find("type"); t != c.end()) {
      a.type = opt_string(c, "type", "creator");
    }
  } else {
    malformed("creator must be an IRI or an object");
  }
  return a;
}

AudienceSpec parse_audience(const json& v) {
  if (!v.is_object()) malformed("audience must be an object");
  AudienceSpec a;
  if (const auto it = v.find("languages"); it != v.end()) {
    if (it->is_string()) {
      a.languages.push_back(it->get<std::string>());
    } else if (it->is_array()) {
      for (const auto& tag : *it) {
        if (!tag.is_string()) malformed("audience.languages entries must be strings");
        a.languages.push_back(tag.get<std::string>());
      }
    } else {
      malformed("audience.languages must be a list of tags");
    }
  }
  if (const auto m = opt_string(v, "medium", "audience")) {
    a.medium = medium_from_string(*m);
    if (!a.medium) malformed("audience.medium must be text, audio, video or image");
  }
  if (const auto it = v.find("literacyLevel"); it != v.end()) {
    if (!it->is_number_integer()) malformed("audience.literacyLevel must be an integer");
    a.literacy_level = it->get<int>();
  }
  return a;
}

Body parse_body(const json& v) {
  if (v.is_string()) return body::External{v.get<std::string>(), {}, {}, {}};
  if (!v.is_object()) malformed("body entries must be objects or IRIs");
  const auto type = opt_string(v, "type", "body");
  const bool textual = (type && *type == "TextualBody") || (!v.contains("id") && v.contains("value"));
  if (textual) {
    body::Textual t;
    t.value = get_string(v, "value", "body");
    t.language = opt_string(v, "language", "body");
    t.format = opt_string(v, "format", "body");
    return t;
  }
  if (!v.contains("id")) malformed("body needs a value or an id");
  body::External e;
  e.id = get_string(v, "id", "body");
  e.type = type;
  e.format = opt_string(v, "format", "body");
  e.language = opt_string(v, "language", "body");
  return e;
}

std::string selector_string(const json& v, const char* key, bool required) {
  const auto it = v.find(key);
  if (it == v.end()) {
    if (required) bad_selector(std::string("selector.") + key + " is required");
    return {};
  }
  if (!it->is_string()) bad_selector(std::string("selector.") + key + " must be a string");
  return it->get<std::string>();
}

std::int64_t selector_offset(const json& v, const char* key) {
  const auto it = v.find(key);
  if (it == v.end() || !it->is_number_integer()) {
    bad_selector(std::string("TextPositionSelector.") + key + " must be an integer");
  }
  const auto n = it->get<std::int64_t>();
  if (n < 0) bad_selector(std::string("TextPositionSelector.") + key + " must be non-negative");
  return n;
}

Selector parse_selector(const json& v) {
  if (!v.is_object()) bad_selector("selector must be an object");
  const auto type = v.find("type");
  if (type == v.end() || !type->is_string()) bad_selector("selector.type is required");
  const auto& t = type->get_ref<const std::string&>();
  if (t == "TextQuoteSelector") {
    return selector::TextQuote{selector_string(v, "exact", true), selector_string(v, "prefix", false),
                               selector_string(v, "suffix", false)};
  }
  if (t == "TextPositionSelector") {
    return selector::TextPosition{selector_offset(v, "start"), selector_offset(v, "end")};
  }
  if (t == "CssSelector") return selector::Css{selector_string(v, "value", true)};
  if (t == "FragmentSelector") {
    selector::MediaFragment m;
    if (v.contains("conformsTo")) m.conforms_to = selector_string(v, "conformsTo", true);
    m.value = selector_string(v, "value", true);
    try {
      parse_media_fragment(m.value);
    } catch (const Error& e) {
      bad_selector(e.what());
    }
    return m;
  }
  bad_selector("unsupported selector type " + t);
}

Target parse_target(const json& doc) {
  const auto it = doc.find("target");
  if (it == doc.end() || it->is_null()) throw Error(Errc::MissingTarget, "no target");
  if (it->is_array() && it->empty()) throw Error(Errc::MissingTarget, "empty target");
  const json& v = single(*it, "target");
  Target t;
  if (v.is_string()) {
    t.source = v.get<std::string>();
    return t;
  }
  if (!v.is_object()) malformed("target must be an IRI or an object");
  if (v.contains("source")) {
    t.source = get_string(v, "source", "target");
  } else if (v.contains("id")) {
    t.source = get_string(v, "id", "target");
  } else {
    throw Error(Errc::MissingTarget, "target has no source");
  }
  if (const auto sel = v.find("selector"); sel != v.end()) {
    if (sel->is_array()) {
      for (const auto& s : *sel) t.selectors.push_back(parse_selector(s));
    } else {
      t.selectors.push_back(parse_selector(*sel));
    }
  }
  return t;
}

bool is_known_key(const std::string& key) {
  static const char* kKnown[] = {"@context", "id",   "type",       "creator",
                                 "created",  "modified", "motivation", "transformation",
                                 "audience", "body", "bodyValue",  "target"};
  for (const char* k : kKnown) {
    if (key == k) return true;
  }
  return false;
}

ordered_json selector_json(const Selector& s) {
  ordered_json out;
  out["type"] = selector_type_name(s);
  std::visit(
      [&out](const auto& v) {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, selector::TextQuote>) {
          out["exact"] = v.exact;
          if (!v.prefix.empty()) out["prefix"] = v.prefix;
          if (!v.suffix.empty()) out["suffix"] = v.suffix;
        } else if constexpr (std::is_same_v<T, selector::TextPosition>) {
          out["start"] = v.start;
          out["end"] = v.end;
        } else if constexpr (std::is_same_v<T, selector::Css>) {
          out["value"] = v.value;
        } else {
          out["conformsTo"] = v.conforms_to;
          out["value"] = v.value;
        }
      },
      s);
  return out;
}

ordered_json body_json(const Body& b) {
  ordered_json out;
  if (const auto* t = std::get_if<body::Textual>(&b)) {
    out["type"] = "TextualBody";
    out["value"] = t->value;
    if (t->language) out["language"] = *t->language;
    if (t->format) out["format"] = *t->format;
  } else {
    const auto& e = std::get<body::External>(b);
    out["id"] = e.id;
    if (e.type) out["type"] = *e.type;
    if (e.format) out["format"] = *e.format;
    if (e.language) out["language"] = *e.language;
  }
  return out;
}

}  // namespace

Renarration from_json(const json& doc) {
  if (!doc.is_object()) malformed("annotation must be a JSON object");
  Renarration r;
  parse_context(doc, r);
  check_type(doc);
  r.target = parse_target(doc);

  r.id = opt_string(doc, "id", "annotation");
  if (const auto it = doc.find("creator"); it != doc.end()) r.creator = parse_agent(*it);
  if (const auto it = doc.find("created"); it != doc.end()) r.created = get_timestamp(*it, "created");
  if (const auto it = doc.find("modified"); it != doc.end()) r.modified = get_timestamp(*it, "modified");
  if (const auto it = doc.find("motivation"); it != doc.end()) {
    const json& m = single(*it, "motivation");
    if (!m.is_string()) malformed("motivation must be a string");
    r.motivation = Motivation::from_string(m.get_ref<const std::string&>());
  }
  if (const auto it = doc.find("transformation"); it != doc.end()) {
    if (!it->is_string()) malformed("transformation must be a string");
    r.transformation = transformation_from_string(it->get_ref<const std::string&>());
    if (!r.transformation) malformed("unknown transformation " + it->get<std::string>());
  }
  if (const auto it = doc.find("audience"); it != doc.end()) r.audience = parse_audience(*it);

  if (const auto it = doc.find("body"); it != doc.end()) {
    if (it->is_array()) {
      for (const auto& b : *it) r.bodies.push_back(parse_body(b));
    } else {
      r.bodies.push_back(parse_body(*it));
    }
  }
  if (const auto it = doc.find("bodyValue"); it != doc.end()) {
    if (!it->is_string()) malformed("bodyValue must be a string");
    r.bodies.push_back(body::Textual{it->get<std::string>(), {}, {}});
  }

  for (const auto& [key, value] : doc.items()) {
    if (!is_known_key(key)) r.extras[key] = value;
  }
  return r;
}

Renarration parse_annotation(std::string_view doc) {
  json parsed;
  try {
    parsed = json::parse(doc.begin(), doc.end());
  } catch (const json::parse_error& e) {
    malformed(e.what());
  }
  return from_json(parsed);
}

ordered_json to_json(const Renarration& r) {
  ordered_json out;
  const bool needs_extension = r.transformation.has_value() || r.audience.has_value();
  if (!needs_extension && r.extra_contexts.empty()) {
    out["@context"] = kAnnotationContext;
  } else {
    ordered_json ctx = ordered_json::array({kAnnotationContext});
    if (needs_extension) ctx.push_back(extension_context());
    for (const auto& c : r.extra_contexts) ctx.push_back(ordered_json(c));
    out["@context"] = std::move(ctx);
  }
  if (r.id) out["id"] = *r.id;
  out["type"] = "Annotation";
  if (r.creator) {
    ordered_json c = ordered_json::object();
    if (r.creator->id) c["id"] = *r.creator->id;
    if (r.creator->type) c["type"] = *r.creator->type;
    if (r.creator->name) c["name"] = *r.creator->name;
    out["creator"] = std::move(c);
  }
  if (r.created) out["created"] = r.created->to_string();
  if (r.modified) out["modified"] = r.modified->to_string();
  if (r.motivation) out["motivation"] = r.motivation->str();
  if (r.transformation) out["transformation"] = to_string(*r.transformation);
  if (r.audience) {
    ordered_json a = ordered_json::object();
    a["languages"] = r.audience->languages;
    if (r.audience->medium) a["medium"] = to_string(*r.audience->medium);
    if (r.audience->literacy_level) a["literacyLevel"] = *r.audience->literacy_level;
    out["audience"] = std::move(a);
  }
  if (r.bodies.size() == 1) {
    out["body"] = body_json(r.bodies.front());
  } else {
    ordered_json bodies = ordered_json::array();
    for (const auto& b : r.bodies) bodies.push_back(body_json(b));
    out["body"] = std::move(bodies);
  }
  ordered_json target;
  target["source"] = r.target.source;
  if (r.target.selectors.size() == 1) {
    target["selector"] = selector_json(r.target.selectors.front());
  } else if (!r.target.selectors.empty()) {
    ordered_json sels = ordered_json::array();
    for (const auto& s : r.target.selectors) sels.push_back(selector_json(s));
    target["selector"] = std::move(sels);
  }
  out["target"] = std::move(target);
  for (const auto& [key, value] : r.extras.items()) {
    if (!is_known_key(key)) out[key] = ordered_json(value);
  }
  return out;
}

std::string serialize_annotation(const Renarration& r) {
  auto violations = validate(r);
  for (const auto& [key, value] : r.extras.items()) {
    if (is_known_key(key)) violations.push_back({"extras." + key, "must not shadow a known member"});
  }
  if (!violations.empty()) {
    std::vector<std::string> details;
    for (const auto& v : violations) details.push_back(v.to_string());
    std::string summary = details.front();
    if (details.size() > 1) summary += " (+" + std::to_string(details.size() - 1) + " more)";
    throw Error(Errc::InvariantViolation, summary, std::move(details));
  }
  return to_json(r).dump(2);
}

}  // namespace renarrate::jsonld
