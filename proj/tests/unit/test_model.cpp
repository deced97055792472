#include <doctest.h>

#include <algorithm>
#include <random>

#include "renarrate/error.hpp"
#include "renarrate/jsonld.hpp"
#include "renarrate/model.hpp"
#include "support.hpp"

using namespace renarrate;
using nlohmann::json;

namespace {

bool has_rule(const std::vector<Violation>& vs, std::string_view rule) {
  return std::any_of(vs.begin(), vs.end(), [&](const Violation& v) { return v.rule == rule; });
}

Errc parse_error(std::string_view doc) {
  try {
    jsonld::parse_annotation(doc);
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("document parsed");
  return Errc::IoError;
}

// Valid renarration exercising every field the model carries.
Renarration generate(testing::Rng& rng) {
  using testing::random_word;
  auto coin = [&](double p = 0.5) { return std::bernoulli_distribution(p)(rng); };
  auto uniform = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
  const std::vector<std::string> langs{"kn", "kn-IN", "hi", "en-GB", "zh-Hant-TW", "x-local"};
  auto lang = [&] { return langs[static_cast<std::size_t>(uniform(0, static_cast<int>(langs.size()) - 1))]; };
  auto word = [&] {
    // Mix in multi-byte text and characters JSON must escape.
    static const std::vector<std::string> extras{"ಕನ್ನಡ", "\"q\"", "a\\b", "tab\there", "line\nbreak", "हिन्दी"};
    return coin(0.7) ? random_word(rng) : extras[static_cast<std::size_t>(uniform(0, 5))];
  };

  Renarration r;
  if (coin()) r.id = "http://localhost:8080/renarrations/" + random_word(rng);
  if (coin()) {
    Agent a;
    if (coin()) a.id = "http://people.example.org/" + random_word(rng);
    if (!a.id || coin()) a.name = word();
    if (coin()) a.type = coin() ? "Person" : "Software";
    r.creator = a;
  }
  const auto base = Timestamp::parse("2020-01-01T00:00:00Z")->time_point();
  if (coin(0.8)) {
    r.created = Timestamp(base + std::chrono::microseconds(std::uniform_int_distribution<std::int64_t>(0, 1'000'000'000'000)(rng)));
    if (coin()) r.modified = r.created->plus(std::chrono::microseconds(uniform(0, 5'000'000)));
  }
  static const std::vector<std::string> motivations{"describing", "renarrating", "commenting", "x-retelling", "tagging"};
  if (coin(0.9)) r.motivation = Motivation::from_string(motivations[static_cast<std::size_t>(uniform(0, 4))]);
  if (r.is_renarrating()) r.transformation = static_cast<TransformationKind>(uniform(0, 3));
  if (coin()) {
    AudienceSpec a;
    for (int i = uniform(0, 3); i > 0; --i) a.languages.push_back(lang());
    if (coin()) a.medium = static_cast<Medium>(uniform(0, 3));
    if (coin()) a.literacy_level = uniform(1, 5);
    r.audience = a;
  }
  for (int i = uniform(1, 3); i > 0; --i) {
    if (coin()) {
      body::Textual t{word() + " " + word(), std::nullopt, std::nullopt};
      if (coin()) t.language = lang();
      if (coin()) t.format = "text/plain";
      r.bodies.push_back(t);
    } else {
      body::External e{"http://media.example.org/" + random_word(rng), std::nullopt, std::nullopt, std::nullopt};
      if (coin()) e.type = coin() ? "Sound" : "Video";
      if (coin()) e.format = coin() ? "audio/mpeg" : "video/mp4";
      if (coin()) e.language = lang();
      r.bodies.push_back(e);
    }
  }
  r.target.source = "http://mitan.in/" + random_word(rng);
  for (int i = uniform(0, 3); i > 0; --i) {
    switch (uniform(0, 3)) {
      case 0:
        r.target.selectors.push_back(selector::TextQuote{word(), coin() ? word() : "", coin() ? word() : ""});
        break;
      case 1: {
        const int s = uniform(0, 100);
        r.target.selectors.push_back(selector::TextPosition{s, s + uniform(1, 50)});
        break;
      }
      case 2:
        r.target.selectors.push_back(selector::Css{"p:nth-of-type(" + std::to_string(uniform(1, 9)) + ")"});
        break;
      default:
        r.target.selectors.push_back(selector::MediaFragment{
            std::string(kMediaFragmentsSpec), coin() ? "xywh=1,2,3,4" : "t=1.5,20"});
    }
  }
  if (coin(0.3)) r.extras["rights"] = "http://creativecommons.org/licenses/by/4.0/";
  if (coin(0.3)) r.extras["x:votes"] = json::array({1, 2, json::object({{"k", "v"}})});
  if (coin(0.2)) r.extra_contexts.push_back(json::object({{"schema", "http://schema.org/"}}));
  return r;
}

}  // namespace

TEST_SUITE("model") {
  TEST_CASE("wrestler fixture parses to the stated field values") {
    const auto r = jsonld::parse_annotation(testing::read_file(testing::fixture_path("wrestler.jsonld")));
    CHECK(r.target.source == testing::kWrestlerSource);
    REQUIRE(r.target.selectors.size() == 1);
    const auto& frag = std::get<selector::MediaFragment>(r.target.selectors[0]);
    CHECK(frag.value == "xywh=366,186,248,199");
    CHECK(frag.conforms_to == kMediaFragmentsSpec);
    REQUIRE(r.bodies.size() == 1);
    CHECK(std::get<body::Textual>(r.bodies[0]).value ==
          "Wrestlers displaying their talents in front of the king, as sculpted on the walls of "
          "Mahanavami dibba.");
    REQUIRE(r.motivation);
    CHECK(r.motivation->kind() == Motivation::Kind::Describing);
    CHECK(validate(r).empty());
  }

  TEST_CASE("wrestler fixture serializes to a value-equal, byte-stable document") {
    const auto r = jsonld::parse_annotation(testing::read_file(testing::fixture_path("wrestler.jsonld")));
    const auto text = jsonld::serialize_annotation(r);
    CHECK(jsonld::parse_annotation(text) == r);
    CHECK(jsonld::serialize_annotation(r) == text);
    CHECK(text.find("\"xywh=366,186,248,199\"") != std::string::npos);
  }

  TEST_CASE("minimal document has a whole-resource target") {
    const auto r = jsonld::parse_annotation(R"({"@context":"http://www.w3.org/ns/anno.jsonld",
      "type":"Annotation","body":{"type":"TextualBody","value":"x"},"target":{"source":"http://a.example/"}})");
    CHECK(r.target.selectors.empty());
    CHECK(r.target.source == "http://a.example/");
    CHECK(r.bodies.size() == 1);
    CHECK_FALSE(r.motivation.has_value());
    CHECK(validate(r).empty());
  }

  TEST_CASE("parse errors") {
    CHECK(parse_error(R"({"@context":"http://www.w3.org/ns/anno.jsonld","type":"Annotation","body":"http://b/"})") ==
          Errc::MissingTarget);
    CHECK(parse_error(R"({"type":"Annotation","target":"http://a/"})") == Errc::MissingContext);
    CHECK(parse_error(R"({"@context":"http://schema.org/","type":"Annotation","target":"http://a/"})") ==
          Errc::MissingContext);
    CHECK(parse_error("{not json") == Errc::MalformedDocument);
    CHECK(parse_error("") == Errc::MalformedDocument);
    CHECK(parse_error(R"({"@context":"http://www.w3.org/ns/anno.jsonld","type":"Note","target":"http://a/"})") ==
          Errc::MalformedDocument);
    CHECK(parse_error(R"({"@context":"http://www.w3.org/ns/anno.jsonld","type":"Annotation",
      "target":{"source":"http://a/","selector":{"type":"FragmentSelector","value":"xywh=366,186"}}})") ==
          Errc::InvalidSelector);
    CHECK(parse_error(R"({"@context":"http://www.w3.org/ns/anno.jsonld","type":"Annotation",
      "target":{"source":"http://a/","selector":{"type":"XPathSelector","value":"/p"}}})") ==
          Errc::InvalidSelector);
    CHECK(parse_error(R"({"@context":"http://www.w3.org/ns/anno.jsonld","type":"Annotation",
      "target":{"source":"http://a/","selector":{"type":"TextQuoteSelector"}}})") == Errc::InvalidSelector);
  }

  TEST_CASE("two bodies keep their order") {
    Renarration r = testing::make_renarration("http://mitan.in/bcp/raika", selector::TextQuote{"x", "", ""},
                                              "ಕನ್ನಡ ಪಠ್ಯ", "kn");
    r.bodies.push_back(body::External{"http://media.example.org/p3.mp3", std::string("Sound"),
                                      std::string("audio/mpeg"), std::string("kn")});
    const auto doc = json::parse(jsonld::serialize_annotation(r));
    REQUIRE(doc["body"].is_array());
    REQUIRE(doc["body"].size() == 2);
    CHECK(doc["body"][0]["type"] == "TextualBody");
    CHECK(doc["body"][1]["id"] == "http://media.example.org/p3.mp3");
    CHECK(jsonld::parse_annotation(doc.dump()) == r);
  }

  TEST_CASE("empty bodies is an invariant violation") {
    Renarration r;
    r.target.source = "http://a.example/";
    CHECK(has_rule(validate(r), "bodies non-empty"));
    try {
      jsonld::serialize_annotation(r);
      FAIL("serialized");
    } catch (const Error& e) {
      CHECK(e.code() == Errc::InvariantViolation);
      CHECK_FALSE(e.details().empty());
    }
  }

  TEST_CASE("validate examples") {
    Renarration r = testing::make_renarration("http://a.example/", selector::TextPosition{5, 5}, "x", "kn");
    const auto vs = validate(r);
    REQUIRE(vs.size() == 1);
    CHECK(vs[0].rule == "TextPosition.start < end");
    CHECK(vs[0].field == "target.selector");

    r.target.selectors = {selector::TextPosition{0, 5}};
    r.transformation.reset();
    const auto vs2 = validate(r);
    REQUIRE(vs2.size() == 1);
    CHECK(vs2[0].rule == "transformation required");

    r.transformation = TransformationKind::Translation;
    r.created = Timestamp::parse("2024-01-02T00:00:00Z");
    r.modified = Timestamp::parse("2024-01-01T00:00:00Z");
    CHECK(has_rule(validate(r), "created <= modified"));
    r.modified = r.created;
    CHECK(validate(r).empty());

    r.audience = AudienceSpec{{"kn_IN"}, std::nullopt, 7};
    const auto vs3 = validate(r);
    CHECK(vs3.size() == 2);
  }

  TEST_CASE("unknown motivation and extra members survive a round trip") {
    const std::string doc = R"({"@context":["http://www.w3.org/ns/anno.jsonld",{"dc":"http://purl.org/dc/terms/"}],
      "type":"Annotation","motivation":"x-retelling","rights":"http://creativecommons.org/licenses/by/4.0/",
      "body":"http://media.example.org/a.mp3","target":"http://a.example/page"})";
    const auto r = jsonld::parse_annotation(doc);
    REQUIRE(r.motivation);
    CHECK(r.motivation->is_extension());
    CHECK(r.motivation->str() == "x-retelling");
    CHECK(r.extras["rights"] == "http://creativecommons.org/licenses/by/4.0/");
    REQUIRE(r.extra_contexts.size() == 1);
    const auto text = jsonld::serialize_annotation(r);
    CHECK(jsonld::parse_annotation(text) == r);
    // Extras come after every known key.
    CHECK(text.find("\"rights\"") > text.find("\"target\""));
  }

  TEST_CASE("canonical key order") {
    Renarration r = testing::make_renarration("http://a.example/", selector::TextQuote{"x", "", ""}, "y", "kn");
    r.id = "http://localhost:8080/renarrations/1";
    r.creator = Agent{std::nullopt, std::string("Meera"), std::string("Person")};
    r.created = Timestamp::parse("2024-01-01T00:00:00Z");
    r.modified = Timestamp::parse("2024-01-02T00:00:00Z");
    r.audience = AudienceSpec{{"kn"}, Medium::Text, 2};
    const auto text = jsonld::serialize_annotation(r);
    const std::vector<std::string> keys{"\"@context\"", "\"id\"",         "\"type\"",     "\"creator\"",
                                        "\"created\"",  "\"modified\"",   "\"motivation\"", "\"transformation\"",
                                        "\"audience\"", "\"body\"",       "\"target\""};
    std::size_t last = 0;
    for (const auto& k : keys) {
      const auto at = text.find("\n  " + k);
      REQUIRE_MESSAGE(at != std::string::npos, k);
      CHECK_MESSAGE(at > last, k);
      last = at;
    }
    // The extension context is declared when extension members are used.
    const auto doc = json::parse(text);
    CHECK(doc["@context"][1] == json(jsonld::extension_context()));
  }

  TEST_CASE("property: parse(serialize(r)) == r and serialization is deterministic") {
    testing::Rng rng(20240501);
    for (int i = 0; i < 500; ++i) {
      const Renarration r = generate(rng);
      REQUIRE_MESSAGE(validate(r).empty(), i);
      const auto text = jsonld::serialize_annotation(r);
      const auto back = jsonld::parse_annotation(text);
      REQUIRE_MESSAGE(back == r, text);
      REQUIRE(jsonld::serialize_annotation(back) == text);
    }
  }

  TEST_CASE("property: generated documents with one defect are rejected with its code") {
    testing::Rng rng(77);
    for (int i = 0; i < 200; ++i) {
      auto doc = json::parse(jsonld::serialize_annotation(generate(rng)));
      switch (i % 3) {
        case 0:
          doc.erase("target");
          CHECK(parse_error(doc.dump()) == Errc::MissingTarget);
          break;
        case 1:
          doc.erase("@context");
          CHECK(parse_error(doc.dump()) == Errc::MissingContext);
          break;
        default:
          doc["target"]["selector"] = {{"type", "FragmentSelector"}, {"value", "xywh=1,2,0,4"}};
          CHECK(parse_error(doc.dump()) == Errc::InvalidSelector);
      }
    }
  }
}
