#include "support.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "renarrate/text_util.hpp"
#include "renarrate/timestamp.hpp"

namespace fs = std::filesystem;

namespace testing {

TempDir::TempDir() {
  path_ = fs::temp_directory_path() / ("renarrate-test-" + renarrate::text::random_hex_id());
  fs::create_directories(path_);
}

TempDir::~TempDir() {
  std::error_code ec;
  fs::remove_all(path_, ec);
}

fs::path fixture_path(std::string_view relative) {
  return fs::path(RENARRATE_FIXTURE_DIR) / relative;
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const fs::path& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw std::runtime_error("cannot write " + path.string());
}

renarrate::DocumentSnapshot bcp_snapshot() {
  return html_snapshot(std::string(kBcpSource), read_file(fixture_path("bcp/raika.html")));
}

std::vector<std::string> bcp_annotation_files() {
  return {"bcp/kn-p1.jsonld", "bcp/kn-p3.jsonld", "bcp/kn-p7.jsonld", "bcp/hi-p5.jsonld",
          "bcp/en-simple-p3.jsonld"};
}

std::vector<std::string> bcp_paragraphs() {
  return {
      "The Raika are a pastoral community of western Rajasthan whose lives have long been "
      "organised around the camel.",
      "For generations they have moved their herds across the Thar desert, following seasonal "
      "grazing routes that link villages, wells and common lands.",
      "This biocultural protocol records how the Raika understand their duties towards their "
      "animals, the land and the plants that sustain both.",
      "Camels are not treated as mere property; each animal is known by name and lineage, and "
      "breeding decisions are taken together by the elders.",
      "Grazing on the orans, the sacred groves attached to temples, is governed by customary "
      "rules that forbid cutting trees or taking more than the land can regrow.",
      "Knowledge of medicinal plants used to treat sick animals is passed on orally, from one "
      "herder to the next, and is rarely written down.",
      "The community asks that any new forest or grazing law be discussed with them before it "
      "is enacted, so that their traditional access to pastures is not lost.",
      "The protocol was prepared with the help of lawyers & community workers who recorded the "
      "testimony of herders in several villages.",
      "It is written in English so that officials in Delhi can read it, although most Raika "
      "herders do not read English.",
      "Renarrations of this document in local languages, ideally as audio, would let the "
      "community itself hear what has been written on its behalf.",
  };
}

std::string random_word(Rng& rng) {
  std::uniform_int_distribution<int> len(2, 9);
  std::uniform_int_distribution<int> letter('a', 'z');
  std::string w(static_cast<std::size_t>(len(rng)), 'a');
  for (auto& c : w) c = static_cast<char>(letter(rng));
  return w;
}

std::string random_sentence(Rng& rng, std::size_t count) {
  std::string out;
  for (std::size_t i = 0; i < count; ++i) {
    if (i) out += ' ';
    out += random_word(rng);
  }
  return out;
}

std::string html_page(const std::vector<std::string>& paragraphs) {
  std::string out = "<!DOCTYPE html>\n<html><head><title>generated</title></head>\n<body>\n";
  for (const auto& p : paragraphs) out += "  <p>" + renarrate::text::html_escape(p) + "</p>\n";
  return out + "</body></html>\n";
}

renarrate::DocumentSnapshot html_snapshot(std::string source, std::string content) {
  renarrate::DocumentSnapshot s;
  s.id = "fixture";
  s.source = std::move(source);
  s.media_type = "text/html";
  s.content = std::move(content);
  s.retrieved_at = *renarrate::Timestamp::parse("2024-01-01T00:00:00Z");
  return s;
}

renarrate::DocumentSnapshot text_snapshot(std::string source, std::string content) {
  auto s = html_snapshot(std::move(source), std::move(content));
  s.media_type = "text/plain";
  return s;
}

renarrate::Renarration make_renarration(std::string source, renarrate::Selector selector,
                                        std::string value, std::string language) {
  using namespace renarrate;
  Renarration r;
  r.motivation = Motivation(Motivation::Kind::Renarrating);
  r.transformation = TransformationKind::Translation;
  r.bodies.push_back(body::Textual{std::move(value), std::move(language), std::string("text/plain")});
  r.target.source = std::move(source);
  r.target.selectors.push_back(std::move(selector));
  return r;
}

namespace {

template <class T>
const T& pick(Rng& rng, const std::vector<T>& v) {
  return v[std::uniform_int_distribution<std::size_t>(0, v.size() - 1)(rng)];
}

bool coin(Rng& rng, double p = 0.5) { return std::bernoulli_distribution(p)(rng); }

std::optional<std::string> maybe_language(Rng& rng) {
  if (coin(rng, 0.2)) return std::nullopt;
  return pick(rng, language_pool());
}

}  // namespace

renarrate::Renarration random_renarration(Rng& rng, std::string source, bool any_motivation) {
  using namespace renarrate;
  Renarration r;
  r.target.source = std::move(source);
  std::uniform_int_distribution<int> body_count(1, 3);
  const int bodies = body_count(rng);
  for (int i = 0; i < bodies; ++i) {
    if (coin(rng, 0.6)) {
      r.bodies.push_back(body::Textual{random_word(rng), maybe_language(rng), std::string("text/plain")});
    } else {
      static const std::vector<std::string> formats{"audio/mpeg", "video/mp4", "image/jpeg", "text/html"};
      r.bodies.push_back(body::External{"http://media.example.org/" + random_word(rng), std::nullopt,
                                        pick(rng, formats), maybe_language(rng)});
    }
  }
  if (coin(rng, 0.6)) {
    AudienceSpec a;
    const int n = std::uniform_int_distribution<int>(0, 2)(rng);
    for (int i = 0; i < n; ++i) a.languages.push_back(pick(rng, language_pool()));
    if (coin(rng)) a.medium = static_cast<Medium>(std::uniform_int_distribution<int>(0, 3)(rng));
    if (coin(rng, 0.7)) a.literacy_level = std::uniform_int_distribution<int>(1, 5)(rng);
    r.audience = a;
  }
  // A small pool of instants so that ties on created are common.
  const int day = std::uniform_int_distribution<int>(1, 6)(rng);
  char buf[32];
  std::snprintf(buf, sizeof buf, "2024-05-%02dT12:00:00Z", day);
  if (!coin(rng, 0.1)) r.created = Timestamp::parse(buf);

  static const std::vector<std::string> motivations{"renarrating", "renarrating", "describing",
                                                    "commenting", "x-retelling"};
  const std::string motivation = any_motivation ? pick(rng, motivations) : std::string("renarrating");
  r.motivation = Motivation::from_string(motivation);
  if (r.is_renarrating()) {
    r.transformation = static_cast<TransformationKind>(std::uniform_int_distribution<int>(0, 3)(rng));
  }
  return r;
}

renarrate::AudienceProfile random_profile(Rng& rng) {
  using namespace renarrate;
  AudienceProfile p;
  static const std::vector<std::string> primaries{"kn", "en", "hi", "fr", "ta"};
  std::vector<std::string> pool = primaries;
  std::shuffle(pool.begin(), pool.end(), rng);
  const auto n = std::uniform_int_distribution<std::size_t>(1, 3)(rng);
  for (std::size_t i = 0; i < n; ++i) {
    p.languages.push_back(coin(rng, 0.2) ? pool[i] + "-IN" : pool[i]);
  }
  if (coin(rng)) p.medium = static_cast<Medium>(std::uniform_int_distribution<int>(0, 3)(rng));
  if (coin(rng)) p.literacy_level = std::uniform_int_distribution<int>(1, 5)(rng);
  return p;
}

}  // namespace testing
