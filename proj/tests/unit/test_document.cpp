#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "renarrate/css_selector.hpp"
#include "renarrate/error.hpp"
#include "renarrate/html_document.hpp"
#include "renarrate/media_fragment.hpp"
#include "renarrate/snapshot_store.hpp"
#include "support.hpp"

using namespace renarrate;

namespace {

Errc error_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error");
  return Errc::IoError;
}

// Random HTML with inline markup, entities, comments, raw-text elements and
// irregular whitespace.
std::string noisy_html(testing::Rng& rng) {
  auto uniform = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
  static const std::vector<std::string> spaces{" ", "  ", "\n", "\n    ", "\t "};
  static const std::vector<std::string> entities{"&amp;", "&lt;", "&#233;", "&#x0C95;", "&quot;", "&nbsp;"};
  std::string out = "<html><head><title>t</title><style>p{}</style></head><body>";
  for (int p = uniform(1, 5); p > 0; --p) {
    out += uniform(0, 1) ? "<p>" : "<div class=\"c\">";
    for (int w = uniform(1, 12); w > 0; --w) {
      switch (uniform(0, 9)) {
        case 0: out += "<em>" + testing::random_word(rng) + "</em>"; break;
        case 1: out += entities[static_cast<std::size_t>(uniform(0, 5))]; break;
        case 2: out += "<!-- " + testing::random_word(rng) + " -->"; break;
        case 3: out += "<script>var x = '<p>';</script>"; break;
        case 4: out += "<br>"; break;
        case 5: out += "ಕನ್ನಡ"; break;
        default: out += testing::random_word(rng);
      }
      out += spaces[static_cast<std::size_t>(uniform(0, 4))];
    }
    out += "</p>\n";
  }
  return out + "</body></html>";
}

}  // namespace

TEST_SUITE("media-fragment") {
  TEST_CASE("examples") {
    CHECK(std::get<Region>(parse_media_fragment("xywh=366,186,248,199")) == Region{366, 186, 248, 199});
    CHECK(std::get<Region>(parse_media_fragment("xywh=0,0,1,1")) == Region{0, 0, 1, 1});
    CHECK(std::get<TimeInterval>(parse_media_fragment("t=10,20")) == TimeInterval{10.0, 20.0});
    CHECK(std::get<TimeInterval>(parse_media_fragment("t=1.5,2.25")) == TimeInterval{1.5, 2.25});
  }

  TEST_CASE("malformed values") {
    for (const char* bad : {"xywh=366,186", "xywh=1,2,3,4,5", "xywh=a,b,c,d", "xywh=1,2,0,4", "xywh=1,2,3,0",
                            "xywh=-1,2,3,4", "xywh=percent:1,2,3,4", "t=20,10", "t=5,5", "t=x,1", "t=1",
                            "", "xywh=", "xywh=1,2,3,99999999999"}) {
      CHECK_MESSAGE(error_of([&] { parse_media_fragment(bad); }) == Errc::MalformedFragment, bad);
    }
  }
}

TEST_SUITE("html") {
  TEST_CASE("plain text is an identity map") {
    const auto t = extract_text(testing::text_snapshot("http://a/", "abc"));
    CHECK(t.text == "abc");
    REQUIRE(t.map.size() == 3);
    for (std::size_t i = 0; i < 3; ++i) CHECK(t.map[i] == ByteRange{i, i + 1});
  }

  TEST_CASE("whitespace collapses and the map covers the inner bytes") {
    const std::string html = "<p>the  lion</p>";
    const auto t = extract_text(testing::html_snapshot("http://a/", html));
    CHECK(t.text == "the lion");
    CHECK(t.bytes_for({0, 8}) == ByteRange{3, 12});
    CHECK(t.map[3] == ByteRange{6, 8});  // the collapsed run
  }

  TEST_CASE("entities, raw text and comments") {
    const auto t = extract_text(testing::html_snapshot(
        "http://a/", "<title>x</title><p>a &amp; b<!-- c --><script>d</script> &#x0C95;</p>"));
    CHECK(t.text == "a & b ಕ");
    CHECK(t.bytes_for({2, 3}) == ByteRange{21, 26});
  }

  TEST_CASE("block boundaries separate words, inline elements do not") {
    const auto t = extract_text(testing::html_snapshot("http://a/", "<div>one</div><div>two<em>three</em></div>"));
    CHECK(t.text == "one twothree");
  }

  TEST_CASE("non-textual snapshots are rejected") {
    DocumentSnapshot s = testing::html_snapshot("http://a/img.jpg", "\xFF\xD8\xFF");
    s.media_type = "image/jpeg";
    CHECK(error_of([&] { extract_text(s); }) == Errc::UnsupportedMediaType);
    s.media_type = "text/plain";
    CHECK(error_of([&] { extract_text(s); }) == Errc::MalformedDocument);
  }

  TEST_CASE("BCP paragraphs") {
    const auto doc = parse_document(testing::bcp_snapshot());
    const auto expected = testing::bcp_paragraphs();
    REQUIRE(doc.paragraphs.size() == expected.size());
    for (std::size_t i = 0; i < expected.size(); ++i) {
      CHECK(doc.text.slice(doc.paragraphs[i]) == expected[i]);
    }
  }

  TEST_CASE("property: spans map to bytes that re-extract to the same text") {
    testing::Rng rng(4242);
    for (int trial = 0; trial < 300; ++trial) {
      const std::string html = noisy_html(rng);
      const auto t = extract_text(testing::html_snapshot("http://a/", html));
      CHECK(extract_text(testing::html_snapshot("http://a/", html)).text == t.text);
      if (t.size() == 0) continue;
      for (int k = 0; k < 20; ++k) {
        std::size_t a = std::uniform_int_distribution<std::size_t>(0, t.size() - 1)(rng);
        std::size_t b = std::uniform_int_distribution<std::size_t>(a + 1, t.size())(rng);
        if (t.code_points[a] == U' ' || t.code_points[b - 1] == U' ') continue;
        const ByteRange bytes = t.bytes_for({a, b});
        const auto again = extract_text(
            testing::html_snapshot("http://a/", html.substr(bytes.begin, bytes.end - bytes.begin)));
        REQUIRE_MESSAGE(again.text == t.slice({a, b}), html);
      }
    }
  }
}

TEST_SUITE("css") {
  TEST_CASE("selection against the BCP page") {
    const auto doc = parse_document(testing::bcp_snapshot());
    const auto paragraphs = testing::bcp_paragraphs();
    auto one = [&](std::string_view sel) {
      const auto hits = css::select(doc, css::parse(sel));
      REQUIRE_MESSAGE(hits.size() == 1, sel);
      return doc.text.slice(doc.elements[static_cast<std::size_t>(hits[0])].text);
    };
    CHECK(one("p:nth-of-type(3)") == paragraphs[2]);
    CHECK(one("#p7") == paragraphs[6]);
    CHECK(one("body p:nth-of-type(10) ") == paragraphs[9]);
    CHECK(one("p#p1 em") == "camel");
    CHECK(css::select(doc, css::parse("body p")).size() == 10);
    CHECK(css::select(doc, css::parse("*")).size() > 10);
    CHECK(css::select(doc, css::parse(".missing")).empty());
  }

  TEST_CASE("classes") {
    const auto doc = parse_document(
        testing::html_snapshot("http://a/", "<div class=\"a b\"><p class=\"b\">x</p></div><p>y</p>"));
    CHECK(css::select(doc, css::parse(".b")).size() == 2);
    CHECK(css::select(doc, css::parse("div.a.b p.b")).size() == 1);
    CHECK(css::select(doc, css::parse("p:nth-of-type(2)")).empty());
  }

  TEST_CASE("unsupported syntax") {
    for (const char* bad : {"", "p > a", "p + a", "a[href]", "p:first-child", "p,div", "p:nth-of-type(0)"}) {
      CHECK_MESSAGE(error_of([&] { css::parse(bad); }) == Errc::InvalidSelector, bad);
    }
  }
}

TEST_SUITE("snapshot") {
  TEST_CASE("media type detection") {
    CHECK(detect_media_type("a.html", "") == "text/html");
    CHECK(detect_media_type("a", "<!DOCTYPE html><p>") == "text/html");
    CHECK(detect_media_type("a", "plain words") == "text/plain");
    CHECK(detect_media_type("a", "\xFF\xD8\xFF\xE0") == "image/jpeg");
    CHECK_FALSE(detect_media_type("a.bin", std::string("\x00\x01\x02", 3)).has_value());
  }

  TEST_CASE("store keeps every ingest and returns the latest") {
    testing::TempDir dir;
    SnapshotStore store(dir.path());
    auto s = testing::html_snapshot("http://mitan.in/bcp/raika", "<p>one</p>");
    s.id.clear();
    s.retrieved_at = *Timestamp::parse("2024-01-01T00:00:00Z");
    const auto first = store.put(s);
    s.content = "<p>two</p>";
    s.retrieved_at = *Timestamp::parse("2024-01-02T00:00:00Z");
    const auto second = store.put(s);
    CHECK(first != second);
    CHECK(store.all("http://mitan.in/bcp/raika").size() == 2);
    const auto latest = store.latest("HTTP://MITAN.IN/bcp/raika");
    REQUIRE(latest);
    CHECK(latest->content == "<p>two</p>");
    CHECK(latest->id == second);
    CHECK_FALSE(store.latest("http://mitan.in/other").has_value());

    SnapshotStore reopened(dir.path());
    CHECK(reopened.latest("http://mitan.in/bcp/raika")->retrieved_at == s.retrieved_at);

    s.content = "\xC3\x28";
    CHECK(error_of([&] { store.put(s); }) != Errc::IoError);
  }

  TEST_CASE("file snapshots") {
    const auto s = snapshot_from_file(testing::fixture_path("bcp/raika.html"), std::string(testing::kBcpSource));
    CHECK(s.media_type == "text/html");
    CHECK(s.source == testing::kBcpSource);
    const auto img = snapshot_from_file(testing::fixture_path("wrestlers.jpg"));
    CHECK(img.media_type == "image/jpeg");
    CHECK(img.source.rfind("file:///", 0) == 0);
    CHECK(error_of([&] { snapshot_from_file("/nonexistent/file.html"); }) == Errc::FetchFailed);
  }
}
