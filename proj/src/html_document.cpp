#include "renarrate/html_document.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <string_view>

#include "renarrate/error.hpp"
#include "renarrate/text_util.hpp"

namespace renarrate {

std::string essence(std::string_view media_type) {
  std::string_view e = media_type.substr(0, media_type.find(';'));
  while (!e.empty() && std::isspace(static_cast<unsigned char>(e.back()))) e.remove_suffix(1);
  while (!e.empty() && std::isspace(static_cast<unsigned char>(e.front()))) e.remove_prefix(1);
  return text::to_lower_ascii(e);
}

bool is_html_media_type(std::string_view media_type) {
  const auto e = essence(media_type);
  return e == "text/html" || e == "application/xhtml+xml";
}

bool is_textual_media_type(std::string_view media_type) {
  return is_html_media_type(media_type) || essence(media_type).rfind("text/", 0) == 0;
}

ByteRange ExtractedText::bytes_for(TextSpan span) const {
  return {map.at(span.start).begin, map.at(span.end - 1).end};
}

std::string ExtractedText::slice(TextSpan span) const {
  return text::encode_utf8(std::u32string_view(code_points).substr(span.start, span.length()));
}

namespace {

bool is_space(char32_t c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f'; }

// Accumulates visible text while collapsing whitespace and tracking
// paragraph boundaries.
class TextBuilder {
public:
  std::size_t size() const { return out_.code_points.size(); }
  const std::u32string& code_points() const { return out_.code_points; }

  void space(ByteRange r) {
    if (pending_) {
      pending_range_.end = r.end;
    } else {
      pending_ = true;
      pending_range_ = r;
    }
  }

  void boundary(ByteRange r, bool paragraph) {
    space(r);
    if (paragraph) paragraph_break_ = true;
  }

  void mark_paragraph() { paragraph_break_ = true; }

  void emit(char32_t cp, ByteRange r) {
    if (size() == 0) {
      pending_ = false;
      paragraph_break_ = false;
      paragraph_start_ = 0;
    }
    if (paragraph_break_) {
      close_paragraph();
      paragraph_break_ = false;
    }
    if (pending_) {
      push(U' ', pending_range_);
      pending_ = false;
      if (paragraph_start_ == npos) paragraph_start_ = size();
    }
    if (paragraph_start_ == npos) paragraph_start_ = size();
    push(cp, r);
  }

  ExtractedText finish(std::vector<TextSpan>& paragraphs) {
    close_paragraph();
    paragraphs = std::move(paragraphs_);
    out_.text = text::encode_utf8(out_.code_points);
    return std::move(out_);
  }

private:
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

  void push(char32_t cp, ByteRange r) {
    out_.code_points.push_back(cp);
    out_.map.push_back(r);
  }

  // The paragraph runs up to the last emitted code point; a pending
  // separator space has not been emitted yet.
  void close_paragraph() {
    if (paragraph_start_ != npos && size() > paragraph_start_) {
      paragraphs_.push_back({paragraph_start_, size()});
    }
    paragraph_start_ = npos;
  }

  ExtractedText out_;
  bool pending_ = false;
  ByteRange pending_range_;
  bool paragraph_break_ = false;
  std::size_t paragraph_start_ = 0;
  std::vector<TextSpan> paragraphs_;
};

char32_t decode_at(std::string_view s, std::size_t pos, std::size_t& len) {
  const int n = text::utf8_sequence_length(static_cast<unsigned char>(s[pos]));
  if (n == 0 || pos + static_cast<std::size_t>(n) > s.size()) {
    throw Error(Errc::MalformedDocument, "invalid UTF-8 at byte " + std::to_string(pos));
  }
  len = static_cast<std::size_t>(n);
  const std::u32string cp = text::decode_utf8(s.substr(pos, len));
  return cp.front();
}

ParsedDocument parse_plain(std::string_view content) {
  TextBuilder builder;
  std::size_t pos = 0;
  int newlines_in_run = 0;
  while (pos < content.size()) {
    std::size_t len = 0;
    const char32_t cp = decode_at(content, pos, len);
    const ByteRange r{pos, pos + len};
    if (is_space(cp)) {
      builder.space(r);
      if (cp == '\n' && ++newlines_in_run == 2) builder.mark_paragraph();
    } else {
      newlines_in_run = 0;
      builder.emit(cp, r);
    }
    pos += len;
  }
  ParsedDocument doc;
  doc.text = builder.finish(doc.paragraphs);
  return doc;
}

constexpr std::array<std::string_view, 40> kBlockTags{
    "address", "article", "aside",  "blockquote", "body",    "caption", "dd",    "details",
    "dialog",  "div",     "dl",     "dt",         "fieldset", "figcaption", "figure", "footer",
    "form",    "h1",      "h2",     "h3",         "h4",      "h5",      "h6",    "head",
    "header",  "hr",      "html",   "li",         "main",    "nav",     "ol",    "p",
    "pre",     "section", "summary", "table",     "td",      "th",      "tr",    "ul"};

constexpr std::array<std::string_view, 14> kVoidTags{
    "area", "base", "br", "col", "embed", "hr", "img", "input", "link", "meta", "param",
    "source", "track", "wbr"};

constexpr std::array<std::string_view, 5> kRawTextTags{"script", "style", "title", "template",
                                                       "textarea"};

// Opening one of these closes an open <p>.
constexpr std::array<std::string_view, 22> kClosesParagraph{
    "address", "article", "aside", "blockquote", "div", "dl",  "fieldset", "footer",
    "form",    "h1",      "h2",    "h3",         "h4",  "h5",  "h6",       "header",
    "hr",      "main",    "nav",   "ol",         "p",   "ul"};

template <std::size_t N>
bool contains(const std::array<std::string_view, N>& set, std::string_view tag) {
  return std::find(set.begin(), set.end(), tag) != set.end();
}

struct NamedEntity {
  std::string_view name;
  char32_t cp;
};

constexpr std::array<NamedEntity, 16> kEntities{{
    {"amp", U'&'},      {"lt", U'<'},       {"gt", U'>'},       {"quot", U'"'},
    {"apos", U'\''},    {"nbsp", U'\u00A0'}, {"copy", U'©'}, {"reg", U'®'},
    {"mdash", U'—'}, {"ndash", U'–'}, {"hellip", U'…'}, {"lsquo", U'‘'},
    {"rsquo", U'’'}, {"ldquo", U'“'}, {"rdquo", U'”'}, {"middot", U'·'},
}};

// Decodes the entity starting at `pos` (which holds '&'). Returns its
// length, or 0 if the text is not a recognised entity.
std::size_t decode_entity(std::string_view s, std::size_t pos, char32_t& cp) {
  const auto semi = s.find(';', pos + 1);
  if (semi == std::string_view::npos || semi - pos > 12) return 0;
  const std::string_view body = s.substr(pos + 1, semi - pos - 1);
  if (body.empty()) return 0;
  if (body[0] == '#') {
    const bool hex = body.size() > 1 && (body[1] == 'x' || body[1] == 'X');
    const std::string_view digits = body.substr(hex ? 2 : 1);
    if (digits.empty()) return 0;
    char32_t value = 0;
    for (char c : digits) {
      int d = 0;
      if (c >= '0' && c <= '9') d = c - '0';
      else if (hex && c >= 'a' && c <= 'f') d = c - 'a' + 10;
      else if (hex && c >= 'A' && c <= 'F') d = c - 'A' + 10;
      else return 0;
      value = value * (hex ? 16 : 10) + static_cast<char32_t>(d);
      if (value > 0x10FFFF) return 0;
    }
    if (value == 0 || (value >= 0xD800 && value <= 0xDFFF)) return 0;
    cp = value;
    return semi - pos + 1;
  }
  for (const auto& e : kEntities) {
    if (e.name == body) {
      cp = e.cp;
      return semi - pos + 1;
    }
  }
  return 0;
}

bool is_name_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_' || c == ':';
}

struct Tag {
  std::string name;
  bool closing = false;
  bool self_closing = false;
  std::string id;
  std::vector<std::string> classes;
  std::size_t end = 0;  // one past '>'
};

// Parses a tag starting at `pos` ('<'). Returns false if this is not a tag.
bool parse_tag(std::string_view s, std::size_t pos, Tag& tag) {
  std::size_t i = pos + 1;
  if (i < s.size() && s[i] == '/') {
    tag.closing = true;
    ++i;
  }
  if (i >= s.size() || !std::isalpha(static_cast<unsigned char>(s[i]))) return false;
  const std::size_t name_start = i;
  while (i < s.size() && is_name_char(s[i])) ++i;
  tag.name = text::to_lower_ascii(s.substr(name_start, i - name_start));

  while (i < s.size()) {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    if (i >= s.size()) break;
    if (s[i] == '>') {
      tag.end = i + 1;
      return true;
    }
    if (s[i] == '/') {
      if (i + 1 < s.size() && s[i + 1] == '>') {
        tag.self_closing = true;
        tag.end = i + 2;
        return true;
      }
      ++i;
      continue;
    }
    const std::size_t attr_start = i;
    while (i < s.size() && !std::isspace(static_cast<unsigned char>(s[i])) && s[i] != '=' &&
           s[i] != '>' && s[i] != '/') {
      ++i;
    }
    const std::string attr = text::to_lower_ascii(s.substr(attr_start, i - attr_start));
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    std::string value;
    if (i < s.size() && s[i] == '=') {
      ++i;
      while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
      if (i < s.size() && (s[i] == '"' || s[i] == '\'')) {
        const char quote = s[i];
        const auto close = s.find(quote, i + 1);
        if (close == std::string_view::npos) return false;
        value = std::string(s.substr(i + 1, close - i - 1));
        i = close + 1;
      } else {
        const std::size_t v = i;
        while (i < s.size() && !std::isspace(static_cast<unsigned char>(s[i])) && s[i] != '>') ++i;
        value = std::string(s.substr(v, i - v));
      }
    }
    if (attr == "id") {
      tag.id = value;
    } else if (attr == "class") {
      std::size_t c = 0;
      while (c < value.size()) {
        while (c < value.size() && std::isspace(static_cast<unsigned char>(value[c]))) ++c;
        const std::size_t start = c;
        while (c < value.size() && !std::isspace(static_cast<unsigned char>(value[c]))) ++c;
        if (c > start) tag.classes.push_back(value.substr(start, c - start));
      }
    }
  }
  return false;
}

std::size_t find_ci(std::string_view haystack, std::string_view needle, std::size_t from) {
  for (std::size_t i = from; i + needle.size() <= haystack.size(); ++i) {
    bool match = true;
    for (std::size_t j = 0; j < needle.size() && match; ++j) {
      match = std::tolower(static_cast<unsigned char>(haystack[i + j])) == needle[j];
    }
    if (match) return i;
  }
  return std::string_view::npos;
}

class HtmlParser {
public:
  explicit HtmlParser(std::string_view content) : s_(content) {
    Element root;
    root.tag = "#root";
    root.inner = {0, s_.size()};
    doc_.elements.push_back(std::move(root));
    open_.push_back(0);
  }

  ParsedDocument run() {
    doc_.html = true;
    std::size_t pos = 0;
    while (pos < s_.size()) {
      const char c = s_[pos];
      if (c == '<') {
        pos = on_markup(pos);
      } else if (c == '&') {
        char32_t cp = 0;
        const std::size_t len = decode_entity(s_, pos, cp);
        if (len > 0) {
          text(cp, {pos, pos + len});
          pos += len;
        } else {
          text(U'&', {pos, pos + 1});
          ++pos;
        }
      } else {
        std::size_t len = 0;
        const char32_t cp = decode_at(s_, pos, len);
        text(cp, {pos, pos + len});
        pos += len;
      }
    }
    while (open_.size() > 1) close_top(s_.size());
    finish_element(0, s_.size());
    doc_.text = builder_.finish(doc_.paragraphs);
    return std::move(doc_);
  }

private:
  void text(char32_t cp, ByteRange r) {
    if (is_space(cp)) {
      builder_.space(r);
    } else {
      builder_.emit(cp, r);
    }
  }

  std::size_t on_markup(std::size_t pos) {
    if (s_.compare(pos, 4, "<!--") == 0) {
      const auto end = s_.find("-->", pos + 4);
      return end == std::string_view::npos ? s_.size() : end + 3;
    }
    if (pos + 1 < s_.size() && (s_[pos + 1] == '!' || s_[pos + 1] == '?')) {
      const auto end = s_.find('>', pos);
      return end == std::string_view::npos ? s_.size() : end + 1;
    }
    Tag tag;
    if (!parse_tag(s_, pos, tag)) {
      text(U'<', {pos, pos + 1});
      return pos + 1;
    }
    const ByteRange range{pos, tag.end};
    const bool block = contains(kBlockTags, tag.name);
    if (tag.closing) {
      if (block) builder_.boundary(range, tag.name != "br");
      close_named(tag.name, pos);
      return tag.end;
    }
    if (tag.name == "br") {
      builder_.space(range);
      return tag.end;
    }
    if (contains(kRawTextTags, tag.name)) {
      const auto close = find_ci(s_, "</" + tag.name, tag.end);
      if (close == std::string_view::npos) return s_.size();
      const auto gt = s_.find('>', close);
      return gt == std::string_view::npos ? s_.size() : gt + 1;
    }
    if (contains(kClosesParagraph, tag.name)) close_if_top("p", pos);
    if (tag.name == "li") close_if_top("li", pos);
    if (tag.name == "dt" || tag.name == "dd") {
      close_if_top("dt", pos);
      close_if_top("dd", pos);
    }
    if (tag.name == "td" || tag.name == "th") {
      close_if_top("td", pos);
      close_if_top("th", pos);
    }
    if (block) builder_.boundary(range, true);

    Element el;
    el.tag = tag.name;
    el.id = std::move(tag.id);
    el.classes = std::move(tag.classes);
    el.parent = open_.back();
    el.inner = {tag.end, tag.end};
    el.text = {builder_.size(), builder_.size()};
    const int index = static_cast<int>(doc_.elements.size());
    doc_.elements[static_cast<std::size_t>(el.parent)].children.push_back(index);
    doc_.elements.push_back(std::move(el));
    if (!tag.self_closing && !contains(kVoidTags, tag.name)) {
      open_.push_back(index);
    } else {
      finish_element(index, tag.end);
    }
    return tag.end;
  }

  void close_if_top(std::string_view name, std::size_t pos) {
    if (open_.size() > 1 && doc_.elements[static_cast<std::size_t>(open_.back())].tag == name) {
      close_top(pos);
    }
  }

  void close_named(const std::string& name, std::size_t pos) {
    for (std::size_t i = open_.size(); i-- > 1;) {
      if (doc_.elements[static_cast<std::size_t>(open_[i])].tag == name) {
        while (open_.size() > i) close_top(pos);
        return;
      }
    }
  }

  void close_top(std::size_t pos) {
    finish_element(open_.back(), pos);
    open_.pop_back();
  }

  // Fixes the element's inner byte end and trims its text span.
  void finish_element(int index, std::size_t inner_end) {
    Element& el = doc_.elements[static_cast<std::size_t>(index)];
    el.inner.end = std::max(el.inner.begin, inner_end);
    const auto& cps = builder_.code_points();
    std::size_t start = std::min(el.text.start, cps.size());
    std::size_t end = cps.size();
    while (start < end && cps[start] == U' ') ++start;
    while (end > start && cps[end - 1] == U' ') --end;
    el.text = {start, end};
  }

  std::string_view s_;
  ParsedDocument doc_;
  TextBuilder builder_;
  std::vector<int> open_;
};

}  // namespace

ParsedDocument parse_document(const DocumentSnapshot& snapshot) {
  if (!is_textual_media_type(snapshot.media_type)) {
    throw Error(Errc::UnsupportedMediaType, "cannot extract text from " + snapshot.media_type);
  }
  if (is_html_media_type(snapshot.media_type)) return HtmlParser(snapshot.content).run();
  return parse_plain(snapshot.content);
}

ExtractedText extract_text(const DocumentSnapshot& snapshot) {
  return parse_document(snapshot).text;
}

}  // namespace renarrate
