#include "renarrate/text_util.hpp"

#include <openssl/evp.h>

#include <array>
#include <cctype>
#include <random>

#include "renarrate/error.hpp"

namespace renarrate::text {

int utf8_sequence_length(unsigned char lead) noexcept {
  if (lead < 0x80) return 1;
  if ((lead & 0xE0) == 0xC0) return lead >= 0xC2 ? 2 : 0;
  if ((lead & 0xF0) == 0xE0) return 3;
  if ((lead & 0xF8) == 0xF0) return lead <= 0xF4 ? 4 : 0;
  return 0;
}

namespace {

// Decodes one code point at `pos`; returns the length consumed or 0.
int decode_one(std::string_view s, std::size_t pos, char32_t& cp) noexcept {
  const auto lead = static_cast<unsigned char>(s[pos]);
  const int len = utf8_sequence_length(lead);
  if (len == 0 || pos + static_cast<std::size_t>(len) > s.size()) return 0;
  if (len == 1) {
    cp = lead;
    return 1;
  }
  char32_t value = lead & (0xFF >> (len + 1));
  for (int i = 1; i < len; ++i) {
    const auto c = static_cast<unsigned char>(s[pos + i]);
    if ((c & 0xC0) != 0x80) return 0;
    value = (value << 6) | (c & 0x3F);
  }
  // Overlong forms, surrogates and out-of-range values.
  if ((len == 3 && value < 0x800) || (len == 4 && value < 0x10000) ||
      (value >= 0xD800 && value <= 0xDFFF) || value > 0x10FFFF) {
    return 0;
  }
  cp = value;
  return len;
}

}  // namespace

bool is_valid_utf8(std::string_view bytes) noexcept {
  std::size_t pos = 0;
  char32_t cp = 0;
  while (pos < bytes.size()) {
    const int len = decode_one(bytes, pos, cp);
    if (len == 0) return false;
    pos += static_cast<std::size_t>(len);
  }
  return true;
}

std::u32string decode_utf8(std::string_view bytes) {
  std::u32string out;
  out.reserve(bytes.size());
  std::size_t pos = 0;
  char32_t cp = 0;
  while (pos < bytes.size()) {
    const int len = decode_one(bytes, pos, cp);
    if (len == 0) {
      throw Error(Errc::MalformedDocument,
                  "invalid UTF-8 at byte " + std::to_string(pos));
    }
    out.push_back(cp);
    pos += static_cast<std::size_t>(len);
  }
  return out;
}

void append_utf8(std::string& out, char32_t cp) {
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
}

std::string encode_utf8(std::u32string_view cps) {
  std::string out;
  out.reserve(cps.size());
  for (char32_t cp : cps) append_utf8(out, cp);
  return out;
}

std::string to_lower_ascii(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

bool is_absolute_iri(std::string_view iri) noexcept {
  const auto colon = iri.find(':');
  if (colon == std::string_view::npos || colon == 0 || colon + 1 >= iri.size()) {
    return false;
  }
  if (!std::isalpha(static_cast<unsigned char>(iri[0]))) return false;
  for (std::size_t i = 1; i < colon; ++i) {
    const auto c = static_cast<unsigned char>(iri[i]);
    if (!std::isalnum(c) && c != '+' && c != '-' && c != '.') return false;
  }
  for (char ch : iri) {
    const auto c = static_cast<unsigned char>(ch);
    if (c <= 0x20 || c == 0x7F || c == '<' || c == '>' || c == '"' ||
        c == '{' || c == '}' || c == '|' || c == '\\' || c == '^' || c == '`') {
      return false;
    }
  }
  return true;
}

std::string normalize_iri(std::string_view iri) {
  const auto colon = iri.find(':');
  if (colon == std::string_view::npos) return std::string(iri);
  std::string out = to_lower_ascii(iri.substr(0, colon));
  out.push_back(':');
  std::string_view rest = iri.substr(colon + 1);
  if (rest.substr(0, 2) != "//") {
    out.append(rest);
    return out;
  }
  out.append("//");
  rest.remove_prefix(2);
  const auto auth_end = rest.find_first_of("/?#");
  std::string_view authority = rest.substr(0, auth_end);
  const auto at = authority.rfind('@');
  if (at != std::string_view::npos) {
    out.append(authority.substr(0, at + 1));
    authority.remove_prefix(at + 1);
  }
  out.append(to_lower_ascii(authority));
  if (auth_end != std::string_view::npos) out.append(rest.substr(auth_end));
  return out;
}

bool is_well_formed_language_tag(std::string_view tag) noexcept {
  if (tag.empty()) return false;
  std::size_t index = 0;
  std::size_t start = 0;
  bool private_use = false;
  while (start <= tag.size()) {
    auto end = tag.find('-', start);
    if (end == std::string_view::npos) end = tag.size();
    const std::string_view sub = tag.substr(start, end - start);
    if (sub.empty() || sub.size() > 8) return false;
    for (char ch : sub) {
      if (!std::isalnum(static_cast<unsigned char>(ch))) return false;
    }
    if (index == 0) {
      const std::string lower = to_lower_ascii(sub);
      if (lower == "x" || lower == "i") {
        private_use = true;
      } else {
        if (sub.size() < 2) return false;
        for (char ch : sub) {
          if (!std::isalpha(static_cast<unsigned char>(ch))) return false;
        }
      }
    }
    ++index;
    if (end == tag.size()) break;
    start = end + 1;
  }
  return !private_use || index > 1;
}

std::string primary_subtag(std::string_view tag) {
  return to_lower_ascii(tag.substr(0, tag.find('-')));
}

std::string sha256_hex(std::string_view bytes) {
  std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
  unsigned int length = 0;
  EVP_Digest(bytes.data(), bytes.size(), digest.data(), &length, EVP_sha256(), nullptr);
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  out.reserve(length * 2);
  for (unsigned int i = 0; i < length; ++i) {
    out.push_back(kHex[digest[i] >> 4]);
    out.push_back(kHex[digest[i] & 0xF]);
  }
  return out;
}

std::string random_hex_id() {
  thread_local std::random_device device;
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  out.reserve(32);
  for (int word = 0; word < 4; ++word) {
    std::uint32_t bits = device();
    for (int i = 0; i < 8; ++i) {
      out.push_back(kHex[bits & 0xF]);
      bits >>= 4;
    }
  }
  return out;
}

std::string html_escape(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

}  // namespace renarrate::text
