#include "renarrate/media_fragment.hpp"

#include <cctype>
#include <charconv>
#include <cstdlib>
#include <limits>
#include <string>
#include <vector>

#include "renarrate/error.hpp"

namespace renarrate {

namespace {

[[noreturn]] void malformed(std::string_view value, std::string_view why) {
  throw Error(Errc::MalformedFragment,
              "'" + std::string(value) + "': " + std::string(why));
}

std::vector<std::string_view> split_commas(std::string_view s) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const auto comma = s.find(',', start);
    parts.push_back(s.substr(start, comma - start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return parts;
}

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

std::uint32_t parse_pixel(std::string_view value, std::string_view part) {
  if (!all_digits(part)) malformed(value, "non-numeric xywh component");
  std::uint32_t out = 0;
  const auto [ptr, ec] = std::from_chars(part.data(), part.data() + part.size(), out);
  if (ec != std::errc{} || ptr != part.data() + part.size()) {
    malformed(value, "xywh component out of range");
  }
  return out;
}

// digits [ "." digits ]
double parse_seconds(std::string_view value, std::string_view part) {
  const auto dot = part.find('.');
  const std::string_view whole = part.substr(0, dot);
  if (!all_digits(whole)) malformed(value, "non-numeric time component");
  if (dot != std::string_view::npos && !all_digits(part.substr(dot + 1))) {
    malformed(value, "non-numeric time component");
  }
  return std::strtod(std::string(part).c_str(), nullptr);
}

}  // namespace

MediaFragmentValue parse_media_fragment(std::string_view value) {
  if (value.rfind("xywh=", 0) == 0) {
    const auto parts = split_commas(value.substr(5));
    if (parts.size() != 4) malformed(value, "xywh needs exactly 4 components");
    Region r{parse_pixel(value, parts[0]), parse_pixel(value, parts[1]),
             parse_pixel(value, parts[2]), parse_pixel(value, parts[3])};
    if (r.w == 0 || r.h == 0) malformed(value, "zero width or height");
    return r;
  }
  if (value.rfind("t=", 0) == 0) {
    const auto parts = split_commas(value.substr(2));
    if (parts.size() != 2) malformed(value, "t needs exactly 2 components");
    TimeInterval t{parse_seconds(value, parts[0]), parse_seconds(value, parts[1])};
    if (!(t.start < t.end)) malformed(value, "start must be before end");
    return t;
  }
  malformed(value, "expected xywh= or t=");
}

}  // namespace renarrate
