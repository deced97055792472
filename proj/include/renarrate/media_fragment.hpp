#pragma once

#include <cstdint>
#include <string_view>
#include <variant>

namespace renarrate {

/// Pixel rectangle; width and height are positive.
struct Region {
  std::uint32_t x = 0;
  std::uint32_t y = 0;
  std::uint32_t w = 0;
  std::uint32_t h = 0;
  friend bool operator==(const Region&, const Region&) = default;
};

/// Seconds, start < end.
struct TimeInterval {
  double start = 0.0;
  double end = 0.0;
  friend bool operator==(const TimeInterval&, const TimeInterval&) = default;
};

using MediaFragmentValue = std::variant<Region, TimeInterval>;

/// Parses `xywh=<int>,<int>,<int>,<int>` or `t=<decimal>,<decimal>`.
/// Throws Error(MalformedFragment) on wrong arity, non-numeric components,
/// zero width or height, or start >= end.
MediaFragmentValue parse_media_fragment(std::string_view value);

}  // namespace renarrate
