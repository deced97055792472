#pragma once

#include <chrono>
#include <compare>
#include <optional>
#include <string>
#include <string_view>

namespace renarrate {

/// RFC-3339 instant, held in UTC with microsecond resolution.
class Timestamp {
public:
  using Clock = std::chrono::system_clock;
  using TimePoint = std::chrono::sys_time<std::chrono::microseconds>;

  constexpr Timestamp() = default;
  constexpr explicit Timestamp(TimePoint tp) : tp_(tp) {}

  static Timestamp now();
  /// Accepts `YYYY-MM-DDTHH:MM:SS[.frac](Z|+HH:MM|-HH:MM)`; `t` and `z` are
  /// accepted in lower case. Returns nullopt on anything else.
  static std::optional<Timestamp> parse(std::string_view text);

  /// Canonical UTC form: seconds precision when the fraction is zero,
  /// otherwise milliseconds or microseconds as needed. Always ends in `Z`.
  std::string to_string() const;

  TimePoint time_point() const noexcept { return tp_; }
  Timestamp plus(std::chrono::microseconds d) const { return Timestamp(tp_ + d); }

  friend auto operator<=>(const Timestamp&, const Timestamp&) = default;

private:
  TimePoint tp_{};
};

}  // namespace renarrate
