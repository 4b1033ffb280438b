#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

namespace minins {

/// Simulation clock value in integer nanoseconds since the start of a run.
///
/// All scheduling arithmetic stays in integers, so values such as 5 ms or the
/// 0.8 ms serialization time of a 1000 B packet at 10 Mb/s are exact. Decimal
/// seconds only appear at parse and format boundaries.
class SimTime {
 public:
  constexpr SimTime() = default;

  static constexpr SimTime from_nanos(std::int64_t ns) { return SimTime{ns}; }
  static constexpr SimTime micros(std::int64_t us) { return SimTime{us * 1'000}; }
  static constexpr SimTime millis(std::int64_t ms) { return SimTime{ms * 1'000'000}; }
  static constexpr SimTime seconds(std::int64_t s) { return SimTime{s * 1'000'000'000}; }

  constexpr std::int64_t nanos() const { return nanos_; }
  constexpr double to_seconds() const { return static_cast<double>(nanos_) / 1e9; }

  constexpr auto operator<=>(const SimTime&) const = default;

  constexpr SimTime& operator+=(SimTime rhs) {
    nanos_ += rhs.nanos_;
    return *this;
  }
  constexpr SimTime& operator-=(SimTime rhs) {
    nanos_ -= rhs.nanos_;
    return *this;
  }
  friend constexpr SimTime operator+(SimTime a, SimTime b) { return a += b; }
  friend constexpr SimTime operator-(SimTime a, SimTime b) { return a -= b; }
  friend constexpr SimTime operator*(SimTime a, std::int64_t k) { return SimTime{a.nanos_ * k}; }
  friend constexpr SimTime operator*(std::int64_t k, SimTime a) { return a * k; }

 private:
  explicit constexpr SimTime(std::int64_t ns) : nanos_(ns) {}
  std::int64_t nanos_ = 0;
};

namespace literals {
constexpr SimTime operator""_s(unsigned long long v) { return SimTime::seconds(static_cast<std::int64_t>(v)); }
constexpr SimTime operator""_ms(unsigned long long v) { return SimTime::millis(static_cast<std::int64_t>(v)); }
constexpr SimTime operator""_us(unsigned long long v) { return SimTime::micros(static_cast<std::int64_t>(v)); }
constexpr SimTime operator""_ns(unsigned long long v) { return SimTime::from_nanos(static_cast<std::int64_t>(v)); }
}  // namespace literals

// Parses an unsigned decimal ("0.005", "12") scaled by `unit_nanos` into exact
// nanoseconds. Throws std::invalid_argument on malformed text, sub-nanosecond
// precision or overflow.
SimTime parse_decimal_time(std::string_view number, std::int64_t unit_nanos);

// "<number>s|ms|us|ns", e.g. "10ms", "0.005s".
SimTime parse_time_with_unit(std::string_view text);

// Fixed 9 fractional digits: 21'600'000 ns -> "0.021600000".
std::string format_seconds_fixed(SimTime t);

// Shortest exact decimal: 500 s -> "500", 21.6 ms -> "0.0216".
std::string format_seconds_short(SimTime t);

}  // namespace minins
