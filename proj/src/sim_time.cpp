#include "minins/sim_time.hpp"

#include <cstdio>
#include <limits>
#include <stdexcept>

namespace minins {

namespace {

bool is_digit(char c) { return c >= '0' && c <= '9'; }

}  // namespace

SimTime parse_decimal_time(std::string_view number, std::int64_t unit_nanos) {
  auto bad = [&](const char* why) {
    return std::invalid_argument(std::string(why) + ": '" + std::string(number) + "'");
  };
  if (number.empty()) throw bad("empty time value");

  auto dot = number.find('.');
  std::string_view whole = number.substr(0, dot);
  std::string_view frac = dot == std::string_view::npos ? std::string_view{} : number.substr(dot + 1);
  if (whole.empty() && frac.empty()) throw bad("malformed time value");
  if (dot != std::string_view::npos && frac.empty()) throw bad("malformed time value");

  constexpr auto kMax = std::numeric_limits<std::int64_t>::max();
  std::int64_t whole_value = 0;
  for (char c : whole) {
    if (!is_digit(c)) throw bad("malformed time value");
    if (whole_value > (kMax - (c - '0')) / 10) throw bad("time value overflows");
    whole_value = whole_value * 10 + (c - '0');
  }
  if (whole_value != 0 && whole_value > kMax / unit_nanos) throw bad("time value overflows");
  std::int64_t total = whole_value * unit_nanos;

  // The fractional part contributes frac * unit / 10^len; it must land on a
  // whole nanosecond.
  std::int64_t scale = unit_nanos;
  for (char c : frac) {
    if (!is_digit(c)) throw bad("malformed time value");
    int digit = c - '0';
    if (scale % 10 != 0) {
      if (digit != 0) throw bad("time value finer than one nanosecond");
      continue;
    }
    scale /= 10;
    total += digit * scale;
    if (total < 0) throw bad("time value overflows");
  }
  return SimTime::from_nanos(total);
}

SimTime parse_time_with_unit(std::string_view text) {
  struct Unit {
    std::string_view suffix;
    std::int64_t nanos;
  };
  // Longest suffix first so "ms" is not read as "s".
  static constexpr Unit kUnits[] = {{"ms", 1'000'000}, {"us", 1'000}, {"ns", 1}, {"s", 1'000'000'000}};
  for (const auto& unit : kUnits) {
    if (text.size() > unit.suffix.size() && text.ends_with(unit.suffix)) {
      auto number = text.substr(0, text.size() - unit.suffix.size());
      if (!is_digit(number.back())) continue;
      return parse_decimal_time(number, unit.nanos);
    }
  }
  throw std::invalid_argument("unknown time unit in '" + std::string(text) + "'");
}

std::string format_seconds_fixed(SimTime t) {
  char buf[40];
  std::int64_t ns = t.nanos();
  const char* sign = ns < 0 ? "-" : "";
  std::uint64_t mag = ns < 0 ? static_cast<std::uint64_t>(-(ns + 1)) + 1 : static_cast<std::uint64_t>(ns);
  std::snprintf(buf, sizeof buf, "%s%llu.%09llu", sign, static_cast<unsigned long long>(mag / 1'000'000'000),
                static_cast<unsigned long long>(mag % 1'000'000'000));
  return buf;
}

std::string format_seconds_short(SimTime t) {
  std::string s = format_seconds_fixed(t);
  while (s.back() == '0') s.pop_back();
  if (s.back() == '.') s.pop_back();
  return s;
}

}  // namespace minins
