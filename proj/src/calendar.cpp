#include "logperiodic/calendar.hpp"

#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>

#include "logperiodic/errors.hpp"

namespace logperiodic {
namespace {

bool parse_int(std::string_view s, int& out) {
  if (s.empty()) return false;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc{} && ptr == s.data() + s.size();
}

}  // namespace

double parse_iso_date(std::string_view text) {
  using namespace std::chrono;
  int y = 0, m = 0, d = 0;
  if (text.size() != 10 || text[4] != '-' || text[7] != '-' || !parse_int(text.substr(0, 4), y) ||
      !parse_int(text.substr(5, 2), m) || !parse_int(text.substr(8, 2), d)) {
    throw Error(ErrorCode::Format, "invalid ISO-8601 date '" + std::string(text) + "'");
  }
  const year_month_day ymd{year{y}, month{static_cast<unsigned>(m)}, day{static_cast<unsigned>(d)}};
  if (!ymd.ok()) throw Error(ErrorCode::Format, "invalid calendar date '" + std::string(text) + "'");
  return static_cast<double>(sys_days{ymd}.time_since_epoch().count());
}

std::string format_iso_date(double day_offset) {
  using namespace std::chrono;
  if (!std::isfinite(day_offset)) throw Error(ErrorCode::Domain, "non-finite day offset");
  const year_month_day ymd{sys_days{days{static_cast<long>(std::floor(day_offset))}}};
  char buf[32];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()));
  return buf;
}

double parse_day(std::string_view text) {
  if (text.size() == 10 && text[4] == '-' && text[7] == '-') return parse_iso_date(text);
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size() || !std::isfinite(value)) {
    throw Error(ErrorCode::Format, "expected YYYY-MM-DD or a day offset, got '" + std::string(text) + "'");
  }
  return value;
}

}  // namespace logperiodic
