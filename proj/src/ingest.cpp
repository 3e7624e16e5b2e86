#include "logperiodic/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "logperiodic/calendar.hpp"
#include "logperiodic/errors.hpp"

namespace logperiodic {
namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  if (s.size() >= 2 && s.front() == '"' && s.back() == '"') s = s.substr(1, s.size() - 2);
  return s;
}

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  for (;;) {
    const auto comma = line.find(',', start);
    fields.push_back(trim(line.substr(start, comma == std::string_view::npos ? line.npos : comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return fields;
}

bool parse_number(std::string_view s, double& out) {
  if (s.empty()) return false;
  if (s.front() == '+') s.remove_prefix(1);
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc{} && ptr == s.data() + s.size() && std::isfinite(out);
}

}  // namespace

Window::Window(double start, double end) : t_start(start), t_end(end) {
  if (!(start < end)) throw Error(ErrorCode::Domain, "window start must precede window end");
}

TimeSeries::TimeSeries(std::vector<TimePoint> points, std::string label)
    : points_(std::move(points)), label_(std::move(label)) {
  if (points_.size() < 2) throw Error(ErrorCode::InsufficientData, "a time series needs at least 2 points");
  for (std::size_t i = 0; i < points_.size(); ++i) {
    const auto& p = points_[i];
    if (!std::isfinite(p.t) || !std::isfinite(p.value)) {
      throw Error(ErrorCode::Domain, "non-finite observation at index " + std::to_string(i));
    }
    if (i > 0 && !(points_[i - 1].t < p.t)) {
      if (points_[i - 1].t == p.t) {
        throw Error(ErrorCode::DuplicateTimestamp, "duplicate timestamp " + format_iso_date(p.t));
      }
      throw Error(ErrorCode::Domain, "time stamps must be strictly increasing");
    }
  }
}

std::vector<double> TimeSeries::times() const {
  std::vector<double> out;
  out.reserve(points_.size());
  for (const auto& p : points_) out.push_back(p.t);
  return out;
}

std::vector<double> TimeSeries::values() const {
  std::vector<double> out;
  out.reserve(points_.size());
  for (const auto& p : points_) out.push_back(p.value);
  return out;
}

double TimeSeries::value_range() const {
  const auto [lo, hi] = std::minmax_element(points_.begin(), points_.end(),
                                            [](const TimePoint& a, const TimePoint& b) { return a.value < b.value; });
  return hi->value - lo->value;
}

ParsedSeries parse_csv_text(std::string_view text, std::string_view value_column) {
  if (text.size() >= 3 && text.substr(0, 3) == "\xEF\xBB\xBF") text.remove_prefix(3);

  std::vector<std::string_view> lines;
  for (std::size_t start = 0; start < text.size();) {
    auto nl = text.find('\n', start);
    if (nl == std::string_view::npos) nl = text.size();
    lines.push_back(text.substr(start, nl - start));
    start = nl + 1;
  }
  auto it = std::find_if(lines.begin(), lines.end(), [](std::string_view l) { return !trim(l).empty(); });
  if (it == lines.end()) throw Error(ErrorCode::Format, "missing header row");

  const auto header = split(*it);
  const auto date_col = std::find(header.begin(), header.end(), "date");
  const auto value_col = std::find(header.begin(), header.end(), value_column);
  if (date_col == header.end()) throw Error(ErrorCode::Format, "header has no 'date' column");
  if (value_col == header.end()) {
    throw Error(ErrorCode::Format, "header has no '" + std::string(value_column) + "' column");
  }
  const auto date_idx = static_cast<std::size_t>(date_col - header.begin());
  const auto value_idx = static_cast<std::size_t>(value_col - header.begin());

  std::vector<TimePoint> points;
  std::vector<double> all_dates;
  std::size_t skipped = 0;
  for (++it; it != lines.end(); ++it) {
    if (trim(*it).empty()) continue;
    const auto fields = split(*it);
    if (date_idx >= fields.size() || fields[date_idx].empty()) {
      throw Error(ErrorCode::Format, "row without date: '" + std::string(trim(*it)) + "'");
    }
    const double t = parse_iso_date(fields[date_idx]);
    all_dates.push_back(t);
    double value = 0.0;
    if (value_idx >= fields.size() || !parse_number(fields[value_idx], value)) {
      ++skipped;
      continue;
    }
    if (value <= 0.0) {
      throw Error(ErrorCode::Domain, "non-positive value on " + std::string(fields[date_idx]));
    }
    points.push_back({t, value});
  }

  std::sort(all_dates.begin(), all_dates.end());
  if (auto dup = std::adjacent_find(all_dates.begin(), all_dates.end()); dup != all_dates.end()) {
    throw Error(ErrorCode::DuplicateTimestamp, "duplicate date " + format_iso_date(*dup));
  }
  if (points.empty()) throw Error(ErrorCode::EmptyInput, "no usable rows in column '" + std::string(value_column) + "'");
  std::sort(points.begin(), points.end(), [](const TimePoint& a, const TimePoint& b) { return a.t < b.t; });
  return {TimeSeries(std::move(points), std::string(value_column)), skipped};
}

ParsedSeries parse_csv(std::istream& in, std::string_view value_column) {
  std::ostringstream buffer;
  buffer << in.rdbuf();
  if (in.bad()) throw Error(ErrorCode::Io, "failed to read CSV stream");
  return parse_csv_text(buffer.str(), value_column);
}

std::string to_csv(const TimeSeries& series, std::string_view value_column) {
  std::string out = "date,";
  out += value_column;
  out += '\n';
  char buf[64];
  for (const auto& p : series.points()) {
    if (p.t != std::floor(p.t)) throw Error(ErrorCode::Domain, "CSV output requires whole-day time stamps");
    std::snprintf(buf, sizeof buf, ",%.17g\n", p.value);
    out += format_iso_date(p.t);
    out += buf;
  }
  return out;
}

TimeSeries slice(const TimeSeries& series, const Window& window) {
  std::vector<TimePoint> kept;
  for (const auto& p : series.points()) {
    if (p.t >= window.t_start && p.t <= window.t_end) kept.push_back(p);
  }
  if (kept.size() < 2) throw Error(ErrorCode::InsufficientData, "window holds fewer than 2 observations");
  return TimeSeries(std::move(kept), series.label());
}

TimeSeries log_transform(const TimeSeries& series) {
  std::vector<TimePoint> out;
  out.reserve(series.size());
  for (const auto& p : series.points()) {
    if (!(p.value > 0.0)) throw Error(ErrorCode::Domain, "log transform needs positive values");
    out.push_back({p.t, std::log(p.value)});
  }
  return TimeSeries(std::move(out), series.label());
}

}  // namespace logperiodic
