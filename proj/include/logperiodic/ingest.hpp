#pragma once

#include <cstddef>
#include <istream>
#include <string>
#include <string_view>
#include <vector>

namespace logperiodic {

struct TimePoint {
  double t = 0.0;      // day offset
  double value = 0.0;  // price level, > 0
};

/// Closed interval [t_start, t_end] on the day axis.
struct Window {
  double t_start = 0.0;
  double t_end = 0.0;

  Window() = default;
  Window(double start, double end);
};

/// Ordered observations with strictly increasing t and at least two points.
/// Construction validates; instances are immutable afterwards.
class TimeSeries {
 public:
  TimeSeries(std::vector<TimePoint> points, std::string label = {});

  const std::vector<TimePoint>& points() const noexcept { return points_; }
  const std::string& label() const noexcept { return label_; }
  std::size_t size() const noexcept { return points_.size(); }
  const TimePoint& operator[](std::size_t i) const { return points_[i]; }
  const TimePoint& front() const { return points_.front(); }
  const TimePoint& back() const { return points_.back(); }

  std::vector<double> times() const;
  std::vector<double> values() const;

  /// max(value) - min(value)
  double value_range() const;

 private:
  std::vector<TimePoint> points_;
  std::string label_;
};

struct ParsedSeries {
  TimeSeries series;
  std::size_t skipped_rows = 0;
};

ParsedSeries parse_csv(std::istream& in, std::string_view value_column);
ParsedSeries parse_csv_text(std::string_view text, std::string_view value_column);

/// Writes `date,<column>` rows with 17 significant digits. Requires whole-day t.
std::string to_csv(const TimeSeries& series, std::string_view value_column = "close");

TimeSeries slice(const TimeSeries& series, const Window& window);

TimeSeries log_transform(const TimeSeries& series);

}  // namespace logperiodic
