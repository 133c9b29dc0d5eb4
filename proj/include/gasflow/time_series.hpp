#pragma once

#include <algorithm>
#include <initializer_list>
#include <stdexcept>
#include <utility>
#include <vector>

namespace gasflow {

/// Piecewise-constant time profile. A series is a sorted list of
/// (hour, value) breakpoints; value(t) holds the last breakpoint at or
/// before t. Times before the first breakpoint evaluate to the first value
/// (validation flags profiles that do not start at or before hour 0).
class TimeSeries {
public:
  TimeSeries() = default;

  static TimeSeries constant(double value) {
    TimeSeries s;
    s.points_.emplace_back(0.0, value);
    return s;
  }

  TimeSeries(std::initializer_list<std::pair<double, double>> pts) {
    for (const auto& p : pts) add(p.first, p.second);
  }

  void add(double hour, double value) {
    if (!points_.empty() && hour <= points_.back().first)
      throw std::invalid_argument("TimeSeries breakpoints must be strictly increasing");
    points_.emplace_back(hour, value);
  }

  bool empty() const { return points_.empty(); }
  std::size_t size() const { return points_.size(); }
  const std::vector<std::pair<double, double>>& points() const { return points_; }

  double start_hour() const {
    if (points_.empty()) throw std::logic_error("TimeSeries is empty");
    return points_.front().first;
  }

  double value(double hour) const {
    if (points_.empty()) throw std::logic_error("TimeSeries is empty");
    auto it = std::upper_bound(points_.begin(), points_.end(), hour,
                               [](double h, const auto& p) { return h < p.first; });
    if (it == points_.begin()) return it->second;
    return std::prev(it)->second;
  }

  double min_value() const {
    double m = points_.at(0).second;
    for (const auto& p : points_) m = std::min(m, p.second);
    return m;
  }

  double max_value() const {
    double m = points_.at(0).second;
    for (const auto& p : points_) m = std::max(m, p.second);
    return m;
  }

  bool operator==(const TimeSeries& other) const { return points_ == other.points_; }

private:
  std::vector<std::pair<double, double>> points_;
};

}  // namespace gasflow
