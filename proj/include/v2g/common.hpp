#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

namespace v2g {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

inline double distance(const Point2& a, const Point2& b) {
  return std::hypot(a.x - b.x, a.y - b.y);
}

// Ties (x.5) round away from zero; battery counts are nonnegative so this is half-up.
inline long long round_half_up(double v) {
  return static_cast<long long>(std::floor(v + 0.5));
}

// Kahan compensated summation.
class CompensatedSum {
 public:
  void add(double v) {
    double y = v - c_;
    double t = s_ + y;
    c_ = (t - s_) - y;
    s_ = t;
  }
  double value() const { return s_; }

 private:
  double s_ = 0.0;
  double c_ = 0.0;
};

inline double sum_compensated(const std::vector<double>& vs) {
  CompensatedSum acc;
  for (double v : vs) acc.add(v);
  return acc.value();
}

}  // namespace v2g
