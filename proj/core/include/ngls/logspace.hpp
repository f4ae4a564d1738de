#pragma once

#include <cmath>
#include <limits>

namespace ngls {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

/// log(exp(a) + exp(b)) without leaving log space.
inline double log_add(double a, double b) {
  if (a == kNegInf) return b;
  if (b == kNegInf) return a;
  if (a < b) std::swap(a, b);
  return a + std::log1p(std::exp(b - a));
}

/// Accumulates log(sum exp(x_i)) one term at a time.
class LogSum {
 public:
  void add(double log_term) { value_ = log_add(value_, log_term); }
  double value() const { return value_; }
  bool empty() const { return value_ == kNegInf; }

 private:
  double value_ = kNegInf;
};

/// x log x with the 0 log 0 := 0 convention used throughout entropy sums.
inline double xlogx(double x) { return x > 0.0 ? x * std::log(x) : 0.0; }

/// log(n!) via lgamma; exact enough for multinomial weights at any n.
inline double log_factorial(int64_t n) {
  return std::lgamma(static_cast<double>(n) + 1.0);
}

}  // namespace ngls
