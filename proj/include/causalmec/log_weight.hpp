#pragma once

#include <algorithm>
#include <cmath>
#include <compare>
#include <limits>
#include <span>

namespace causalmec {

/// Nonnegative weight stored as its natural logarithm; -inf is weight zero.
class LogWeight {
 public:
  constexpr LogWeight() = default;

  static constexpr LogWeight zero() { return from_log(-std::numeric_limits<double>::infinity()); }
  static constexpr LogWeight one() { return from_log(0.0); }
  static constexpr LogWeight from_log(double log_value) {
    LogWeight w;
    w.log_ = log_value;
    return w;
  }
  static LogWeight from_linear(double value) { return from_log(std::log(value)); }

  constexpr double log() const { return log_; }
  double linear() const { return std::exp(log_); }
  constexpr bool is_zero() const { return log_ == -std::numeric_limits<double>::infinity(); }

  friend LogWeight operator+(LogWeight a, LogWeight b) {
    if (a.is_zero()) return b;
    if (b.is_zero()) return a;
    const double hi = std::max(a.log_, b.log_);
    const double lo = std::min(a.log_, b.log_);
    return from_log(hi + std::log1p(std::exp(lo - hi)));
  }
  friend constexpr LogWeight operator*(LogWeight a, LogWeight b) {
    if (a.is_zero() || b.is_zero()) return zero();
    return from_log(a.log_ + b.log_);
  }
  friend constexpr LogWeight operator/(LogWeight a, LogWeight b) { return from_log(a.log_ - b.log_); }
  LogWeight& operator+=(LogWeight o) { return *this = *this + o; }
  LogWeight& operator*=(LogWeight o) { return *this = *this * o; }

  friend constexpr bool operator==(LogWeight a, LogWeight b) { return a.log_ == b.log_; }
  friend constexpr auto operator<=>(LogWeight a, LogWeight b) { return a.log_ <=> b.log_; }

 private:
  double log_ = -std::numeric_limits<double>::infinity();
};

/// Stable log(sum(exp(x))) over a span; -inf for an empty or all -inf input.
inline double log_sum_exp(std::span<const double> xs) {
  double hi = -std::numeric_limits<double>::infinity();
  for (double x : xs) hi = std::max(hi, x);
  if (hi == -std::numeric_limits<double>::infinity()) return hi;
  double acc = 0.0;
  for (double x : xs) acc += std::exp(x - hi);
  return hi + std::log(acc);
}

}  // namespace causalmec
