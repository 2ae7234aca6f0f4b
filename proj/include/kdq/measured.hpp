#pragma once

#include <cmath>
#include <ostream>

namespace kdq {

/// A floating value carrying an absolute error budget.
///
/// Budgets propagate linearly to first order (|a|·δb + |b|·δa for products), which
/// over-estimates the error when contributions are uncorrelated. Star-product
/// coefficients use this type: the only source of error is the weight integrals.
struct Measured {
  double value = 0.0;
  double error = 0.0;

  constexpr Measured() = default;
  constexpr Measured(double v, double e = 0.0) : value(v), error(e) {}
  constexpr Measured(int v) : value(v) {}

  Measured& operator+=(const Measured& o) {
    value += o.value;
    error += o.error;
    return *this;
  }
  Measured& operator-=(const Measured& o) {
    value -= o.value;
    error += o.error;
    return *this;
  }
  Measured& operator*=(const Measured& o) {
    double e = std::abs(value) * o.error + std::abs(o.value) * error + error * o.error;
    value *= o.value;
    error = e;
    return *this;
  }

  friend Measured operator+(Measured a, const Measured& b) { return a += b; }
  friend Measured operator-(Measured a, const Measured& b) { return a -= b; }
  friend Measured operator*(Measured a, const Measured& b) { return a *= b; }
  friend Measured operator-(const Measured& a) { return {-a.value, a.error}; }
  friend bool operator==(const Measured&, const Measured&) = default;

  friend std::ostream& operator<<(std::ostream& os, const Measured& m) {
    return os << m.value << "±" << m.error;
  }
};

/// Neumaier-compensated running sum.
class CompensatedSum {
 public:
  void add(double x) {
    double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x))
      carry_ += (sum_ - t) + x;
    else
      carry_ += (x - t) + sum_;
    sum_ = t;
  }
  double value() const { return sum_ + carry_; }

 private:
  double sum_ = 0.0;
  double carry_ = 0.0;
};

}  // namespace kdq
