#pragma once

#include <cmath>
#include <complex>
#include <memory>
#include <numbers>
#include <stdexcept>
#include <string>
#include <string_view>

namespace kdq {

/// A point of the closed upper half-plane; ground points have zero imaginary part.
using Point = std::complex<double>;

/// Partial derivatives of an angle φ(p,q) with respect to Re p, Im p, Re q, Im q.
struct AngleGradient {
  double dp_re = 0.0;
  double dp_im = 0.0;
  double dq_re = 0.0;
  double dq_im = 0.0;
};

/// Angle function on pairs of points. Implementations must be invariant under
/// z ↦ az + b (a > 0, b real) applied to both arguments and must supply exact gradients.
class AngleMap {
 public:
  virtual ~AngleMap() = default;
  virtual std::string_view id() const = 0;
  virtual double angle(Point p, Point q) const = 0;
  virtual AngleGradient gradient(Point p, Point q) const = 0;
};

/// Φ(p,q) = Arg((q−p)/(q−p̄)), the hyperbolic angle at p from the vertical geodesic to q.
class HarmonicAngle final : public AngleMap {
 public:
  std::string_view id() const override { return "harmonic"; }

  /// Value in [0, 2π).
  double angle(Point p, Point q) const override {
    check(p, q);
    double a = std::arg((q - p) / (q - std::conj(p)));
    if (a < 0) a += 2.0 * std::numbers::pi;
    return a;
  }

  /// Φ = arg(q−p) − arg(q−p̄) locally; d arg w = (Re w dIm w − Im w dRe w)/|w|².
  AngleGradient gradient(Point p, Point q) const override {
    check(p, q);
    const double a1 = q.real() - p.real(), b1 = q.imag() - p.imag();
    const double a2 = a1, b2 = q.imag() + p.imag();
    const double r1 = a1 * a1 + b1 * b1;
    const double r2 = a2 * a2 + b2 * b2;
    AngleGradient g;
    g.dp_re = b1 / r1 - b2 / r2;
    g.dp_im = -a1 / r1 - a2 / r2;
    g.dq_re = -b1 / r1 + b2 / r2;
    g.dq_im = a1 / r1 - a2 / r2;
    return g;
  }

 private:
  static void check(Point p, Point q) {
    if (p == q) throw std::domain_error("angle map evaluated at coincident points");
  }
};

inline std::unique_ptr<AngleMap> make_angle_map(std::string_view id) {
  if (id == "harmonic") return std::make_unique<HarmonicAngle>();
  throw std::invalid_argument("unknown angle map '" + std::string(id) + "'");
}

}  // namespace kdq
