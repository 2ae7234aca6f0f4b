#pragma once

#include "kdq/angle.hpp"
#include "kdq/graph.hpp"
#include "kdq/polynomial.hpp"
#include "kdq/qmc.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace kdq {

/// Numerical value of W_Γ, normalization included.
struct Weight {
  GraphKey graph_key;
  std::string angle_map;
  double value = 0.0;
  double std_error = 0.0;
  std::size_t samples = 0;
  std::uint64_t seed = 0;
};

/// Point of Conf⁺_{n,m}: aerial points in the open upper half-plane, increasing ground points.
struct Configuration {
  std::vector<Point> aerial;
  std::vector<double> ground;

  void validate() const {
    for (std::size_t i = 0; i < aerial.size(); ++i) {
      if (!(aerial[i].imag() > 0.0)) throw std::domain_error("aerial point not in the open upper half-plane");
      for (std::size_t j = 0; j < i; ++j)
        if (aerial[i] == aerial[j]) throw std::domain_error("coincident aerial points");
    }
    for (std::size_t j = 1; j < ground.size(); ++j)
      if (!(ground[j - 1] < ground[j])) throw std::domain_error("ground points must be strictly increasing");
  }

  Point position(Vertex v) const { return v.is_aerial() ? aerial.at(v.index) : Point(ground.at(v.index), 0.0); }
};

/// How the two real parameters of z ↦ az+b are spent.
///
/// standard: m ≥ 2 fixes q₁=0, q₂=1 (free: every aerial point as (Re, Im), then q₃…q_m);
///           m = 1 fixes q₁=0 and |p₁|=1 (free: arg p₁, then p₂…p_n);
///           m = 0 fixes p₁ = i (free: p₂…p_n).
/// aerial_fixed (m ≥ 2 only): p₁ = i (free: p₂…p_n, then q₁ < … < q_m), reoriented to agree
///           with the standard chart.
enum class Gauge { standard, aerial_fixed };

namespace detail {

/// Coordinates of the gauge-fixed configuration space and their relation to points.
class Chart {
 public:
  enum class Role { fixed, planar, circle };

  Chart(std::size_t n, std::size_t m, Gauge gauge) : n_(n), m_(m), gauge_(gauge) {
    aerial_role_.assign(n, Role::planar);
    aerial_coord_.assign(n, -1);
    ground_coord_.assign(m, -1);
    int next = 0;
    if (gauge == Gauge::standard) {
      if (m >= 2) {
        for (std::size_t k = 0; k < n; ++k, next += 2) aerial_coord_[k] = next;
        for (std::size_t j = 2; j < m; ++j) ground_coord_[j] = next++;
      } else if (m == 1) {
        aerial_role_[0] = Role::circle;
        aerial_coord_[0] = next++;
        for (std::size_t k = 1; k < n; ++k, next += 2) aerial_coord_[k] = next;
      } else {
        aerial_role_[0] = Role::fixed;
        for (std::size_t k = 1; k < n; ++k, next += 2) aerial_coord_[k] = next;
      }
    } else {
      if (m < 2) throw std::invalid_argument("aerial_fixed gauge requires at least two ground vertices");
      aerial_role_[0] = Role::fixed;
      for (std::size_t k = 1; k < n; ++k, next += 2) aerial_coord_[k] = next;
      for (std::size_t j = 0; j < m; ++j) ground_coord_[j] = next++;
    }
    dim_ = static_cast<std::size_t>(next);
  }

  std::size_t dim() const { return dim_; }
  Gauge gauge() const { return gauge_; }

  /// Maps free coordinates to a configuration.
  Configuration configuration(std::span<const double> x) const {
    Configuration c;
    c.aerial.resize(n_);
    c.ground.resize(m_);
    for (std::size_t k = 0; k < n_; ++k) {
      switch (aerial_role_[k]) {
        case Role::fixed: c.aerial[k] = Point(0.0, 1.0); break;
        case Role::circle: c.aerial[k] = std::polar(1.0, x[aerial_coord_[k]]); break;
        case Role::planar: c.aerial[k] = Point(x[aerial_coord_[k]], x[aerial_coord_[k] + 1]); break;
      }
    }
    for (std::size_t j = 0; j < m_; ++j) {
      if (ground_coord_[j] >= 0)
        c.ground[j] = x[ground_coord_[j]];
      else
        c.ground[j] = static_cast<double>(j);  // q₁ = 0, q₂ = 1 in the standard gauge
    }
    return c;
  }

  /// Adds the gradient of a function of a point to the row, given ∂/∂Re and ∂/∂Im.
  void accumulate(Vertex v, const Configuration& c, double d_re, double d_im, double* row) const {
    if (v.is_ground()) {
      int idx = ground_coord_[v.index];
      if (idx >= 0) row[idx] += d_re;
      return;
    }
    int idx = aerial_coord_[v.index];
    switch (aerial_role_[v.index]) {
      case Role::fixed: break;
      case Role::planar:
        row[idx] += d_re;
        row[idx + 1] += d_im;
        break;
      case Role::circle: {
        Point p = c.aerial[v.index];
        row[idx] += -p.imag() * d_re + p.real() * d_im;
        break;
      }
    }
  }

  /// Maps a point of the unit cube to free coordinates; returns the Jacobian factor.
  double from_unit_cube(std::span<const double> u, std::span<double> x) const {
    double jac = 1.0;
    constexpr double pi = std::numbers::pi;
    auto real_line = [&](double s) {
      double t = pi * (s - 0.5);
      double c = std::cos(t);
      jac *= pi / (c * c);
      return std::tan(t);
    };
    auto half_line = [&](double s) {
      jac *= 1.0 / ((1.0 - s) * (1.0 - s));
      return s / (1.0 - s);
    };
    for (std::size_t k = 0; k < n_; ++k) {
      int idx = aerial_coord_[k];
      switch (aerial_role_[k]) {
        case Role::fixed: break;
        case Role::circle:
          x[idx] = pi * u[idx];
          jac *= pi;
          break;
        case Role::planar:
          if (gauge_ == Gauge::standard && m_ >= 2) {
            jac *= angle_chart_point(u[idx], u[idx + 1], x[idx], x[idx + 1]);
          } else {
            x[idx] = real_line(u[idx]);
            x[idx + 1] = half_line(u[idx + 1]);
          }
          break;
      }
    }
    // Ground coordinates are increasing: the first free one ranges over its whole allowed
    // interval, each later one is the previous plus a positive gap.
    double previous = 1.0;
    bool first = true;
    for (std::size_t j = 0; j < m_; ++j) {
      int idx = ground_coord_[j];
      if (idx < 0) continue;
      if (first && gauge_ == Gauge::aerial_fixed)
        x[idx] = real_line(u[idx]);
      else
        x[idx] = previous + half_line(u[idx]);
      previous = x[idx];
      first = false;
    }
    return jac;
  }

 private:
  /// Samples p ∈ H through its half-angles (a₁, a₂) seen from the fixed ground points 0 and 1:
  /// p is the apex of the triangle (0, 1, p) with angle a₁ at 0 and π−a₂ at 1, so
  /// p = e^{i a₁}·sin a₂ / sin(a₂−a₁). The unit square folds onto 0 < a₁ < a₂ < π. The
  /// Jacobian |p|²|p−1|²/y·π²/2 cancels the 1/|p−q| growth of angle forms at q = 0 and q = 1.
  static double angle_chart_point(double u1, double u2, double& re, double& im) {
    constexpr double pi = std::numbers::pi;
    const double a1 = pi * std::min(u1, u2);
    const double a2 = pi * std::max(u1, u2);
    const double s = std::sin(a2 - a1);
    if (!(s > 0.0)) return std::numeric_limits<double>::quiet_NaN();
    const double radius = std::sin(a2) / s;
    re = radius * std::cos(a1);
    im = radius * std::sin(a1);
    const double r1 = re * re + im * im;
    const double r2 = (re - 1.0) * (re - 1.0) + im * im;
    return r1 * r2 / im * (pi * pi / 2.0);
  }

  std::size_t n_, m_;
  Gauge gauge_;
  std::size_t dim_ = 0;
  std::vector<Role> aerial_role_;
  std::vector<int> aerial_coord_;
  std::vector<int> ground_coord_;
};

using SmallMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor, 12, 12>;

inline double angle_form_density(const std::vector<Edge>& edges, const Configuration& c, const AngleMap& angle,
                                 const Chart& chart) {
  const auto e = static_cast<Eigen::Index>(edges.size());
  if (e == 0) return 1.0;
  SmallMatrix J = SmallMatrix::Zero(e, e);
  for (Eigen::Index r = 0; r < e; ++r) {
    const Edge& edge = edges[static_cast<std::size_t>(r)];
    const Vertex src = Vertex::aerial(edge.source);
    AngleGradient grad = angle.gradient(c.position(src), c.position(edge.target));
    double* row = &J(r, 0);
    chart.accumulate(src, c, grad.dp_re, grad.dp_im, row);
    chart.accumulate(edge.target, c, grad.dq_re, grad.dq_im, row);
  }
  return J.partialPivLu().determinant();
}

/// Sign of the orientation of the aerial_fixed chart relative to the standard chart, found
/// from the transition Jacobian at a reference point (constant on the connected domain).
inline double aerial_fixed_orientation(std::size_t n, std::size_t m) {
  Chart fixed(n, m, Gauge::aerial_fixed);
  Chart standard(n, m, Gauge::standard);
  const std::size_t dim = fixed.dim();
  std::vector<double> ref(dim);
  for (std::size_t k = 1; k < n; ++k) {
    ref[2 * (k - 1)] = 0.37 * static_cast<double>(k) - 0.2;
    ref[2 * (k - 1) + 1] = 0.5 + 0.61 * static_cast<double>(k);
  }
  for (std::size_t j = 0; j < m; ++j) ref[2 * (n - 1) + j] = -0.7 + 0.9 * static_cast<double>(j);

  auto to_standard = [&](std::span<const double> y) {
    Configuration c = fixed.configuration(y);
    const double q1 = c.ground[0], scale = c.ground[1] - c.ground[0];
    std::vector<double> x(dim);
    for (std::size_t k = 0; k < n; ++k) {
      Point z = (c.aerial[k] - q1) / scale;
      x[2 * k] = z.real();
      x[2 * k + 1] = z.imag();
    }
    for (std::size_t j = 2; j < m; ++j) x[2 * n + j - 2] = (c.ground[j] - q1) / scale;
    return x;
  };
  SmallMatrix T(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  const double h = 1e-6;
  for (std::size_t col = 0; col < dim; ++col) {
    auto plus = ref, minus = ref;
    plus[col] += h;
    minus[col] -= h;
    auto xp = to_standard(plus), xm = to_standard(minus);
    for (std::size_t row = 0; row < dim; ++row)
      T(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col)) = (xp[row] - xm[row]) / (2 * h);
  }
  return T.partialPivLu().determinant() > 0 ? 1.0 : -1.0;
}

}  // namespace detail

/// Density of ⋀_e dφ_e with respect to the free coordinates of the gauge: the determinant
/// of the E×E matrix whose row e is the gradient of φ_e, rows in global edge order.
inline double integrand(const AdmissibleGraph& g, const Configuration& c, const AngleMap& angle,
                        Gauge gauge = Gauge::standard) {
  if (g.top_degree() < 0 || g.edge_count() != static_cast<std::size_t>(g.top_degree()))
    throw DimensionError("graph has " + std::to_string(g.edge_count()) + " edges but the configuration space has dimension 2n+m-2 = " +
                         std::to_string(g.top_degree()));
  if (c.aerial.size() != g.n() || c.ground.size() != g.m())
    throw DimensionError("configuration does not match the graph's vertex counts");
  c.validate();
  detail::Chart chart(g.n(), g.m(), gauge);
  if (gauge == Gauge::standard && g.m() >= 2 && (c.ground[0] != 0.0 || c.ground[1] != 1.0))
    throw std::domain_error("configuration is not in the standard gauge (q1 = 0, q2 = 1)");
  return detail::angle_form_density(g.edges(), c, angle, chart);
}

/// W_Γ = ∏_k 1/(#Star(k))! · (2π)^{−(2n+m−2)} ∫_{C⁺_{n,m}} ⋀_e dφ_e, estimated by randomized
/// QMC. Deterministic in (graph, angle map, samples, seed, gauge).
inline Weight compute_weight(const AdmissibleGraph& g, const AngleMap& angle, std::size_t samples, std::uint64_t seed,
                             Gauge gauge = Gauge::standard) {
  if (g.n() == 0) throw std::invalid_argument("weights need at least one first-type vertex");
  if (2 * g.n() + g.m() < 2) throw DimensionError("empty configuration space (2n+m < 2)");
  if (g.edge_count() != static_cast<std::size_t>(g.top_degree()))
    throw DimensionError("graph " + g.key().text + " has " + std::to_string(g.edge_count()) +
                         " edges; weights need exactly 2n+m-2 = " + std::to_string(g.top_degree()));
  if (samples == 0) throw std::invalid_argument("sample count must be positive");

  Weight w;
  w.graph_key = g.key();
  w.angle_map = std::string(angle.id());
  w.seed = seed;

  const std::size_t edges = g.edge_count();
  const double normalization = to_double(star_factorial_factor(g)) *
                               std::pow(2.0 * std::numbers::pi, -static_cast<double>(edges));
  if (edges == 0) {
    // C⁺_{1,0} is a point.
    w.value = normalization;
    w.samples = effective_samples(samples);
    return w;
  }

  detail::Chart chart(g.n(), g.m(), gauge);
  const double orientation = gauge == Gauge::aerial_fixed ? detail::aerial_fixed_orientation(g.n(), g.m()) : 1.0;
  const auto edge_list = g.edges();
  std::vector<double> x(chart.dim());
  RqmcIntegrator rqmc(chart.dim(), samples, seed);
  QmcEstimate est = rqmc.integrate([&](std::span<const double> u) {
    double jac = chart.from_unit_cube(u, x);
    if (!std::isfinite(jac)) return 0.0;
    Configuration c = chart.configuration(x);
    // Measure-zero collisions (ties in floating point) contribute nothing.
    for (std::size_t i = 0; i < c.aerial.size(); ++i)
      for (std::size_t j = 0; j < i; ++j)
        if (c.aerial[i] == c.aerial[j]) return 0.0;
    for (std::size_t j = 1; j < c.ground.size(); ++j)
      if (!(c.ground[j - 1] < c.ground[j])) return 0.0;
    double v = detail::angle_form_density(edge_list, c, angle, chart) * jac;
    return std::isfinite(v) ? v : 0.0;
  });
  w.value = orientation * normalization * est.mean;
  w.std_error = std::abs(normalization) * est.std_error;
  w.samples = est.samples;
  return w;
}

}  // namespace kdq
