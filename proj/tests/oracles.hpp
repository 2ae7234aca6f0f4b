#pragma once

// Independent reference computations shared by the unit tests and the acceptance binary.

#include "kdq/graph.hpp"
#include "kdq/lie_algebra.hpp"
#include "kdq/polyvector.hpp"
#include "kdq/weights.hpp"

#include <boost/math/quadrature/gauss.hpp>

#include <array>
#include <cmath>
#include <numbers>
#include <random>
#include <set>
#include <string>
#include <vector>

namespace kdq::oracle {

/// Brute force over edge sets: every set of distinct (source, target) pairs, each star then
/// taken in all orders, deduplicated through a set of keys. Shares nothing with
/// enumerate_graphs beyond the key format.
inline std::set<std::string> graphs_by_edge_lists(std::size_t n, std::size_t m, std::size_t edges) {
  std::vector<std::pair<std::size_t, Vertex>> candidates;
  for (std::size_t s = 0; s < n; ++s) {
    for (std::uint32_t t = 0; t < n; ++t)
      if (t != s) candidates.push_back({s, Vertex::aerial(t)});
    for (std::uint32_t t = 0; t < m; ++t) candidates.push_back({s, Vertex::ground(t)});
  }
  std::set<std::string> keys;
  std::vector<std::size_t> chosen;
  auto rec = [&](auto&& self, std::size_t start) -> void {
    if (chosen.size() == edges) {
      // Distinct edges are chosen as a set; every ordering within each star gives a graph.
      std::vector<std::vector<Vertex>> stars(n);
      for (auto c : chosen) stars[candidates[c].first].push_back(candidates[c].second);
      std::vector<std::vector<std::vector<Vertex>>> orderings(n);
      for (std::size_t k = 0; k < n; ++k) {
        auto s = stars[k];
        std::sort(s.begin(), s.end());
        do orderings[k].push_back(s);
        while (std::next_permutation(s.begin(), s.end()));
      }
      std::vector<std::size_t> pick(n, 0);
      while (true) {
        std::vector<std::vector<Vertex>> g(n);
        for (std::size_t k = 0; k < n; ++k) g[k] = orderings[k][pick[k]];
        keys.insert(AdmissibleGraph(n, m, g).key().text);
        std::size_t k = 0;
        while (k < n && ++pick[k] == orderings[k].size()) pick[k++] = 0;
        if (k == n) break;
      }
      return;
    }
    for (std::size_t c = start; c < candidates.size(); ++c) {
      chosen.push_back(c);
      self(self, c + 1);
      chosen.pop_back();
    }
  };
  rec(rec, 0);
  return keys;
}

/// Deterministic tensor Gauss–Legendre quadrature of a one-aerial-vertex, two-ground-vertex
/// weight over the upper half-plane (q₁ = 0, q₂ = 1), with x = tan(π(u−½)), y = tan(πv/2).
/// Panel edges sit on the images of the integrable singular points x = 0 and x = 1.
inline double half_plane_weight(const AdmissibleGraph& g, const AngleMap& angle, std::size_t panels = 64) {
  using boost::math::quadrature::gauss;
  constexpr double pi = std::numbers::pi;
  const auto& nodes = gauss<double, 10>::abscissa();
  const auto& weights = gauss<double, 10>::weights();
  // Symmetric rule stored as non-negative abscissae; expand to the full set on [-1, 1].
  std::vector<std::pair<double, double>> rule;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    rule.push_back({nodes[i], weights[i]});
    if (nodes[i] != 0.0) rule.push_back({-nodes[i], weights[i]});
  }
  double total = 0.0;
  const double h = 1.0 / static_cast<double>(panels);
  for (std::size_t pu = 0; pu < panels; ++pu)
    for (std::size_t pv = 0; pv < panels; ++pv)
      for (const auto& [a, wa] : rule)
        for (const auto& [b, wb] : rule) {
          double u = (pu + 0.5 * (a + 1.0)) * h, v = (pv + 0.5 * (b + 1.0)) * h;
          double x = std::tan(pi * (u - 0.5)), y = std::tan(pi * v / 2.0);
          double jac = pi / std::pow(std::cos(pi * (u - 0.5)), 2) * (pi / 2.0) / std::pow(std::cos(pi * v / 2.0), 2);
          Configuration c{{Point(x, y)}, {0.0, 1.0}};
          total += 0.25 * h * h * wa * wb * jac * integrand(g, c, angle);
        }
  return to_double(star_factorial_factor(g)) * total / std::pow(2.0 * pi, static_cast<double>(g.edge_count()));
}

/// Structure constants transported by an invertible change of basis e'_i = Σ_j A_ij e_j.
/// Lie algebras stay Lie algebras, so this produces Jacobi-satisfying sets independently of
/// jacobi_check.
inline LieAlgebra change_basis(const LieAlgebra& L, const std::vector<std::vector<Rational>>& A) {
  const std::size_t d = L.dim();
  // Inverse of A by Gauss–Jordan over the rationals.
  std::vector<std::vector<Rational>> M = A, inv(d, std::vector<Rational>(d));
  for (std::size_t i = 0; i < d; ++i) inv[i][i] = 1;
  for (std::size_t col = 0; col < d; ++col) {
    std::size_t piv = col;
    while (piv < d && M[piv][col] == 0) ++piv;
    if (piv == d) throw std::invalid_argument("singular change of basis");
    std::swap(M[piv], M[col]);
    std::swap(inv[piv], inv[col]);
    Rational s = 1 / M[col][col];
    for (std::size_t j = 0; j < d; ++j) {
      M[col][j] *= s;
      inv[col][j] *= s;
    }
    for (std::size_t r = 0; r < d; ++r) {
      if (r == col || M[r][col] == 0) continue;
      Rational f = M[r][col];
      for (std::size_t j = 0; j < d; ++j) {
        M[r][j] -= f * M[col][j];
        inv[r][j] -= f * inv[col][j];
      }
    }
  }
  std::vector<Rational> c(d * d * d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) {
      // [e'_i, e'_j] in the old basis, then re-expressed in the new one.
      std::vector<Rational> old(d);
      for (std::size_t a = 0; a < d; ++a)
        for (std::size_t b = 0; b < d; ++b) {
          if (A[i][a] == 0 || A[j][b] == 0) continue;
          for (std::size_t k = 0; k < d; ++k) old[k] += A[i][a] * A[j][b] * L.constant(a, b, k);
        }
      for (std::size_t l = 0; l < d; ++l)
        for (std::size_t k = 0; k < d; ++k) c[(i * d + j) * d + l] += old[k] * inv[k][l];
    }
  return LieAlgebra(L.name() + "'", d, c);
}

/// U_Γ by direct summation over all d^E index assignments, applying one partial derivative
/// per edge. Written independently of evaluate_graph_operator.
template <class T>
Polynomial<T> naive_graph_operator(const AdmissibleGraph& g, const std::vector<PolyVectorField<T>>& fields,
                                   const std::vector<Polynomial<T>>& functions) {
  const std::size_t d = functions.empty() ? fields.at(0).dim() : functions[0].dim();
  const auto edges = g.edges();
  Polynomial<T> total(d);
  for (std::size_t k = 0; k < g.n(); ++k)
    if (fields[k].degree() != g.star(k).size()) return total;
  std::vector<std::size_t> idx(edges.size(), 0);
  while (true) {
    std::vector<Polynomial<T>> factors;
    std::size_t e = 0;
    for (std::size_t k = 0; k < g.n(); ++k) {
      std::vector<std::size_t> local;
      for (std::size_t a = 0; a < g.star(k).size(); ++a) local.push_back(idx[e + a]);
      e += g.star(k).size();
      factors.push_back(fields[k].pairing(local));
    }
    for (const auto& f : functions) factors.push_back(f);
    for (std::size_t a = 0; a < edges.size(); ++a) {
      const Vertex t = edges[a].target;
      auto& f = factors[t.is_aerial() ? t.index : g.n() + t.index];
      f = f.partial(idx[a]);
    }
    Polynomial<T> prod = Polynomial<T>::constant(d, T(1));
    for (const auto& f : factors) prod = prod * f;
    total += prod;
    std::size_t pos = 0;
    while (pos < idx.size() && ++idx[pos] == d) idx[pos++] = 0;
    if (pos == idx.size()) break;
  }
  return total;
}

}  // namespace kdq::oracle
