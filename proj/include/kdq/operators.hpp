#pragma once

#include "kdq/graph.hpp"
#include "kdq/polynomial.hpp"
#include "kdq/polyvector.hpp"

#include <algorithm>
#include <numeric>
#include <span>
#include <vector>

namespace kdq {

/// U_Γ(γ₁⊗…⊗γ_n)(f₁⊗…⊗f_m) on polynomial inputs.
///
/// Sums over index assignments I: E_Γ → {1..d}. Vertex k carries the coefficient
/// ⟨γ_k, dx^{I(e_k¹)}⊗…⟩ (skew identification, no extra normalization), ground vertex j
/// carries f_j; every vertex is differentiated by ∂_{I(e)} for each incoming edge e and the
/// results are multiplied. The operator has a single graded component: if #Star(k) ≠ deg γ_k
/// for some k the result is zero.
template <class T>
Polynomial<T> evaluate_graph_operator(const AdmissibleGraph& g, std::span<const PolyVectorField<T>> fields,
                                      std::span<const Polynomial<T>> functions) {
  if (fields.size() != g.n()) throw DimensionError("number of polyvector fields must equal the first-type vertex count");
  if (functions.size() != g.m()) throw DimensionError("number of functions must equal the second-type vertex count");
  std::size_t d = 0;
  if (!fields.empty())
    d = fields[0].dim();
  else if (!functions.empty())
    d = functions[0].dim();
  for (const auto& f : fields)
    if (f.dim() != d) throw DimensionError("polyvector field dimension mismatch");
  for (const auto& f : functions)
    if (f.dim() != d) throw DimensionError("function dimension mismatch");

  Polynomial<T> result(d);
  for (std::size_t k = 0; k < g.n(); ++k)
    if (fields[k].degree() != g.star(k).size()) return result;
  for (const auto& f : fields)
    if (f.is_zero()) return result;
  for (const auto& f : functions)
    if (f.is_zero()) return result;

  const std::size_t n = g.n(), m = g.m();
  auto slot = [n](Vertex v) { return v.is_aerial() ? v.index : n + v.index; };

  std::vector<const Polynomial<T>*> coefficient(n, nullptr);
  std::vector<int> sign(n, 1);
  std::vector<Exponent> orders(n + m, Exponent(d, 0));

  // Picks the indices on vertex k's star, then recurses. Incoming derivative orders are
  // accumulated as edges are assigned so the leaf only multiplies.
  auto assign = [&](auto&& self, std::size_t k) -> void {
    if (k == n) {
      int total_sign = 1;
      Polynomial<T> term = Polynomial<T>::constant(d, T(1));
      for (std::size_t v = 0; v < n + m; ++v) {
        const Polynomial<T>& base = v < n ? *coefficient[v] : functions[v - n];
        if (v < n) total_sign *= sign[v];
        Polynomial<T> dv = base.derivative(orders[v]);
        if (dv.is_zero()) return;
        term = term * dv;
      }
      if (total_sign > 0)
        result += term;
      else
        result -= term;
      return;
    }
    const auto& star = g.star(k);
    const std::size_t s = star.size();
    std::vector<std::size_t> local(s, 0);
    // Odometer over {0..d-1}^s.
    while (true) {
      auto [coef, sg] = fields[k].pairing_ref(local);
      if (coef) {
        for (std::size_t a = 0; a < s; ++a) ++orders[slot(star[a])][local[a]];
        coefficient[k] = coef;
        sign[k] = sg;
        self(self, k + 1);
        for (std::size_t a = 0; a < s; ++a) --orders[slot(star[a])][local[a]];
      }
      std::size_t pos = 0;
      while (pos < s && ++local[pos] == d) local[pos++] = 0;
      if (pos == s) break;
    }
  };
  assign(assign, 0);
  return result;
}

/// U₁(γ)(f₁,…,f_k) assembled from the n = 1 graphs (each star a permutation σ of the k
/// ground vertices) with their closed-form weights sgn(σ)/(k!)². The unsigned weight is the
/// 1/k! star factor times the normalized volume of the angle simplex 0<θ₁<…<θ_k<2π.
template <class T>
Polynomial<T> hkr_component(const PolyVectorField<T>& gamma, std::span<const Polynomial<T>> functions) {
  const std::size_t k = gamma.degree();
  if (functions.size() != k) throw DimensionError("HKR component needs as many functions as the field degree");
  std::vector<std::uint32_t> perm(k);
  std::iota(perm.begin(), perm.end(), 0u);
  Integer kfact = 1;
  for (std::size_t i = 2; i <= k; ++i) kfact *= static_cast<unsigned>(i);
  const T unit_weight = T(Rational(Integer(1), kfact * kfact));
  Polynomial<T> out(gamma.dim());
  const PolyVectorField<T> field[1] = {gamma};
  do {
    std::vector<Vertex> star;
    int parity = 1;
    for (std::size_t a = 0; a < k; ++a) {
      star.push_back(Vertex::ground(perm[a]));
      for (std::size_t b = a + 1; b < k; ++b)
        if (perm[a] > perm[b]) parity = -parity;
    }
    AdmissibleGraph g(1, k, {star});
    auto u = evaluate_graph_operator<T>(g, field, functions);
    if (parity > 0)
      out += u * unit_weight;
    else
      out -= u * unit_weight;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return out;
}

}  // namespace kdq
