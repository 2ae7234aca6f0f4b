#pragma once

#include "kdq/polynomial.hpp"
#include "kdq/polyvector.hpp"
#include "kdq/rational.hpp"

#include <array>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace kdq {

class InvalidAlgebra : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Finite-dimensional Lie algebra given by exact structure constants
/// [e_i, e_j] = Σ_k c_{ij}^k e_k (0-based indices).
///
/// Antisymmetry is enforced at construction; the Jacobi identity is not (see jacobi_check).
class LieAlgebra {
 public:
  /// Dense constants, laid out as c[(i*dim + j)*dim + k].
  LieAlgebra(std::string name, std::size_t dim, std::vector<Rational> constants)
      : name_(std::move(name)), dim_(dim), c_(std::move(constants)) {
    if (dim_ == 0) throw InvalidAlgebra("Lie algebra dimension must be positive");
    if (c_.size() != dim_ * dim_ * dim_) throw InvalidAlgebra("structure constant table has wrong size");
    for (std::size_t i = 0; i < dim_; ++i)
      for (std::size_t j = 0; j < dim_; ++j)
        for (std::size_t k = 0; k < dim_; ++k)
          if (at(i, j, k) != -at(j, i, k))
            throw InvalidAlgebra("structure constants are not antisymmetric at (" + std::to_string(i + 1) + "," +
                                 std::to_string(j + 1) + "," + std::to_string(k + 1) + ")");
  }

  /// Builds the table from brackets [e_i,e_j] given for i<j only.
  static LieAlgebra from_brackets(std::string name, std::size_t dim,
                                  const std::map<std::pair<std::size_t, std::size_t>,
                                                 std::map<std::size_t, Rational>>& brackets) {
    std::vector<Rational> c(dim * dim * dim);
    for (const auto& [ij, rhs] : brackets) {
      auto [i, j] = ij;
      if (i >= j) throw InvalidAlgebra("bracket keys must satisfy i < j");
      if (j >= dim) throw InvalidAlgebra("bracket index out of range");
      for (const auto& [k, v] : rhs) {
        if (k >= dim) throw InvalidAlgebra("bracket result index out of range");
        c[(i * dim + j) * dim + k] = v;
        c[(j * dim + i) * dim + k] = -v;
      }
    }
    return LieAlgebra(std::move(name), dim, std::move(c));
  }

  static LieAlgebra abelian(std::size_t dim) {
    return LieAlgebra("abelian" + std::to_string(dim), dim, std::vector<Rational>(dim * dim * dim));
  }

  const std::string& name() const { return name_; }
  std::size_t dim() const { return dim_; }
  const Rational& constant(std::size_t i, std::size_t j, std::size_t k) const { return at(i, j, k); }
  const std::vector<Rational>& constants() const { return c_; }

  bool is_abelian() const {
    for (const auto& v : c_)
      if (v != 0) return false;
    return true;
  }

  /// Σ_k c_{ij}^k e_k as a coefficient vector.
  std::vector<Rational> bracket_basis(std::size_t i, std::size_t j) const {
    std::vector<Rational> out(dim_);
    for (std::size_t k = 0; k < dim_; ++k) out[k] = at(i, j, k);
    return out;
  }

  /// Bracket of two elements written in the basis.
  template <class S>
  std::vector<S> bracket(const std::vector<S>& x, const std::vector<S>& y) const {
    std::vector<S> out(dim_, S(0));
    for (std::size_t i = 0; i < dim_; ++i)
      for (std::size_t j = 0; j < dim_; ++j) {
        if (x[i] == S(0) || y[j] == S(0)) continue;
        for (std::size_t k = 0; k < dim_; ++k)
          if (at(i, j, k) != 0) out[k] += x[i] * y[j] * convert<S>(at(i, j, k));
      }
    return out;
  }

  friend bool operator==(const LieAlgebra& a, const LieAlgebra& b) { return a.dim_ == b.dim_ && a.c_ == b.c_; }

 private:
  template <class S>
  static S convert(const Rational& r) {
    if constexpr (std::is_same_v<S, Rational>)
      return r;
    else
      return static_cast<S>(to_double(r));
  }

  const Rational& at(std::size_t i, std::size_t j, std::size_t k) const { return c_[(i * dim_ + j) * dim_ + k]; }

  std::string name_;
  std::size_t dim_;
  std::vector<Rational> c_;
};

struct JacobiReport {
  bool holds = true;
  /// Quadruples (i,j,k,l), 0-based with i<j<k, where
  /// Σ_m (c_{ij}^m c_{mk}^l + c_{jk}^m c_{mi}^l + c_{ki}^m c_{mj}^l) ≠ 0.
  std::vector<std::array<std::size_t, 4>> violations;
};

/// Exact check of the Jacobi identity. Only i<j<k need testing: the cyclic sum is totally
/// antisymmetric in (i,j,k) once the constants are antisymmetric.
inline JacobiReport jacobi_check(const LieAlgebra& L) {
  JacobiReport report;
  const std::size_t d = L.dim();
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = i + 1; j < d; ++j)
      for (std::size_t k = j + 1; k < d; ++k)
        for (std::size_t l = 0; l < d; ++l) {
          Rational s = 0;
          for (std::size_t m = 0; m < d; ++m) {
            s += L.constant(i, j, m) * L.constant(m, k, l);
            s += L.constant(j, k, m) * L.constant(m, i, l);
            s += L.constant(k, i, m) * L.constant(m, j, l);
          }
          if (s != 0) {
            report.holds = false;
            report.violations.push_back({i, j, k, l});
          }
        }
  return report;
}

/// Kirillov–Poisson bivector on 𝔤*: α^{ij} = Σ_k c_{ij}^k x_k for i<j.
inline PolyVectorField<Rational> poisson_bivector(const LieAlgebra& L) {
  const std::size_t d = L.dim();
  PolyVectorField<Rational> alpha(d, 2);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = i + 1; j < d; ++j) {
      Polynomial<Rational> p(d);
      for (std::size_t k = 0; k < d; ++k)
        if (L.constant(i, j, k) != 0) p += Polynomial<Rational>::variable(d, k) * L.constant(i, j, k);
      if (!p.is_zero()) alpha.add_component({i, j}, p);
    }
  return alpha;
}

/// Poisson bracket {f,g} = Σ_{i,j} α^{ij} ∂_i f ∂_j g of the linear structure.
inline Polynomial<Rational> poisson_bracket(const LieAlgebra& L, const Polynomial<Rational>& f,
                                            const Polynomial<Rational>& g) {
  const std::size_t d = L.dim();
  Polynomial<Rational> out(d);
  for (std::size_t i = 0; i < d; ++i) {
    auto fi = f.partial(i);
    if (fi.is_zero()) continue;
    for (std::size_t j = 0; j < d; ++j) {
      if (i == j) continue;
      auto gj = g.partial(j);
      if (gj.is_zero()) continue;
      Polynomial<Rational> coeff(d);
      for (std::size_t k = 0; k < d; ++k)
        if (L.constant(i, j, k) != 0) coeff += Polynomial<Rational>::variable(d, k) * L.constant(i, j, k);
      out += coeff * fi * gj;
    }
  }
  return out;
}

}  // namespace kdq
