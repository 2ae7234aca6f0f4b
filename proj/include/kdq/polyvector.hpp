#pragma once

#include "kdq/polynomial.hpp"

#include <algorithm>
#include <map>
#include <span>
#include <vector>

namespace kdq {

/// Strictly increasing coordinate indices (0-based) labelling ∂_{i1}∧…∧∂_{ik}.
using IndexTuple = std::vector<std::size_t>;

/// Sorts `indices` in place and returns the sign of the sorting permutation, or 0 if an
/// index repeats.
inline int sort_with_sign(std::vector<std::size_t>& indices) {
  int sign = 1;
  for (std::size_t i = 1; i < indices.size(); ++i) {
    for (std::size_t j = i; j > 0 && indices[j - 1] >= indices[j]; --j) {
      if (indices[j - 1] == indices[j]) return 0;
      std::swap(indices[j - 1], indices[j]);
      sign = -sign;
    }
  }
  for (std::size_t i = 1; i < indices.size(); ++i)
    if (indices[i - 1] == indices[i]) return 0;
  return sign;
}

/// Polyvector field Σ_{i1<…<ik} γ^{i1…ik}(x) ∂_{i1}∧…∧∂_{ik} with polynomial coefficients.
///
/// A degree-0 field is a function (stored under the empty tuple).
template <class T>
class PolyVectorField {
 public:
  PolyVectorField(std::size_t dim, std::size_t degree) : dim_(dim), degree_(degree) {}

  static PolyVectorField function(const Polynomial<T>& f) {
    PolyVectorField out(f.dim(), 0);
    out.add_component({}, f);
    return out;
  }

  std::size_t dim() const { return dim_; }
  std::size_t degree() const { return degree_; }
  const std::map<IndexTuple, Polynomial<T>>& components() const { return components_; }
  bool is_zero() const { return components_.empty(); }

  /// Adds f·∂_{i1}∧…∧∂_{ik} for an arbitrary ordering of distinct indices; the sign of
  /// the reordering is absorbed.
  void add_component(IndexTuple indices, const Polynomial<T>& f) {
    if (indices.size() != degree_) throw DimensionError("component index tuple has wrong degree");
    if (f.dim() != dim_) throw DimensionError("component polynomial has wrong dimension");
    for (auto i : indices)
      if (i >= dim_) throw DimensionError("component index out of range");
    int sign = sort_with_sign(indices);
    if (sign == 0) throw std::invalid_argument("repeated index in polyvector component");
    auto& slot = components_.try_emplace(indices, Polynomial<T>(dim_)).first->second;
    if (sign > 0)
      slot += f;
    else
      slot -= f;
    if (slot.is_zero()) components_.erase(indices);
  }

  /// ⟨γ, dx^{j1}⊗…⊗dx^{jk}⟩ under ξ1∧…∧ξk ↦ Σ_σ sgn(σ) ξ_{σ1}⊗…⊗ξ_{σk}: the stored
  /// component times the sign of the permutation sorting (j1,…,jk), zero on repeats.
  Polynomial<T> pairing(std::span<const std::size_t> indices) const {
    if (indices.size() != degree_) throw DimensionError("pairing arity does not match field degree");
    IndexTuple sorted(indices.begin(), indices.end());
    int sign = sort_with_sign(sorted);
    if (sign == 0) return Polynomial<T>(dim_);
    auto it = components_.find(sorted);
    if (it == components_.end()) return Polynomial<T>(dim_);
    return sign > 0 ? it->second : -it->second;
  }

  /// Same as pairing() but returns a pointer to the stored component and the sign, avoiding
  /// a copy in hot loops. Returns {nullptr, 0} for a vanishing pairing.
  std::pair<const Polynomial<T>*, int> pairing_ref(std::span<const std::size_t> indices) const {
    IndexTuple sorted(indices.begin(), indices.end());
    int sign = sort_with_sign(sorted);
    if (sign == 0) return {nullptr, 0};
    auto it = components_.find(sorted);
    if (it == components_.end()) return {nullptr, 0};
    return {&it->second, sign};
  }

  friend bool operator==(const PolyVectorField& a, const PolyVectorField& b) {
    return a.dim_ == b.dim_ && a.degree_ == b.degree_ && a.components_ == b.components_;
  }

 private:
  std::size_t dim_;
  std::size_t degree_;
  std::map<IndexTuple, Polynomial<T>> components_;
};

/// Schouten bracket of two bivector fields, as a trivector:
///   [a,b]^{ijk} = Σ_l Σ_{cyclic (ijk)} ( a^{li} ∂_l b^{jk} + b^{li} ∂_l a^{jk} ),
/// with a^{li} the full antisymmetric coefficient matrix. [α,α] = 0 is the Jacobi identity
/// for the bracket {x_i,x_j} = α^{ij}.
template <class T>
PolyVectorField<T> schouten_bracket_bivectors(const PolyVectorField<T>& a, const PolyVectorField<T>& b) {
  if (a.degree() != 2 || b.degree() != 2) throw DimensionError("schouten_bracket_bivectors needs two bivectors");
  if (a.dim() != b.dim()) throw DimensionError("bivector dimension mismatch");
  const std::size_t d = a.dim();
  PolyVectorField<T> out(d, 3);
  auto coeff = [](const PolyVectorField<T>& f, std::size_t i, std::size_t j) {
    std::size_t idx[2] = {i, j};
    return f.pairing(idx);
  };
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = i + 1; j < d; ++j)
      for (std::size_t k = j + 1; k < d; ++k) {
        Polynomial<T> total(d);
        const std::size_t cyc[3][3] = {{i, j, k}, {j, k, i}, {k, i, j}};
        for (const auto& c : cyc)
          for (std::size_t l = 0; l < d; ++l) {
            total += coeff(a, l, c[0]) * coeff(b, c[1], c[2]).partial(l);
            total += coeff(b, l, c[0]) * coeff(a, c[1], c[2]).partial(l);
          }
        if (!total.is_zero()) out.add_component({i, j, k}, total);
      }
  return out;
}

}  // namespace kdq
