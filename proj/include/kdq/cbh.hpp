#pragma once

#include "kdq/lie_algebra.hpp"
#include "kdq/polynomial.hpp"
#include "kdq/rational.hpp"
#include "kdq/star.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace kdq {

// ---------------------------------------------------------------------------------------
// Free associative algebra on X, Y. Words are strings over {'X','Y'}.

class FreeAssoc {
 public:
  using term_map = std::map<std::string, Rational>;

  FreeAssoc() = default;
  static FreeAssoc word(std::string w, const Rational& c = 1) {
    FreeAssoc a;
    a.add(w, c);
    return a;
  }
  static FreeAssoc x() { return word("X"); }
  static FreeAssoc y() { return word("Y"); }
  static FreeAssoc one() { return word(""); }

  const term_map& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  void add(const std::string& w, const Rational& c) {
    if (c == 0) return;
    auto [it, inserted] = terms_.try_emplace(w, c);
    if (!inserted) {
      it->second += c;
      if (it->second == 0) terms_.erase(it);
    }
  }

  Rational coefficient(const std::string& w) const {
    auto it = terms_.find(w);
    return it == terms_.end() ? Rational(0) : it->second;
  }

  /// Part of word length exactly `degree`.
  FreeAssoc homogeneous(std::size_t degree) const {
    FreeAssoc out;
    for (const auto& [w, c] : terms_)
      if (w.size() == degree) out.terms_.emplace(w, c);
    return out;
  }

  FreeAssoc truncated(std::size_t max_degree) const {
    FreeAssoc out;
    for (const auto& [w, c] : terms_)
      if (w.size() <= max_degree) out.terms_.emplace(w, c);
    return out;
  }

  FreeAssoc& operator+=(const FreeAssoc& o) {
    for (const auto& [w, c] : o.terms_) add(w, c);
    return *this;
  }
  FreeAssoc& operator-=(const FreeAssoc& o) {
    for (const auto& [w, c] : o.terms_) add(w, -c);
    return *this;
  }
  FreeAssoc& operator*=(const Rational& s) {
    if (s == 0) terms_.clear();
    for (auto& [w, c] : terms_) c *= s;
    return *this;
  }
  friend FreeAssoc operator+(FreeAssoc a, const FreeAssoc& b) { return a += b; }
  friend FreeAssoc operator-(FreeAssoc a, const FreeAssoc& b) { return a -= b; }
  friend FreeAssoc operator*(FreeAssoc a, const Rational& s) { return a *= s; }
  friend FreeAssoc operator*(const Rational& s, FreeAssoc a) { return a *= s; }

  /// Product with words longer than max_degree dropped.
  static FreeAssoc multiply(const FreeAssoc& a, const FreeAssoc& b, std::size_t max_degree) {
    FreeAssoc out;
    for (const auto& [wa, ca] : a.terms_)
      for (const auto& [wb, cb] : b.terms_)
        if (wa.size() + wb.size() <= max_degree) out.add(wa + wb, ca * cb);
    return out;
  }
  friend FreeAssoc operator*(const FreeAssoc& a, const FreeAssoc& b) {
    return multiply(a, b, std::numeric_limits<std::size_t>::max());
  }

  static FreeAssoc commutator(const FreeAssoc& a, const FreeAssoc& b, std::size_t max_degree) {
    return multiply(a, b, max_degree) - multiply(b, a, max_degree);
  }

  friend bool operator==(const FreeAssoc&, const FreeAssoc&) = default;

 private:
  term_map terms_;
};

/// log(exp X · exp Y) by truncated power series, words of length ≤ max_degree.
inline FreeAssoc log_exp_exp(std::size_t max_degree) {
  auto exp_series = [&](const FreeAssoc& g) {
    FreeAssoc out = FreeAssoc::one(), power = FreeAssoc::one();
    for (std::size_t k = 1; k <= max_degree; ++k) {
      power = FreeAssoc::multiply(power, g, max_degree) * Rational(Integer(1), Integer(k));
      out += power;
    }
    return out;
  };
  FreeAssoc e = FreeAssoc::multiply(exp_series(FreeAssoc::x()), exp_series(FreeAssoc::y()), max_degree) - FreeAssoc::one();
  FreeAssoc out, power = FreeAssoc::one();
  for (std::size_t k = 1; k <= max_degree; ++k) {
    power = FreeAssoc::multiply(power, e, max_degree);
    out += power * Rational(Integer(k % 2 == 1 ? 1 : -1), Integer(k));
  }
  return out;
}

// ---------------------------------------------------------------------------------------
// Free Lie algebra on X, Y in right-nested bracket words.

/// [w₁,[w₂,[…,w_n]]] expanded in the free associative algebra.
inline FreeAssoc expand_right_nested(const std::string& w) {
  if (w.empty()) return {};
  FreeAssoc acc = FreeAssoc::word(std::string(1, w.back()));
  for (std::size_t i = w.size() - 1; i-- > 0;) {
    FreeAssoc letter = FreeAssoc::word(std::string(1, w[i]));
    acc = letter * acc - acc * letter;
  }
  return acc;
}

namespace detail {

/// Expresses homogeneous Lie elements of one length in a fixed basis of right-nested words.
class LieBasis {
 public:
  explicit LieBasis(std::size_t degree) {
    std::vector<std::string> candidates;
    if (degree == 1) {
      candidates = {"X", "Y"};
    } else {
      // [a,a] = 0 and [Y,X] = −[X,Y], so words ending in "XY" span; keep a greedy
      // independent subset in lexicographic order.
      for (std::size_t mask = 0; mask < (std::size_t(1) << (degree - 2)); ++mask) {
        std::string w;
        for (std::size_t i = degree - 2; i-- > 0;) w += (mask >> i) & 1 ? 'Y' : 'X';
        candidates.push_back(w + "XY");
      }
      std::sort(candidates.begin(), candidates.end());
    }
    width_ = candidates.size();
    for (const auto& w : candidates)
      if (try_insert(expand_right_nested(w))) basis_.push_back(w);
  }

  const std::vector<std::string>& basis() const { return basis_; }

  /// Coordinates of a homogeneous Lie element given by its associative expansion, or
  /// nullopt if it is outside the span.
  std::optional<std::vector<Rational>> coordinates(const FreeAssoc& a) const {
    FreeAssoc rest = a;
    std::vector<Rational> coords(width_);
    for (const auto& row : rows_) {
      Rational c = rest.coefficient(row.pivot);
      if (c == 0) continue;
      rest -= row.vector * c;
      for (std::size_t i = 0; i < width_; ++i) coords[i] += c * row.combination[i];
    }
    if (!rest.is_zero()) return std::nullopt;
    coords.resize(basis_.size());
    return coords;
  }

 private:
  // Reduced echelon rows: vector has coefficient 1 at pivot and 0 at every other pivot;
  // vector = Σ combination[i]·expand(basis_[i]).
  struct Row {
    std::string pivot;
    FreeAssoc vector;
    std::vector<Rational> combination;
  };

  bool try_insert(const FreeAssoc& v) {
    FreeAssoc rest = v;
    std::vector<Rational> comb(width_);
    comb[basis_.size()] = 1;
    for (const auto& row : rows_) {
      Rational c = rest.coefficient(row.pivot);
      if (c == 0) continue;
      rest -= row.vector * c;
      for (std::size_t i = 0; i < width_; ++i) comb[i] -= c * row.combination[i];
    }
    if (rest.is_zero()) return false;
    const std::string pivot = rest.terms().begin()->first;
    const Rational inv = 1 / rest.terms().begin()->second;
    rest *= inv;
    for (auto& c : comb) c *= inv;
    for (auto& row : rows_) {
      Rational c = row.vector.coefficient(pivot);
      if (c == 0) continue;
      row.vector -= rest * c;
      for (std::size_t i = 0; i < width_; ++i) row.combination[i] -= c * comb[i];
    }
    rows_.push_back({pivot, std::move(rest), std::move(comb)});
    return true;
  }

  std::size_t width_ = 0;
  std::vector<std::string> basis_;
  std::vector<Row> rows_;
};

inline const LieBasis& lie_basis(std::size_t degree) {
  static std::map<std::size_t, LieBasis> cache;
  auto it = cache.find(degree);
  if (it == cache.end()) it = cache.emplace(degree, LieBasis(degree)).first;
  return it->second;
}

}  // namespace detail

/// Rational combination of right-nested bracket words in X, Y, kept in normal form: each
/// homogeneous part is written in a fixed basis of right-nested words ending in "XY"
/// (plus "X", "Y" in degree one).
class FreeLieElement {
 public:
  using term_map = std::map<std::string, Rational>;

  FreeLieElement() = default;

  /// Normal form of a Lie element given by its associative expansion. Throws if the input
  /// is not a Lie element.
  static FreeLieElement from_associative(const FreeAssoc& a) {
    std::size_t max_len = 0;
    for (const auto& [w, c] : a.terms()) max_len = std::max(max_len, w.size());
    FreeLieElement out;
    if (a.coefficient("") != 0) throw std::invalid_argument("a Lie element has no constant term");
    for (std::size_t d = 1; d <= max_len; ++d) {
      auto part = a.homogeneous(d);
      if (part.is_zero()) continue;
      const auto& basis = detail::lie_basis(d);
      auto coords = basis.coordinates(part);
      if (!coords) throw std::invalid_argument("element of degree " + std::to_string(d) + " is not a Lie polynomial");
      for (std::size_t i = 0; i < coords->size(); ++i)
        if ((*coords)[i] != 0) out.terms_.emplace(basis.basis()[i], (*coords)[i]);
    }
    return out;
  }

  /// Normal form of Σ c_w [w₁,[…,w_n]] for arbitrary right-nested words.
  static FreeLieElement from_brackets(const term_map& brackets) {
    FreeAssoc a;
    for (const auto& [w, c] : brackets) a += expand_right_nested(w) * c;
    return from_associative(a);
  }

  const term_map& terms() const { return terms_; }
  Rational coefficient(const std::string& w) const {
    auto it = terms_.find(w);
    return it == terms_.end() ? Rational(0) : it->second;
  }

  FreeAssoc to_associative() const {
    FreeAssoc a;
    for (const auto& [w, c] : terms_) a += expand_right_nested(w) * c;
    return a;
  }

  /// Evaluates the brackets in L with X ↦ x, Y ↦ y.
  std::vector<Rational> evaluate(const LieAlgebra& L, const std::vector<Rational>& x,
                                 const std::vector<Rational>& y) const {
    std::vector<Rational> out(L.dim());
    for (const auto& [w, c] : terms_) {
      std::vector<Rational> acc = w.back() == 'X' ? x : y;
      for (std::size_t i = w.size() - 1; i-- > 0;) acc = L.bracket(w[i] == 'X' ? x : y, acc);
      for (std::size_t k = 0; k < out.size(); ++k) out[k] += c * acc[k];
    }
    return out;
  }

  friend bool operator==(const FreeLieElement&, const FreeLieElement&) = default;

 private:
  term_map terms_;
};

inline std::string to_string(const FreeLieElement& e) {
  if (e.terms().empty()) return "0";
  std::vector<std::pair<std::string, Rational>> terms(e.terms().begin(), e.terms().end());
  std::stable_sort(terms.begin(), terms.end(), [](const auto& a, const auto& b) { return a.first.size() < b.first.size(); });
  std::string out;
  for (const auto& [w, c] : terms) {
    std::string bracket(1, w.back());
    for (std::size_t i = w.size() - 1; i-- > 0;) bracket = "[" + std::string(1, w[i]) + "," + bracket + "]";
    if (!out.empty()) out += " + ";
    out += (c == 1 ? std::string() : "(" + c.str() + ")") + bracket;
  }
  return out;
}

/// Bernoulli numbers B_0..B_n (B_1 = −1/2).
inline std::vector<Rational> bernoulli_numbers(std::size_t n) {
  std::vector<Rational> b(n + 1);
  b[0] = 1;
  for (std::size_t m = 1; m <= n; ++m) {
    Rational s = 0;
    Integer binom = 1;  // C(m+1, k)
    for (std::size_t k = 0; k < m; ++k) {
      s += Rational(binom) * b[k];
      binom = binom * Integer(m + 1 - k) / Integer(k + 1);
    }
    b[m] = -s / Rational(Integer(m + 1));
  }
  return b;
}

/// log(exp X · exp Y) up to word length N, from the recursion
///   Z₁ = X+Y,
///   (n+1) Z_{n+1} = ½[X−Y, Z_n] + Σ_{p≥1} B_{2p}/(2p)! Σ_{k₁+…+k_{2p}=n} [Z_{k₁},[…,[Z_{k_{2p}}, X+Y]…]],
/// carried out in the free associative algebra and then written in right-nested normal form.
inline FreeLieElement bch_series(std::size_t N) {
  if (N < 1) throw std::invalid_argument("BCH order must be at least 1");
  const auto B = bernoulli_numbers(N);
  const FreeAssoc X = FreeAssoc::x(), Y = FreeAssoc::y();
  std::vector<FreeAssoc> Z(N + 1);
  Z[1] = X + Y;
  auto bracket = [](const FreeAssoc& a, const FreeAssoc& b) { return a * b - b * a; };

  for (std::size_t n = 1; n < N; ++n) {
    FreeAssoc next = bracket(X - Y, Z[n]) * Rational(1, 2);
    Rational factorial = 1;
    for (std::size_t p = 1; 2 * p <= n; ++p) {
      factorial *= Rational(Integer(2 * p - 1) * Integer(2 * p));
      // Compositions of n into 2p positive parts.
      std::vector<std::size_t> parts(2 * p, 1);
      FreeAssoc sum;
      auto rec = [&](auto&& self, std::size_t idx, std::size_t left) -> void {
        if (idx + 1 == parts.size()) {
          parts[idx] = left;
          FreeAssoc acc = X + Y;
          for (std::size_t i = parts.size(); i-- > 0;) acc = bracket(Z[parts[i]], acc);
          sum += acc;
          return;
        }
        for (std::size_t k = 1; k + (parts.size() - idx - 1) <= left; ++k) {
          parts[idx] = k;
          self(self, idx + 1, left - k);
        }
      };
      if (n >= 2 * p) rec(rec, 0, n);
      next += sum * (B[2 * p] / factorial);
    }
    Z[n + 1] = next * Rational(Integer(1), Integer(n + 1));
  }

  // Dynkin–Specht–Wever: a homogeneous Lie polynomial P of degree n equals
  // (1/n) Σ_w P_w [w₁,[w₂,[…,w_n]]].
  FreeLieElement::term_map brackets;
  for (std::size_t n = 1; n <= N; ++n)
    for (const auto& [w, c] : Z[n].terms()) brackets[w] += c / Rational(Integer(n));
  auto out = FreeLieElement::from_brackets(brackets);
  if (!(out.to_associative() == [&] {
        FreeAssoc s;
        for (std::size_t n = 1; n <= N; ++n) s += Z[n];
        return s;
      }()))
    throw std::logic_error("BCH recursion did not produce a Lie element");
  return out;
}

// ---------------------------------------------------------------------------------------
// Universal enveloping algebra with ħ-graded commutators, and the Gutt product.

using Word = std::vector<std::uint32_t>;

/// Σ c · ħ^h · e_{w₁}⋯e_{w_k}. In PBW normal form every word is non-decreasing.
class EnvelopingElement {
 public:
  using key_type = std::pair<std::uint32_t, Word>;  // (ħ power, generator word)
  using term_map = std::map<key_type, Rational>;

  EnvelopingElement() = default;
  explicit EnvelopingElement(std::size_t dim) : dim_(dim) {}

  static EnvelopingElement monomial(std::size_t dim, Word w, std::uint32_t hbar = 0, const Rational& c = 1) {
    EnvelopingElement e(dim);
    e.add(hbar, std::move(w), c);
    return e;
  }

  std::size_t dim() const { return dim_; }
  const term_map& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  void add(std::uint32_t hbar, Word w, const Rational& c) {
    if (c == 0) return;
    for (auto g : w)
      if (g >= dim_) throw DimensionError("generator index out of range");
    auto [it, inserted] = terms_.try_emplace({hbar, std::move(w)}, c);
    if (!inserted) {
      it->second += c;
      if (it->second == 0) terms_.erase(it);
    }
  }

  /// Adds c·ħ^shift·o.
  void add_scaled(const EnvelopingElement& o, const Rational& c, std::uint32_t shift = 0) {
    for (const auto& [k, v] : o.terms_) add(k.first + shift, k.second, v * c);
  }

  bool is_pbw_ordered() const {
    return std::all_of(terms_.begin(), terms_.end(),
                       [](const auto& t) { return std::is_sorted(t.first.second.begin(), t.first.second.end()); });
  }

  friend EnvelopingElement operator*(const EnvelopingElement& a, const EnvelopingElement& b) {
    if (a.dim_ != b.dim_) throw DimensionError("enveloping algebra dimension mismatch");
    EnvelopingElement out(a.dim_);
    for (const auto& [ka, ca] : a.terms_)
      for (const auto& [kb, cb] : b.terms_) {
        Word w = ka.second;
        w.insert(w.end(), kb.second.begin(), kb.second.end());
        out.add(ka.first + kb.first, std::move(w), ca * cb);
      }
    return out;
  }

  friend bool operator==(const EnvelopingElement&, const EnvelopingElement&) = default;

 private:
  std::size_t dim_ = 0;
  term_map terms_;
};

/// PBW straightening in U(L) with e_j e_i = e_i e_j + ħ·Σ_k c_{ji}^k e_k.
///
/// Straightened forms of words are memoized, so one instance should be reused across many
/// products over the same algebra.
class PbwOrderer {
 public:
  explicit PbwOrderer(const LieAlgebra& L) : L_(L) {}

  const LieAlgebra& algebra() const { return L_; }

  EnvelopingElement normal_order(const EnvelopingElement& e) {
    if (e.dim() != L_.dim()) throw DimensionError("enveloping element does not match the algebra dimension");
    EnvelopingElement out(L_.dim());
    for (const auto& [k, c] : e.terms()) out.add_scaled(straighten(k.second), c, k.first);
    return out;
  }

  /// PBW form of a single word (ħ powers relative to the word).
  const EnvelopingElement& straighten(const Word& w) {
    if (auto it = memo_.find(w); it != memo_.end()) return it->second;
    EnvelopingElement out(L_.dim());
    std::size_t pos = 0;
    while (pos + 1 < w.size() && w[pos] <= w[pos + 1]) ++pos;
    if (pos + 1 >= w.size()) {
      out.add(0, w, 1);
    } else {
      // w = a · e_j e_i · b with j > i.
      const auto j = w[pos], i = w[pos + 1];
      Word swapped = w;
      std::swap(swapped[pos], swapped[pos + 1]);
      out.add_scaled(straighten(swapped), 1);
      for (std::uint32_t k = 0; k < L_.dim(); ++k) {
        const Rational& c = L_.constant(j, i, k);
        if (c == 0) continue;
        Word shorter(w.begin(), w.begin() + pos);
        shorter.push_back(k);
        shorter.insert(shorter.end(), w.begin() + pos + 2, w.end());
        out.add_scaled(straighten(shorter), c, 1);
      }
    }
    return memo_.emplace(w, std::move(out)).first->second;
  }

 private:
  const LieAlgebra& L_;
  std::map<Word, EnvelopingElement> memo_;
};

inline EnvelopingElement pbw_normal_order(const EnvelopingElement& e, const LieAlgebra& L) {
  PbwOrderer orderer(L);
  return orderer.normal_order(e);
}

/// Gutt product on Sym(𝔤) = polynomials on 𝔤*, transported from U(𝔤) through symmetrization.
class GuttProduct {
 public:
  GuttProduct(const LieAlgebra& L, std::size_t order) : L_(L), order_(order), orderer_(L) {}

  const LieAlgebra& algebra() const { return L_; }
  std::size_t order() const { return order_; }

  /// σ(x^a) = average of the words obtained by permuting e_1^{a_1}⋯e_d^{a_d}, in PBW form.
  const EnvelopingElement& symmetrized(const Exponent& a) {
    if (auto it = sym_.find(a); it != sym_.end()) return it->second;
    Word w;
    for (std::uint32_t i = 0; i < a.size(); ++i) w.insert(w.end(), a[i], i);
    EnvelopingElement raw(L_.dim());
    std::size_t count = 0;
    do {
      raw.add(0, w, 1);
      ++count;
    } while (std::next_permutation(w.begin(), w.end()));
    EnvelopingElement out(L_.dim());
    out.add_scaled(orderer_.normal_order(raw), Rational(Integer(1), Integer(count)));
    return sym_.emplace(a, std::move(out)).first->second;
  }

  /// σ⁻¹ of a PBW-ordered element, returned per ħ power. Works from the longest words
  /// down: σ(x^a) is e^a plus strictly shorter terms, so each step removes the top length.
  std::map<std::uint32_t, Polynomial<Rational>> unsymmetrize(EnvelopingElement e) {
    std::map<std::uint32_t, Polynomial<Rational>> out;
    while (!e.is_zero()) {
      std::size_t top = 0;
      for (const auto& [k, c] : e.terms()) top = std::max(top, k.second.size());
      std::vector<std::pair<EnvelopingElement::key_type, Rational>> leading;
      for (const auto& [k, c] : e.terms())
        if (k.second.size() == top) leading.emplace_back(k, c);
      for (const auto& [k, c] : leading) {
        Exponent a(L_.dim(), 0);
        for (auto g : k.second) ++a[g];
        auto [it, inserted] = out.try_emplace(k.first, Polynomial<Rational>(L_.dim()));
        it->second.add_term(a, c);
        e.add_scaled(symmetrized(a), -c, k.first);
      }
    }
    return out;
  }

  /// Coefficients of ħ⁰..ħᴺ in x^u ⋆ x^v.
  const std::vector<Polynomial<Rational>>& on_monomials(const Exponent& u, const Exponent& v) {
    auto key = std::make_pair(u, v);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    auto product = orderer_.normal_order(symmetrized(u) * symmetrized(v));
    auto parts = unsymmetrize(std::move(product));
    std::vector<Polynomial<Rational>> out(order_ + 1, Polynomial<Rational>(L_.dim()));
    for (auto& [h, p] : parts)
      if (h <= order_) out[h] = std::move(p);
    return memo_.emplace(key, std::move(out)).first->second;
  }

  HbarSeries<Rational> multiply(const Polynomial<Rational>& f, const Polynomial<Rational>& g) {
    if (f.dim() != L_.dim() || g.dim() != L_.dim()) throw DimensionError("Gutt product operands must live on the algebra's dual");
    HbarSeries<Rational> out(order_, L_.dim());
    for (const auto& [u, a] : f.terms())
      for (const auto& [v, b] : g.terms()) {
        const auto& ops = on_monomials(u, v);
        for (std::size_t n = 0; n <= order_; ++n) out[n] += ops[n] * (a * b);
      }
    return out;
  }

  HbarSeries<Rational> multiply(const HbarSeries<Rational>& F, const Polynomial<Rational>& g) {
    HbarSeries<Rational> out(order_, L_.dim());
    for (std::size_t i = 0; i <= order_; ++i) {
      auto part = multiply(F[i], g);
      for (std::size_t j = 0; i + j <= order_; ++j) out[i + j] += part[j];
    }
    return out;
  }

  HbarSeries<Rational> multiply(const Polynomial<Rational>& f, const HbarSeries<Rational>& G) {
    HbarSeries<Rational> out(order_, L_.dim());
    for (std::size_t i = 0; i <= order_; ++i) {
      auto part = multiply(f, G[i]);
      for (std::size_t j = 0; i + j <= order_; ++j) out[i + j] += part[j];
    }
    return out;
  }

 private:
  const LieAlgebra& L_;
  std::size_t order_;
  PbwOrderer orderer_;
  std::map<Exponent, EnvelopingElement> sym_;
  std::map<std::pair<Exponent, Exponent>, std::vector<Polynomial<Rational>>> memo_;
};

inline HbarSeries<Rational> gutt_star(const LieAlgebra& L, std::size_t N, const Polynomial<Rational>& f,
                                      const Polynomial<Rational>& g) {
  GuttProduct gp(L, N);
  return gp.multiply(f, g);
}

// ---------------------------------------------------------------------------------------
// Graph table vs Gutt product.

struct PairComparison {
  std::string left, right;
  std::vector<double> max_abs_difference;  // index n = ħⁿ
  std::vector<double> budget;              // propagated error at the worst coefficient
  std::vector<bool> within;
};

struct ComparisonReport {
  std::string algebra;
  std::string variant;
  std::string angle_map;
  std::size_t order = 0;
  std::uint32_t max_degree = 0;
  Tolerance tolerance;
  std::vector<PairComparison> pairs;
  std::vector<double> max_abs_difference;  // over all pairs
  std::vector<std::string> warnings;
  bool passed = true;
};

/// Coefficientwise comparison of the graph star product with the Gutt product on all
/// monomial pairs of degree ≤ max_degree.
inline ComparisonReport compare_tables(const StarProductTable& t, std::uint32_t max_degree, const Tolerance& tol = {}) {
  ComparisonReport rep;
  rep.algebra = t.algebra().name();
  rep.variant = std::string(to_string(t.variant()));
  rep.angle_map = t.angle_id();
  rep.order = t.order();
  rep.max_degree = max_degree;
  rep.tolerance = tol;
  rep.max_abs_difference.assign(t.order() + 1, 0.0);
  if (t.angle_id() != "harmonic")
    rep.warnings.push_back("angle map '" + t.angle_id() +
                           "' is not harmonic; agreement with the Gutt product is not expected in general");
  if (t.variant() != Variant::restricted)
    rep.warnings.push_back("table uses the full graph set; agreement with the Gutt product is expected for the "
                           "restricted set");

  StarProduct sp(t);
  GuttProduct gp(t.algebra(), t.order());
  const auto monos = monomials_up_to(t.algebra().dim(), max_degree);
  for (const auto& u : monos)
    for (const auto& v : monos) {
      const auto& graph_side = sp.on_monomials(u, v);
      const auto& exact = gp.on_monomials(u, v);
      PairComparison pc;
      pc.left = detail::monomial_text(u);
      pc.right = detail::monomial_text(v);
      for (std::size_t n = 0; n <= t.order(); ++n) {
        double worst = 0.0, budget = 0.0;
        bool ok = true;
        std::map<Exponent, std::pair<double, double>> diff;  // value difference, error
        for (const auto& [e, c] : graph_side[n].terms()) diff[e] = {c.value, c.error};
        for (const auto& [e, c] : exact[n].terms()) diff[e].first -= to_double(c);
        for (const auto& [e, de] : diff) {
          double a = std::abs(de.first);
          if (a >= worst) {
            worst = a;
            budget = de.second;
          }
          if (!tol.accepts(de.first, de.second)) ok = false;
        }
        pc.max_abs_difference.push_back(worst);
        pc.budget.push_back(budget);
        pc.within.push_back(ok);
        rep.max_abs_difference[n] = std::max(rep.max_abs_difference[n], worst);
        rep.passed = rep.passed && ok;
      }
      rep.pairs.push_back(std::move(pc));
    }
  return rep;
}

}  // namespace kdq
