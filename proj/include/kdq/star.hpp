#pragma once

#include "kdq/angle.hpp"
#include "kdq/graph.hpp"
#include "kdq/lie_algebra.hpp"
#include "kdq/measured.hpp"
#include "kdq/operators.hpp"
#include "kdq/polynomial.hpp"
#include "kdq/weight_cache.hpp"
#include "kdq/weights.hpp"

#include <cmath>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace kdq {

/// Truncated series Σ_{n≤N} ħⁿ P_n.
template <class T>
struct HbarSeries {
  std::vector<Polynomial<T>> coefficients;

  HbarSeries() = default;
  HbarSeries(std::size_t order, std::size_t dim) : coefficients(order + 1, Polynomial<T>(dim)) {}

  std::size_t order() const { return coefficients.size() - 1; }
  const Polynomial<T>& operator[](std::size_t n) const { return coefficients.at(n); }
  Polynomial<T>& operator[](std::size_t n) { return coefficients.at(n); }

  HbarSeries& operator-=(const HbarSeries& o) {
    if (o.coefficients.size() != coefficients.size()) throw DimensionError("series truncation orders differ");
    for (std::size_t i = 0; i < coefficients.size(); ++i) coefficients[i] -= o.coefficients[i];
    return *this;
  }
  friend HbarSeries operator-(HbarSeries a, const HbarSeries& b) { return a -= b; }
};

enum class Variant { full, restricted };

inline std::string_view to_string(Variant v) { return v == Variant::full ? "full" : "restricted"; }

inline Variant parse_variant(std::string_view s) {
  if (s == "full") return Variant::full;
  if (s == "restricted") return Variant::restricted;
  throw std::invalid_argument("variant must be 'full' or 'restricted', got '" + std::string(s) + "'");
}

class JacobiError : public std::invalid_argument {
 public:
  JacobiError(const std::string& msg, JacobiReport report) : std::invalid_argument(msg), report_(std::move(report)) {}
  const JacobiReport& report() const { return report_; }

 private:
  JacobiReport report_;
};

/// Graphs contributing to the ħⁿ bidifferential operator of a linear bivector: n first-type
/// and 2 second-type vertices, 2n edges. Kept only if every star has exactly two edges
/// (otherwise the bivector operator vanishes by degree), no first-type vertex receives two
/// edges (second derivative of a linear coefficient), and both ground vertices are reached
/// (otherwise the weight vanishes). The restricted variant also drops graphs with a cycle
/// among first-type vertices.
inline std::vector<AdmissibleGraph> star_graphs(std::size_t n, Variant variant) {
  std::vector<AdmissibleGraph> out;
  for (auto& g : enumerate_graphs(n, 2, 2 * n)) {
    bool bivector = std::all_of(g.stars().begin(), g.stars().end(), [](const auto& s) { return s.size() == 2; });
    if (!bivector) continue;
    if (variant == Variant::restricted && !is_restricted(g)) continue;
    if (!linear_nonzero(g) || !grounds_all_reached(g)) continue;
    out.push_back(std::move(g));
  }
  return out;
}

struct WeightedGraph {
  AdmissibleGraph graph;
  Weight weight;
};

/// Per-order (graph, weight) data of the star product of a linear Poisson structure.
class StarProductTable {
 public:
  StarProductTable(LieAlgebra algebra, Variant variant, std::size_t order, std::string angle_id,
                   std::vector<std::vector<WeightedGraph>> strata)
      : algebra_(std::move(algebra)),
        variant_(variant),
        order_(order),
        angle_id_(std::move(angle_id)),
        strata_(std::move(strata)) {
    if (strata_.size() != order_) throw std::invalid_argument("star table needs one stratum per order 1..N");
  }

  const LieAlgebra& algebra() const { return algebra_; }
  Variant variant() const { return variant_; }
  std::size_t order() const { return order_; }
  const std::string& angle_id() const { return angle_id_; }

  /// (graph, weight) pairs of the ħⁿ term, 1 ≤ n ≤ order().
  const std::vector<WeightedGraph>& stratum(std::size_t n) const { return strata_.at(n - 1); }
  std::vector<WeightedGraph>& stratum(std::size_t n) { return strata_.at(n - 1); }

  /// Σ_Γ σ_Γ over the stratum.
  double error_budget(std::size_t n) const {
    double s = 0.0;
    for (const auto& wg : stratum(n)) s += wg.weight.std_error;
    return s;
  }

 private:
  LieAlgebra algebra_;
  Variant variant_;
  std::size_t order_;
  std::string angle_id_;
  std::vector<std::vector<WeightedGraph>> strata_;
};

struct BuildOptions {
  std::size_t samples = 1'000'000;
  std::uint64_t seed = 1;
  /// Drop graphs with |W| < K·σ; 0 keeps everything.
  double drop_below_sigma = 0.0;
  WeightCache* cache = nullptr;
};

inline StarProductTable build_table(const LieAlgebra& L, std::size_t order, Variant variant, const AngleMap& angle,
                                    const BuildOptions& opts = {}) {
  auto jacobi = jacobi_check(L);
  if (!jacobi.holds) {
    const auto& v = jacobi.violations.front();
    throw JacobiError("structure constants of '" + L.name() + "' violate the Jacobi identity at (i,j,k,l) = (" +
                          std::to_string(v[0] + 1) + "," + std::to_string(v[1] + 1) + "," + std::to_string(v[2] + 1) +
                          "," + std::to_string(v[3] + 1) + ")",
                      jacobi);
  }
  std::vector<std::vector<WeightedGraph>> strata;
  for (std::size_t n = 1; n <= order; ++n) {
    std::vector<WeightedGraph> stratum;
    for (auto& g : star_graphs(n, variant)) {
      Weight w = cached_weight(opts.cache, g, angle, opts.samples, opts.seed);
      if (opts.drop_below_sigma > 0.0 && std::abs(w.value) < opts.drop_below_sigma * w.std_error) continue;
      stratum.push_back({std::move(g), std::move(w)});
    }
    strata.push_back(std::move(stratum));
  }
  return StarProductTable(L, variant, order, std::string(angle.id()), std::move(strata));
}

/// Evaluates a star table on polynomials, memoizing the operator on monomial pairs.
///
/// Floating point enters once: measured weight × exact graph operator output, summed with
/// compensation. The error of each coefficient is Σ_Γ |U_Γ coefficient|·σ_Γ / n!.
class StarProduct {
 public:
  explicit StarProduct(const StarProductTable& table)
      : table_(table), alpha_(poisson_bivector(table.algebra())), dim_(table.algebra().dim()) {}

  const StarProductTable& table() const { return table_; }
  std::size_t order() const { return table_.order(); }

  /// B_n(x^u, x^v) for n = 0..N.
  const std::vector<Polynomial<Measured>>& on_monomials(const Exponent& u, const Exponent& v) {
    auto key = std::make_pair(u, v);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    std::vector<Polynomial<Measured>> out;
    Exponent uv(dim_);
    for (std::size_t i = 0; i < dim_; ++i) uv[i] = u[i] + v[i];
    out.push_back(Polynomial<Measured>::monomial(uv, Measured(1.0)));

    const Polynomial<Rational> fu = Polynomial<Rational>::monomial(u, Rational(1));
    const Polynomial<Rational> fv = Polynomial<Rational>::monomial(v, Rational(1));
    const Polynomial<Rational> functions[2] = {fu, fv};
    double inv_factorial = 1.0;
    for (std::size_t n = 1; n <= table_.order(); ++n) {
      inv_factorial /= static_cast<double>(n);
      std::vector<PolyVectorField<Rational>> fields(n, alpha_);
      std::map<Exponent, std::pair<CompensatedSum, double>> acc;
      for (const auto& wg : table_.stratum(n)) {
        auto op = evaluate_graph_operator<Rational>(wg.graph, fields, functions);
        for (const auto& [e, c] : op.terms()) {
          double cd = to_double(c);
          auto& slot = acc[e];
          slot.first.add(wg.weight.value * cd);
          slot.second += std::abs(cd) * wg.weight.std_error;
        }
      }
      Polynomial<Measured> p(dim_);
      for (auto& [e, s] : acc) p.add_term(e, Measured(s.first.value() * inv_factorial, s.second * inv_factorial));
      out.push_back(std::move(p));
    }
    return memo_.emplace(key, std::move(out)).first->second;
  }

  HbarSeries<Measured> multiply(const Polynomial<Measured>& f, const Polynomial<Measured>& g) {
    if (f.dim() != dim_ || g.dim() != dim_) throw DimensionError("star product operands must live on the algebra's dual");
    HbarSeries<Measured> out(order(), dim_);
    for (const auto& [u, a] : f.terms())
      for (const auto& [v, b] : g.terms()) {
        const auto& ops = on_monomials(u, v);
        const Measured ab = a * b;
        for (std::size_t n = 0; n <= order(); ++n) out[n] += ops[n] * ab;
      }
    return out;
  }

  HbarSeries<Measured> multiply(const Polynomial<Rational>& f, const Polynomial<Rational>& g) {
    return multiply(to_measured(f), to_measured(g));
  }

  /// (Σ ħⁱ Fᵢ) * g truncated at order N.
  HbarSeries<Measured> multiply(const HbarSeries<Measured>& F, const Polynomial<Measured>& g) {
    HbarSeries<Measured> out(order(), dim_);
    for (std::size_t i = 0; i <= order(); ++i) {
      auto partial = multiply(F[i], g);
      for (std::size_t j = 0; i + j <= order(); ++j) out[i + j] += partial[j];
    }
    return out;
  }

  /// f * (Σ ħⁱ Gᵢ) truncated at order N.
  HbarSeries<Measured> multiply(const Polynomial<Measured>& f, const HbarSeries<Measured>& G) {
    HbarSeries<Measured> out(order(), dim_);
    for (std::size_t i = 0; i <= order(); ++i) {
      auto partial = multiply(f, G[i]);
      for (std::size_t j = 0; i + j <= order(); ++j) out[i + j] += partial[j];
    }
    return out;
  }

 private:
  const StarProductTable& table_;
  PolyVectorField<Rational> alpha_;
  std::size_t dim_;
  std::map<std::pair<Exponent, Exponent>, std::vector<Polynomial<Measured>>> memo_;
};

inline HbarSeries<Measured> star_multiply(const StarProductTable& t, const Polynomial<Rational>& f,
                                          const Polynomial<Rational>& g) {
  StarProduct sp(t);
  return sp.multiply(f, g);
}

/// f*g − g*f.
inline HbarSeries<Measured> commutator_check(const StarProductTable& t, const Polynomial<Rational>& f,
                                             const Polynomial<Rational>& g) {
  if (t.order() < 1) throw std::invalid_argument("commutator check needs order N >= 1");
  StarProduct sp(t);
  return sp.multiply(f, g) - sp.multiply(g, f);
}

/// (f*g)*h − f*(g*h), every product truncated at the table order.
inline HbarSeries<Measured> associativity_defect(StarProduct& sp, const Polynomial<Measured>& f,
                                                 const Polynomial<Measured>& g, const Polynomial<Measured>& h) {
  auto left = sp.multiply(sp.multiply(f, g), h);
  auto right = sp.multiply(f, sp.multiply(g, h));
  return left - right;
}

inline HbarSeries<Measured> associativity_defect(const StarProductTable& t, const Polynomial<Rational>& f,
                                                 const Polynomial<Rational>& g, const Polynomial<Rational>& h) {
  if (t.order() < 1) throw std::invalid_argument("associativity defect needs order N >= 1");
  StarProduct sp(t);
  return associativity_defect(sp, to_measured(f), to_measured(g), to_measured(h));
}

/// Acceptance rule for a measured quantity that should vanish (or match an exact value):
/// |deviation| < max(absolute_floor, sigma_factor·budget).
struct Tolerance {
  double absolute_floor = 5e-2;
  double sigma_factor = 3.0;

  double allowed(double budget) const { return std::max(absolute_floor, sigma_factor * budget); }
  bool accepts(double deviation, double budget) const { return std::abs(deviation) < allowed(budget) || deviation == 0.0; }
};

struct OrderSummary {
  std::size_t order = 0;
  double max_abs = 0.0;          // largest |coefficient| seen at this order
  double budget_at_max = 0.0;    // propagated error of that coefficient
  double worst_ratio = 0.0;      // max |coefficient| / allowed
  std::string worst_case;        // which inputs produced worst_ratio
  std::size_t violations = 0;
  bool passed = true;
};

struct AssociativityReport {
  std::string algebra;
  std::string variant;
  std::size_t order = 0;
  std::uint32_t max_degree = 0;
  std::size_t triples = 0;
  Tolerance tolerance;
  std::vector<OrderSummary> orders;  // index n = ħⁿ
  bool passed = true;
};

namespace detail {
inline std::string monomial_text(const Exponent& e) {
  std::string out;
  for (std::size_t i = 0; i < e.size(); ++i) {
    if (e[i] == 0) continue;
    if (!out.empty()) out += "*";
    out += "x" + std::to_string(i + 1);
    if (e[i] > 1) out += "^" + std::to_string(e[i]);
  }
  return out.empty() ? "1" : out;
}

inline void record(OrderSummary& s, const Polynomial<Measured>& p, const Tolerance& tol, const std::string& label) {
  for (const auto& [e, c] : p.terms()) {
    double a = std::abs(c.value);
    if (a > s.max_abs) {
      s.max_abs = a;
      s.budget_at_max = c.error;
    }
    double ratio = a / tol.allowed(c.error);
    if (ratio > s.worst_ratio) {
      s.worst_ratio = ratio;
      s.worst_case = label;
    }
    if (!tol.accepts(c.value, c.error)) {
      ++s.violations;
      s.passed = false;
    }
  }
}
}  // namespace detail

/// Associativity defects over all monomial triples of degree ≤ max_degree.
inline AssociativityReport associativity_report(const StarProductTable& t, std::uint32_t max_degree,
                                                const Tolerance& tol = {}) {
  AssociativityReport rep;
  rep.algebra = t.algebra().name();
  rep.variant = std::string(to_string(t.variant()));
  rep.order = t.order();
  rep.max_degree = max_degree;
  rep.tolerance = tol;
  rep.orders.resize(t.order() + 1);
  for (std::size_t n = 0; n <= t.order(); ++n) rep.orders[n].order = n;

  StarProduct sp(t);
  const auto monos = monomials_up_to(t.algebra().dim(), max_degree);
  for (const auto& a : monos)
    for (const auto& b : monos)
      for (const auto& c : monos) {
        auto defect = associativity_defect(sp, Polynomial<Measured>::monomial(a, 1.0), Polynomial<Measured>::monomial(b, 1.0),
                                           Polynomial<Measured>::monomial(c, 1.0));
        ++rep.triples;
        const std::string label = "(" + detail::monomial_text(a) + ", " + detail::monomial_text(b) + ", " +
                                  detail::monomial_text(c) + ")";
        for (std::size_t n = 0; n <= t.order(); ++n) detail::record(rep.orders[n], defect[n], tol, label);
      }
  for (const auto& s : rep.orders) rep.passed = rep.passed && s.passed;
  return rep;
}

}  // namespace kdq
