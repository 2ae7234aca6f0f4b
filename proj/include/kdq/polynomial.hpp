#pragma once

#include "kdq/measured.hpp"
#include "kdq/rational.hpp"

#include <algorithm>
#include <cstdint>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace kdq {

class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Exponent multi-index of a monomial, one entry per coordinate.
using Exponent = std::vector<std::uint32_t>;

template <class T>
struct coefficient_traits {
  static bool is_zero(const T& v) { return v == T(0); }
};

template <>
struct coefficient_traits<Measured> {
  static bool is_zero(const Measured& v) { return v.value == 0.0 && v.error == 0.0; }
};

inline std::uint32_t degree_of(const Exponent& e) {
  std::uint32_t d = 0;
  for (auto v : e) d += v;
  return d;
}

/// Sparse multivariate polynomial over a coefficient ring T.
///
/// Coordinates are 0-based. Zero coefficients are never stored, so structural equality
/// of the term maps is mathematical equality.
template <class T>
class Polynomial {
 public:
  using coefficient_type = T;
  using term_map = std::map<Exponent, T>;

  Polynomial() = default;
  explicit Polynomial(std::size_t dim) : dim_(dim) {}

  static Polynomial constant(std::size_t dim, const T& c) {
    Polynomial p(dim);
    p.add_term(Exponent(dim, 0), c);
    return p;
  }

  static Polynomial variable(std::size_t dim, std::size_t coord) {
    if (coord >= dim) throw DimensionError("coordinate index out of range");
    Exponent e(dim, 0);
    e[coord] = 1;
    return monomial(std::move(e));
  }

  static Polynomial monomial(Exponent e, const T& c = T(1)) {
    Polynomial p(e.size());
    p.add_term(e, c);
    return p;
  }

  std::size_t dim() const { return dim_; }
  const term_map& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }

  std::uint32_t total_degree() const {
    std::uint32_t d = 0;
    for (const auto& [e, c] : terms_) d = std::max(d, degree_of(e));
    return d;
  }

  T coefficient(const Exponent& e) const {
    auto it = terms_.find(e);
    return it == terms_.end() ? T(0) : it->second;
  }

  void add_term(const Exponent& e, const T& c) {
    if (e.size() != dim_) throw DimensionError("exponent length does not match polynomial dimension");
    if (coefficient_traits<T>::is_zero(c)) return;
    auto [it, inserted] = terms_.try_emplace(e, c);
    if (!inserted) {
      it->second += c;
      if (coefficient_traits<T>::is_zero(it->second)) terms_.erase(it);
    }
  }

  Polynomial& operator+=(const Polynomial& o) {
    check_dim(o);
    for (const auto& [e, c] : o.terms_) add_term(e, c);
    return *this;
  }

  Polynomial& operator-=(const Polynomial& o) {
    check_dim(o);
    for (const auto& [e, c] : o.terms_) add_term(e, -c);
    return *this;
  }

  Polynomial& operator*=(const T& s) {
    if (coefficient_traits<T>::is_zero(s)) {
      terms_.clear();
      return *this;
    }
    for (auto it = terms_.begin(); it != terms_.end();) {
      it->second *= s;
      if (coefficient_traits<T>::is_zero(it->second))
        it = terms_.erase(it);
      else
        ++it;
    }
    return *this;
  }

  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  friend Polynomial operator-(Polynomial a) {
    for (auto& [e, c] : a.terms_) c = -c;
    return a;
  }
  friend Polynomial operator*(Polynomial a, const T& s) { return a *= s; }
  friend Polynomial operator*(const T& s, Polynomial a) { return a *= s; }

  friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    a.check_dim(b);
    Polynomial out(a.dim_);
    Exponent e(a.dim_);
    for (const auto& [ea, ca] : a.terms_) {
      for (const auto& [eb, cb] : b.terms_) {
        for (std::size_t i = 0; i < a.dim_; ++i) e[i] = ea[i] + eb[i];
        out.add_term(e, ca * cb);
      }
    }
    return out;
  }

  Polynomial& operator*=(const Polynomial& o) { return *this = *this * o; }

  friend bool operator==(const Polynomial& a, const Polynomial& b) {
    return a.dim_ == b.dim_ && a.terms_ == b.terms_;
  }

  /// ∂/∂x_coord.
  Polynomial partial(std::size_t coord) const {
    if (coord >= dim_) throw DimensionError("partial derivative coordinate out of range");
    Polynomial out(dim_);
    for (const auto& [e, c] : terms_) {
      if (e[coord] == 0) continue;
      Exponent d = e;
      --d[coord];
      out.add_term(d, c * T(static_cast<int>(e[coord])));
    }
    return out;
  }

  /// Mixed partial ∏_i ∂_i^{orders[i]}.
  Polynomial derivative(const Exponent& orders) const {
    if (orders.size() != dim_) throw DimensionError("derivative order vector has wrong length");
    Polynomial out(dim_);
    for (const auto& [e, c] : terms_) {
      T factor = c;
      Exponent d = e;
      bool vanishes = false;
      for (std::size_t i = 0; i < dim_ && !vanishes; ++i) {
        if (orders[i] > e[i]) {
          vanishes = true;
          break;
        }
        for (std::uint32_t k = 0; k < orders[i]; ++k) factor *= T(static_cast<int>(e[i] - k));
        d[i] -= orders[i];
      }
      if (!vanishes) out.add_term(d, factor);
    }
    return out;
  }

  /// Applies f to every coefficient, producing a polynomial over another ring.
  template <class U, class F>
  Polynomial<U> map_coefficients(F&& f) const {
    Polynomial<U> out(dim_);
    for (const auto& [e, c] : terms_) out.add_term(e, f(c));
    return out;
  }

 private:
  void check_dim(const Polynomial& o) const {
    if (o.dim_ != dim_) throw DimensionError("polynomial dimension mismatch");
  }

  std::size_t dim_ = 0;
  term_map terms_;
};

inline Polynomial<double> to_double(const Polynomial<Rational>& p) {
  return p.map_coefficients<double>([](const Rational& r) { return to_double(r); });
}

inline Polynomial<Measured> to_measured(const Polynomial<Rational>& p) {
  return p.map_coefficients<Measured>([](const Rational& r) { return Measured(to_double(r)); });
}

namespace detail {
template <class T>
std::string coefficient_text(const T& c) {
  std::ostringstream os;
  os << c;
  return os.str();
}
inline std::string coefficient_text(const Rational& c) { return c.str(); }
inline std::string coefficient_text(const Measured& c) {
  std::ostringstream os;
  os << "(" << c.value << "±" << c.error << ")";
  return os.str();
}
}  // namespace detail

/// Human-readable form with 1-based variable names x1, x2, ...
template <class T>
std::string to_string(const Polynomial<T>& p) {
  if (p.is_zero()) return "0";
  std::string out;
  // Highest degree first reads more naturally.
  std::vector<std::pair<Exponent, T>> terms(p.terms().begin(), p.terms().end());
  std::stable_sort(terms.begin(), terms.end(), [](const auto& a, const auto& b) {
    return degree_of(a.first) > degree_of(b.first);
  });
  for (const auto& [e, c] : terms) {
    if (!out.empty()) out += " + ";
    std::string mono;
    for (std::size_t i = 0; i < e.size(); ++i) {
      if (e[i] == 0) continue;
      if (!mono.empty()) mono += "*";
      mono += "x" + std::to_string(i + 1);
      if (e[i] > 1) mono += "^" + std::to_string(e[i]);
    }
    std::string coeff = detail::coefficient_text(c);
    if (mono.empty())
      out += coeff;
    else if (coeff == "1")
      out += mono;
    else
      out += coeff + "*" + mono;
  }
  return out;
}

/// All exponents of total degree ≤ max_degree in `dim` variables, graded then lexicographic.
inline std::vector<Exponent> monomials_up_to(std::size_t dim, std::uint32_t max_degree) {
  std::vector<Exponent> out;
  for (std::uint32_t deg = 0; deg <= max_degree; ++deg) {
    Exponent e(dim, 0);
    // Enumerate compositions of deg into dim parts.
    auto rec = [&](auto&& self, std::size_t i, std::uint32_t left) -> void {
      if (i + 1 == dim) {
        e[i] = left;
        out.push_back(e);
        return;
      }
      for (std::uint32_t v = left + 1; v-- > 0;) {
        e[i] = v;
        self(self, i + 1, left - v);
      }
    };
    if (dim == 0) {
      if (deg == 0) out.push_back(e);
      continue;
    }
    rec(rec, 0, deg);
  }
  return out;
}

}  // namespace kdq
