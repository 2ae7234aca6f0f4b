#pragma once

#include "kdq/rational.hpp"

#include <algorithm>
#include <compare>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace kdq {

class GraphError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A vertex of an admissible graph. First-type (aerial) vertices carry polyvector fields,
/// second-type (ground) vertices carry functions. Indices are 0-based.
struct Vertex {
  enum class Kind : std::uint8_t { aerial = 0, ground = 1 };
  Kind kind = Kind::aerial;
  std::uint32_t index = 0;

  static constexpr Vertex aerial(std::uint32_t i) { return {Kind::aerial, i}; }
  static constexpr Vertex ground(std::uint32_t i) { return {Kind::ground, i}; }
  constexpr bool is_aerial() const { return kind == Kind::aerial; }
  constexpr bool is_ground() const { return kind == Kind::ground; }

  friend constexpr auto operator<=>(const Vertex&, const Vertex&) = default;
};

struct Edge {
  std::uint32_t source;  // aerial index
  Vertex target;
};

/// Canonical text of a labelled graph: `n;m;star1;…;starn`, each star a comma-separated
/// target list, ground targets prefixed with `g`, all indices 1-based.
struct GraphKey {
  std::string text;
  friend auto operator<=>(const GraphKey&, const GraphKey&) = default;
};

/// Admissible graph with ordered out-stars. Only stars are stored, so every edge starts at
/// a first-type vertex by construction; loops and repeated targets are rejected.
class AdmissibleGraph {
 public:
  AdmissibleGraph(std::size_t n, std::size_t m, std::vector<std::vector<Vertex>> stars)
      : n_(n), m_(m), stars_(std::move(stars)) {
    if (stars_.size() != n_) throw GraphError("star list count must equal the number of first-type vertices");
    for (std::size_t k = 0; k < n_; ++k) {
      const auto& star = stars_[k];
      for (std::size_t a = 0; a < star.size(); ++a) {
        const Vertex& t = star[a];
        if (t.is_aerial() && t.index >= n_) throw GraphError("edge target beyond first-type vertex range");
        if (t.is_ground() && t.index >= m_) throw GraphError("edge target beyond second-type vertex range");
        if (t == Vertex::aerial(static_cast<std::uint32_t>(k))) throw GraphError("loops are not admissible");
        for (std::size_t b = 0; b < a; ++b)
          if (star[b] == t) throw GraphError("multiple edges between the same vertices are not admissible");
      }
    }
  }

  std::size_t n() const { return n_; }
  std::size_t m() const { return m_; }
  const std::vector<std::vector<Vertex>>& stars() const { return stars_; }
  const std::vector<Vertex>& star(std::size_t k) const { return stars_.at(k); }

  std::size_t edge_count() const {
    std::size_t e = 0;
    for (const auto& s : stars_) e += s.size();
    return e;
  }

  /// 2n+m−2, the dimension of the configuration space C⁺_{n,m}.
  std::ptrdiff_t top_degree() const { return 2 * static_cast<std::ptrdiff_t>(n_) + static_cast<std::ptrdiff_t>(m_) - 2; }

  /// Edges in global order: vertex 1's star in label order, then vertex 2's, …
  std::vector<Edge> edges() const {
    std::vector<Edge> out;
    for (std::size_t k = 0; k < n_; ++k)
      for (const auto& t : stars_[k]) out.push_back({static_cast<std::uint32_t>(k), t});
    return out;
  }

  std::size_t in_degree(Vertex v) const {
    std::size_t d = 0;
    for (const auto& s : stars_)
      for (const auto& t : s)
        if (t == v) ++d;
    return d;
  }

  GraphKey key() const {
    std::string out = std::to_string(n_) + ";" + std::to_string(m_);
    for (const auto& s : stars_) {
      out += ';';
      for (std::size_t a = 0; a < s.size(); ++a) {
        if (a) out += ',';
        if (s[a].is_ground()) out += 'g';
        out += std::to_string(s[a].index + 1);
      }
    }
    return {out};
  }

  static AdmissibleGraph parse(std::string_view text) {
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
      auto pos = text.find(';', start);
      fields.emplace_back(text.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
      if (pos == std::string_view::npos) break;
      start = pos + 1;
    }
    if (fields.size() < 2) throw GraphError("graph key needs at least 'n;m'");
    auto parse_count = [&](const std::string& s) -> std::size_t {
      if (s.empty() || !std::all_of(s.begin(), s.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); }))
        throw GraphError("malformed count '" + s + "' in graph key '" + std::string(text) + "'");
      return std::stoul(s);
    };
    std::size_t n = parse_count(fields[0]);
    std::size_t m = parse_count(fields[1]);
    if (fields.size() != n + 2)
      throw GraphError("graph key '" + std::string(text) + "' must list exactly " + std::to_string(n) + " stars");
    std::vector<std::vector<Vertex>> stars(n);
    for (std::size_t k = 0; k < n; ++k) {
      const std::string& f = fields[k + 2];
      if (f.empty()) continue;
      std::size_t s = 0;
      while (s <= f.size()) {
        auto comma = f.find(',', s);
        std::string tok = f.substr(s, comma == std::string::npos ? std::string::npos : comma - s);
        bool ground = !tok.empty() && tok[0] == 'g';
        std::size_t idx = parse_count(ground ? tok.substr(1) : tok);
        if (idx == 0) throw GraphError("vertex indices in graph keys are 1-based");
        stars[k].push_back(ground ? Vertex::ground(static_cast<std::uint32_t>(idx - 1))
                                  : Vertex::aerial(static_cast<std::uint32_t>(idx - 1)));
        if (comma == std::string::npos) break;
        s = comma + 1;
      }
    }
    return AdmissibleGraph(n, m, std::move(stars));
  }

  friend bool operator==(const AdmissibleGraph& a, const AdmissibleGraph& b) {
    return a.n_ == b.n_ && a.m_ == b.m_ && a.stars_ == b.stars_;
  }
  friend bool operator<(const AdmissibleGraph& a, const AdmissibleGraph& b) {
    if (a.n_ != b.n_) return a.n_ < b.n_;
    if (a.m_ != b.m_) return a.m_ < b.m_;
    return a.stars_ < b.stars_;
  }

 private:
  std::size_t n_;
  std::size_t m_;
  std::vector<std::vector<Vertex>> stars_;
};

inline GraphKey canonical_key(const AdmissibleGraph& g) { return g.key(); }

/// All admissible graphs with n first-type vertices, m second-type vertices and exactly
/// `edge_count` edges. Different orderings of a star are different graphs. The result is
/// sorted lexicographically by the star target lists.
inline std::vector<AdmissibleGraph> enumerate_graphs(std::size_t n, std::size_t m, std::size_t edge_count) {
  std::vector<AdmissibleGraph> out;
  if (n == 0) return out;
  std::vector<std::vector<Vertex>> stars(n);
  std::vector<Vertex> all;
  for (std::uint32_t i = 0; i < n; ++i) all.push_back(Vertex::aerial(i));
  for (std::uint32_t j = 0; j < m; ++j) all.push_back(Vertex::ground(j));

  // Extends star k by ordered sequences of distinct targets, then moves to k+1.
  auto fill = [&](auto&& self, std::size_t k, std::size_t remaining) -> void {
    if (k == n) {
      if (remaining == 0) out.emplace_back(n, m, stars);
      return;
    }
    // Option: close star k here.
    self(self, k + 1, remaining);
    if (remaining == 0) return;
    for (const auto& t : all) {
      if (t == Vertex::aerial(static_cast<std::uint32_t>(k))) continue;
      if (std::find(stars[k].begin(), stars[k].end(), t) != stars[k].end()) continue;
      stars[k].push_back(t);
      self(self, k, remaining - 1);
      stars[k].pop_back();
    }
  };
  fill(fill, 0, edge_count);
  std::sort(out.begin(), out.end());
  return out;
}

/// True iff the undirected multigraph formed by edges between first-type vertices is a
/// forest. Edges touching second-type vertices are ignored.
inline bool is_restricted(const AdmissibleGraph& g) {
  std::vector<std::size_t> parent(g.n());
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (const auto& e : g.edges()) {
    if (!e.target.is_aerial()) continue;
    auto a = find(e.source), b = find(e.target.index);
    if (a == b) return false;
    parent[a] = b;
  }
  return true;
}

/// True iff every first-type vertex has in-degree ≤ 1. When false, the graph operator
/// vanishes on polyvector fields with linear coefficients.
inline bool linear_nonzero(const AdmissibleGraph& g) {
  std::vector<std::size_t> indeg(g.n(), 0);
  for (const auto& e : g.edges())
    if (e.target.is_aerial() && ++indeg[e.target.index] > 1) return false;
  return true;
}

/// True iff every second-type vertex receives at least one edge. Otherwise the angle form is
/// pulled back from a lower-dimensional configuration space and the weight vanishes.
inline bool grounds_all_reached(const AdmissibleGraph& g) {
  std::vector<bool> hit(g.m(), false);
  for (const auto& e : g.edges())
    if (e.target.is_ground()) hit[e.target.index] = true;
  return std::all_of(hit.begin(), hit.end(), [](bool b) { return b; });
}

/// ∏_k 1/(#Star(k))!
inline Rational star_factorial_factor(const AdmissibleGraph& g) {
  Integer denom = 1;
  for (const auto& s : g.stars())
    for (std::size_t i = 2; i <= s.size(); ++i) denom *= static_cast<unsigned>(i);
  return Rational(Integer(1), denom);
}

}  // namespace kdq
