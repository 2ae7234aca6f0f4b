#pragma once

#include "kdq/cbh.hpp"
#include "kdq/lie_algebra.hpp"
#include "kdq/star.hpp"
#include "kdq/weight_cache.hpp"

#include <nlohmann/json.hpp>

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace kdq {

using nlohmann::json;

class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {
inline std::size_t parse_index(const std::string& s, std::size_t dim, const std::string& where) {
  std::size_t v = 0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size() || v < 1 || v > dim)
    throw FormatError(where + ": index '" + s + "' is not in 1.." + std::to_string(dim));
  return v - 1;
}
}  // namespace detail

/// Reads {"dim": d, "name": ..., "brackets": {"i,j": {"k": "p/q"}}} with 1-based indices, i<j.
inline LieAlgebra algebra_from_json(const json& j) {
  if (!j.is_object() || !j.contains("dim") || !j["dim"].is_number_unsigned())
    throw FormatError("algebra config needs a positive integer 'dim'");
  const std::size_t dim = j["dim"].get<std::size_t>();
  if (dim == 0) throw FormatError("algebra config needs a positive integer 'dim'");
  const std::string name = j.value("name", std::string("unnamed"));
  std::map<std::pair<std::size_t, std::size_t>, std::map<std::size_t, Rational>> brackets;
  if (j.contains("brackets")) {
    if (!j["brackets"].is_object()) throw FormatError("'brackets' must be an object");
    for (const auto& [pair, rhs] : j["brackets"].items()) {
      auto comma = pair.find(',');
      if (comma == std::string::npos) throw FormatError("bracket key '" + pair + "' must look like \"i,j\"");
      std::size_t i = detail::parse_index(pair.substr(0, comma), dim, "bracket key '" + pair + "'");
      std::size_t k2 = detail::parse_index(pair.substr(comma + 1), dim, "bracket key '" + pair + "'");
      if (i >= k2) throw FormatError("bracket key '" + pair + "' must have i < j");
      if (!rhs.is_object()) throw FormatError("bracket '" + pair + "' must map result indices to rationals");
      auto& target = brackets[{i, k2}];
      for (const auto& [k, value] : rhs.items()) {
        std::size_t kk = detail::parse_index(k, dim, "bracket '" + pair + "'");
        try {
          if (value.is_string())
            target[kk] = parse_rational(value.get<std::string>());
          else if (value.is_number_integer())
            target[kk] = Rational(value.get<long long>());
          else
            throw FormatError("bracket '" + pair + "', result " + k + ": coefficient must be \"p/q\" or an integer");
        } catch (const ParseError& e) {
          throw FormatError("bracket '" + pair + "', result " + k + ": " + e.what());
        }
      }
    }
  }
  try {
    return LieAlgebra::from_brackets(name, dim, brackets);
  } catch (const InvalidAlgebra& e) {
    throw FormatError(e.what());
  }
}

inline json algebra_to_json(const LieAlgebra& L) {
  json brackets = json::object();
  for (std::size_t i = 0; i < L.dim(); ++i)
    for (std::size_t j = i + 1; j < L.dim(); ++j) {
      json rhs = json::object();
      for (std::size_t k = 0; k < L.dim(); ++k)
        if (L.constant(i, j, k) != 0) rhs[std::to_string(k + 1)] = to_string(L.constant(i, j, k));
      if (!rhs.empty()) brackets[std::to_string(i + 1) + "," + std::to_string(j + 1)] = rhs;
    }
  return {{"name", L.name()}, {"dim", L.dim()}, {"brackets", brackets}};
}

inline json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw FormatError("'" + path + "' is not valid JSON: " + e.what());
  }
}

inline LieAlgebra load_algebra(const std::string& path) { return algebra_from_json(read_json_file(path)); }

inline json weight_to_json(const Weight& w) {
  return {{"graph_key", w.graph_key.text}, {"angle_map", w.angle_map}, {"weight", w.value},
          {"std_error", w.std_error}, {"samples", w.samples},          {"seed", w.seed}};
}

inline json table_to_json(const StarProductTable& t) {
  json orders = json::array();
  for (std::size_t n = 1; n <= t.order(); ++n) {
    json entries = json::array();
    for (const auto& wg : t.stratum(n))
      entries.push_back({{"graph_key", wg.weight.graph_key.text},
                         {"weight", wg.weight.value},
                         {"std_error", wg.weight.std_error},
                         {"samples", wg.weight.samples},
                         {"seed", wg.weight.seed}});
    orders.push_back({{"order", n}, {"graphs", entries}});
  }
  return {{"algebra", algebra_to_json(t.algebra())},
          {"variant", std::string(to_string(t.variant()))},
          {"order", t.order()},
          {"angle_map", t.angle_id()},
          {"orders", orders}};
}

inline StarProductTable table_from_json(const json& j) {
  try {
    LieAlgebra L = algebra_from_json(j.at("algebra"));
    Variant variant = parse_variant(j.at("variant").get<std::string>());
    std::size_t order = j.at("order").get<std::size_t>();
    std::string angle = j.at("angle_map").get<std::string>();
    const auto& orders = j.at("orders");
    if (!orders.is_array() || orders.size() != order) throw FormatError("table must list exactly one entry per order");
    std::vector<std::vector<WeightedGraph>> strata;
    for (std::size_t n = 1; n <= order; ++n) {
      const auto& o = orders[n - 1];
      if (o.at("order").get<std::size_t>() != n) throw FormatError("table orders must be listed as 1..N");
      std::vector<WeightedGraph> stratum;
      for (const auto& e : o.at("graphs")) {
        auto g = AdmissibleGraph::parse(e.at("graph_key").get<std::string>());
        if (g.n() != n || g.m() != 2 || g.edge_count() != 2 * n)
          throw FormatError("graph '" + g.key().text + "' does not belong to order " + std::to_string(n));
        Weight w;
        w.graph_key = g.key();
        w.angle_map = angle;
        w.value = e.at("weight").get<double>();
        w.std_error = e.at("std_error").get<double>();
        w.samples = e.value("samples", std::size_t(0));
        w.seed = e.value("seed", std::uint64_t(0));
        if (!(w.std_error >= 0.0)) throw FormatError("std_error must be non-negative");
        stratum.push_back({std::move(g), std::move(w)});
      }
      strata.push_back(std::move(stratum));
    }
    return StarProductTable(std::move(L), variant, order, std::move(angle), std::move(strata));
  } catch (const json::exception& e) {
    throw FormatError(std::string("malformed star table: ") + e.what());
  } catch (const GraphError& e) {
    throw FormatError(std::string("malformed star table: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw FormatError(std::string("malformed star table: ") + e.what());
  }
}

inline StarProductTable load_table(const std::string& path) { return table_from_json(read_json_file(path)); }

inline void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << text;
}

template <class T>
json series_to_json(const HbarSeries<T>& s) {
  json out = json::array();
  for (std::size_t n = 0; n <= s.order(); ++n) {
    json terms = json::array();
    for (const auto& [e, c] : s[n].terms()) {
      json term = {{"exponent", e}};
      if constexpr (std::is_same_v<T, Measured>) {
        term["value"] = c.value;
        term["error"] = c.error;
      } else if constexpr (std::is_same_v<T, Rational>) {
        term["value"] = to_string(c);
      } else {
        term["value"] = c;
      }
      terms.push_back(term);
    }
    out.push_back({{"order", n}, {"text", to_string(s[n])}, {"terms", terms}});
  }
  return out;
}

inline json report_to_json(const AssociativityReport& r) {
  json orders = json::array();
  for (const auto& s : r.orders)
    orders.push_back({{"order", s.order},
                      {"max_abs_defect", s.max_abs},
                      {"budget_at_max", s.budget_at_max},
                      {"worst_ratio", s.worst_ratio},
                      {"worst_triple", s.worst_case},
                      {"violations", s.violations},
                      {"passed", s.passed}});
  return {{"algebra", r.algebra},
          {"variant", r.variant},
          {"order", r.order},
          {"max_degree", r.max_degree},
          {"triples", r.triples},
          {"absolute_floor", r.tolerance.absolute_floor},
          {"sigma_factor", r.tolerance.sigma_factor},
          {"orders", orders},
          {"passed", r.passed}};
}

inline json report_to_json(const ComparisonReport& r) {
  json pairs = json::array();
  for (const auto& p : r.pairs) {
    json per_order = json::array();
    for (std::size_t n = 0; n < p.max_abs_difference.size(); ++n)
      per_order.push_back(
          {{"order", n}, {"max_abs_difference", p.max_abs_difference[n]}, {"budget", p.budget[n]}, {"within", bool(p.within[n])}});
    pairs.push_back({{"left", p.left}, {"right", p.right}, {"orders", per_order}});
  }
  return {{"algebra", r.algebra},
          {"variant", r.variant},
          {"angle_map", r.angle_map},
          {"order", r.order},
          {"max_degree", r.max_degree},
          {"absolute_floor", r.tolerance.absolute_floor},
          {"sigma_factor", r.tolerance.sigma_factor},
          {"max_abs_difference", r.max_abs_difference},
          {"warnings", r.warnings},
          {"pairs", pairs},
          {"passed", r.passed}};
}

}  // namespace kdq
