// kdq: command-line front end for graph enumeration, weights, star tables and their checks.

#include "kdq/cbh.hpp"
#include "kdq/io.hpp"
#include "kdq/star.hpp"
#include "kdq/weight_cache.hpp"
#include "kdq/weights.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#ifndef KDQ_DATA_DIR
#define KDQ_DATA_DIR "data/algebras"
#endif

namespace fs = std::filesystem;
using namespace kdq;

namespace {

enum Exit : int { ok = 0, usage = 2, dimension = 3, jacobi = 4, tolerance = 5 };

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

fs::path data_dir() {
  if (const char* env = std::getenv("KDQ_DATA_DIR"); env && *env) return env;
  return KDQ_DATA_DIR;
}

/// A path to a config file, or the name of a bundled algebra.
LieAlgebra resolve_algebra(const std::string& name_or_path) {
  fs::path p(name_or_path);
  if (fs::is_regular_file(p)) return load_algebra(p.string());
  fs::path bundled = data_dir() / (name_or_path + ".json");
  if (fs::is_regular_file(bundled)) return load_algebra(bundled.string());
  throw UsageError("unknown algebra '" + name_or_path + "' (not a file, and no bundled config in " + data_dir().string() + ")");
}

std::string fmt(double v) {
  std::ostringstream os;
  os << std::setprecision(10) << v;
  return os.str();
}

std::string series_text(const HbarSeries<Measured>& s) {
  std::string out;
  for (std::size_t n = 0; n <= s.order(); ++n) {
    if (s[n].is_zero()) continue;
    if (!out.empty()) out += " + ";
    std::string body = to_string(s[n]);
    if (n == 0)
      out += body;
    else
      out += (n == 1 ? std::string("ħ") : "ħ^" + std::to_string(n)) + "·(" + body + ")";
  }
  return out.empty() ? "0" : out;
}

void emit(const json& j) { std::cout << j.dump(2) << '\n'; }

// ---------------------------------------------------------------------------------------

struct EnumerateArgs {
  long long n = -1, m = -1, edges = -1;
  bool restricted = false, linear = false;
};

int run_enumerate(const EnumerateArgs& a, bool as_json) {
  if (a.n < 1) throw UsageError("--n must be at least 1");
  if (a.m < 0) throw UsageError("--m must be non-negative");
  const long long edges = a.edges >= 0 ? a.edges : 2 * a.n + a.m - 2;
  if (edges < 0) throw UsageError("edge count must be non-negative");
  auto graphs = enumerate_graphs(static_cast<std::size_t>(a.n), static_cast<std::size_t>(a.m), static_cast<std::size_t>(edges));
  std::vector<std::string> keys;
  for (const auto& g : graphs) {
    if (a.restricted && !is_restricted(g)) continue;
    if (a.linear && !linear_nonzero(g)) continue;
    keys.push_back(g.key().text);
  }
  if (as_json) {
    emit({{"n", a.n}, {"m", a.m}, {"edges", edges}, {"restricted", a.restricted}, {"linear", a.linear},
          {"count", keys.size()}, {"graphs", keys}});
  } else {
    std::cout << keys.size() << " graphs (n=" << a.n << ", m=" << a.m << ", edges=" << edges << ")\n";
    for (const auto& k : keys) std::cout << k << '\n';
  }
  return ok;
}

struct WeightArgs {
  std::string key;
  std::size_t samples = 1'000'000;
  std::uint64_t seed = 1;
  std::string angle = "harmonic";
  std::string cache;
};

int run_weight(const WeightArgs& a, bool as_json) {
  AdmissibleGraph g = [&] {
    try {
      return AdmissibleGraph::parse(a.key);
    } catch (const GraphError& e) {
      throw UsageError(std::string("malformed graph key: ") + e.what());
    }
  }();
  if (g.edge_count() != static_cast<std::size_t>(std::max<std::ptrdiff_t>(0, g.top_degree())) || g.top_degree() < 0)
    throw DimensionError("graph " + g.key().text + " has " + std::to_string(g.edge_count()) +
                         " edges; expected 2n+m-2 = " + std::to_string(g.top_degree()));
  auto angle = make_angle_map(a.angle);
  std::optional<WeightCache> cache;
  if (!a.cache.empty()) cache.emplace(a.cache);
  if (cache)
    for (const auto& d : cache->diagnostics()) std::cerr << "warning: " << d << '\n';
  Weight w = cached_weight(cache ? &*cache : nullptr, g, *angle, a.samples, a.seed);
  if (as_json)
    emit(weight_to_json(w));
  else
    std::cout << w.graph_key.text << "  W = " << fmt(w.value) << " ± " << fmt(w.std_error) << "  (" << w.samples
              << " samples, seed " << w.seed << ", " << w.angle_map << ")\n";
  return ok;
}

struct StarArgs {
  std::string algebra;
  std::size_t order = 2;
  std::string variant = "restricted";
  std::size_t samples = 1'000'000;
  std::uint64_t seed = 1;
  std::string angle = "harmonic";
  std::string cache;
  std::string output;
  double drop_below_sigma = 0.0;
};

int run_star(const StarArgs& a, bool as_json) {
  if (a.order < 1) throw UsageError("--order must be at least 1");
  LieAlgebra L = resolve_algebra(a.algebra);
  Variant variant = parse_variant(a.variant);
  auto angle = make_angle_map(a.angle);
  std::optional<WeightCache> cache;
  if (!a.cache.empty()) cache.emplace(a.cache);
  if (cache)
    for (const auto& d : cache->diagnostics()) std::cerr << "warning: " << d << '\n';
  BuildOptions opts;
  opts.samples = a.samples;
  opts.seed = a.seed;
  opts.drop_below_sigma = a.drop_below_sigma;
  opts.cache = cache ? &*cache : nullptr;
  StarProductTable table = build_table(L, a.order, variant, *angle, opts);

  const std::string out_path =
      a.output.empty() ? L.name() + "-" + a.variant + "-N" + std::to_string(a.order) + ".json" : a.output;
  write_text_file(out_path, table_to_json(table).dump(2) + "\n");

  StarProduct sp(table);
  json products = json::array();
  std::ostringstream text;
  for (std::size_t i = 0; i < L.dim(); ++i)
    for (std::size_t j = 0; j < L.dim(); ++j) {
      auto xi = Polynomial<Rational>::variable(L.dim(), i), xj = Polynomial<Rational>::variable(L.dim(), j);
      auto s = sp.multiply(xi, xj);
      const std::string lhs = "x" + std::to_string(i + 1) + " * x" + std::to_string(j + 1);
      products.push_back({{"product", lhs}, {"series", series_to_json(s)}});
      text << lhs << " = " << series_text(s) << '\n';
    }
  if (as_json) {
    json strata = json::array();
    for (std::size_t n = 1; n <= table.order(); ++n)
      strata.push_back({{"order", n}, {"graphs", table.stratum(n).size()}, {"error_budget", table.error_budget(n)}});
    emit({{"algebra", L.name()}, {"variant", a.variant}, {"order", a.order}, {"angle_map", a.angle},
          {"table", out_path}, {"strata", strata}, {"products", products}});
  } else {
    std::cout << "star table for " << L.name() << " (" << a.variant << ", N=" << a.order << ", " << a.angle << ") -> "
              << out_path << '\n';
    for (std::size_t n = 1; n <= table.order(); ++n)
      std::cout << "  order " << n << ": " << table.stratum(n).size() << " graphs, error budget "
                << fmt(table.error_budget(n)) << '\n';
    std::cout << text.str();
  }
  return ok;
}

struct CheckArgs {
  std::string table;
  std::uint32_t max_degree = 2;
  double floor = 5e-2;
  double sigma_factor = 3.0;
};

StarProductTable load_table_arg(const std::string& path) {
  if (path.empty()) throw UsageError("--table is required");
  if (!fs::is_regular_file(path)) throw UsageError("table '" + path + "' does not exist");
  return load_table(path);
}

Tolerance tolerance_from(const CheckArgs& a) {
  if (a.floor < 0 || a.sigma_factor < 0) throw UsageError("tolerance knobs must be non-negative");
  return {a.floor, a.sigma_factor};
}

int run_assoc(const CheckArgs& a, bool as_json) {
  auto table = load_table_arg(a.table);
  auto rep = associativity_report(table, a.max_degree, tolerance_from(a));
  if (as_json) {
    emit(report_to_json(rep));
  } else {
    std::cout << "associativity of " << rep.algebra << " (" << rep.variant << ", N=" << rep.order
              << "), monomials of degree <= " << rep.max_degree << ", " << rep.triples << " triples\n";
    std::cout << "order  max|defect|     budget@max      worst ratio  status\n";
    for (const auto& s : rep.orders)
      std::cout << std::setw(5) << s.order << "  " << std::setw(14) << fmt(s.max_abs) << "  " << std::setw(14)
                << fmt(s.budget_at_max) << "  " << std::setw(11) << fmt(s.worst_ratio) << "  "
                << (s.passed ? "ok" : "FAIL") << (s.worst_case.empty() ? "" : "  " + s.worst_case) << '\n';
    std::cout << (rep.passed ? "associative within budget\n" : "associativity defect exceeds budget\n");
  }
  return rep.passed ? ok : tolerance;
}

int run_compare(const CheckArgs& a, bool as_json) {
  auto table = load_table_arg(a.table);
  auto rep = compare_tables(table, a.max_degree, tolerance_from(a));
  for (const auto& w : rep.warnings) std::cerr << "warning: " << w << '\n';
  if (as_json) {
    emit(report_to_json(rep));
  } else {
    std::cout << "graph table vs Gutt product for " << rep.algebra << " (" << rep.variant << ", N=" << rep.order
              << ", " << rep.angle_map << "), monomials of degree <= " << rep.max_degree << '\n';
    std::cout << "pair                 ";
    for (std::size_t n = 0; n <= rep.order; ++n) std::cout << "  |diff| h^" << n << " (budget)      ";
    std::cout << '\n';
    for (const auto& p : rep.pairs) {
      std::string label = "(" + p.left + ", " + p.right + ")";
      std::cout << std::left << std::setw(21) << label << std::right;
      for (std::size_t n = 0; n <= rep.order; ++n) {
        std::ostringstream cell;
        cell << fmt(p.max_abs_difference[n]) << " (" << fmt(p.budget[n]) << ")" << (p.within[n] ? "" : " !");
        std::cout << "  " << std::left << std::setw(26) << cell.str() << std::right;
      }
      std::cout << '\n';
    }
    for (std::size_t n = 0; n <= rep.order; ++n)
      std::cout << "max |diff| at h^" << n << ": " << fmt(rep.max_abs_difference[n]) << '\n';
    std::cout << (rep.passed ? "agrees with the Gutt product within budget\n" : "differs from the Gutt product beyond budget\n");
  }
  return rep.passed ? ok : tolerance;
}

int run_algebras(const std::string& show, bool as_json) {
  if (!show.empty()) {
    auto L = resolve_algebra(show);
    auto rep = jacobi_check(L);
    json j = algebra_to_json(L);
    j["jacobi"] = rep.holds;
    if (as_json) {
      emit(j);
    } else {
      std::cout << L.name() << " (dim " << L.dim() << "), Jacobi " << (rep.holds ? "holds" : "fails") << '\n';
      for (std::size_t i = 0; i < L.dim(); ++i)
        for (std::size_t k = i + 1; k < L.dim(); ++k) {
          std::string rhs;
          for (std::size_t l = 0; l < L.dim(); ++l) {
            const Rational& c = L.constant(i, k, l);
            if (c == 0) continue;
            if (!rhs.empty()) rhs += " + ";
            rhs += (c == 1 ? std::string() : c.str() + "*") + "e" + std::to_string(l + 1);
          }
          if (!rhs.empty()) std::cout << "  [e" << i + 1 << ", e" << k + 1 << "] = " << rhs << '\n';
        }
    }
    return rep.holds ? ok : jacobi;
  }
  std::vector<fs::path> files;
  if (fs::is_directory(data_dir()))
    for (const auto& e : fs::directory_iterator(data_dir()))
      if (e.path().extension() == ".json") files.push_back(e.path());
  std::sort(files.begin(), files.end());
  json list = json::array();
  for (const auto& f : files) {
    auto L = load_algebra(f.string());
    bool holds = jacobi_check(L).holds;
    list.push_back({{"name", f.stem().string()}, {"dim", L.dim()}, {"jacobi", holds}, {"path", f.string()}});
    if (!as_json) std::cout << std::left << std::setw(12) << f.stem().string() << std::right << " dim " << L.dim()
                            << (holds ? "" : "  (Jacobi fails)") << '\n';
  }
  if (as_json) emit(list);
  return ok;
}

int run_cache(const std::string& path, bool as_json) {
  if (path.empty()) throw UsageError("--cache is required");
  if (!fs::is_regular_file(path)) throw UsageError("cache '" + path + "' does not exist");
  WeightCache cache(path);
  auto entries = cache.entries();
  if (as_json) {
    json list = json::array();
    for (const auto& w : entries) list.push_back(weight_to_json(w));
    emit({{"path", path}, {"entries", list}, {"diagnostics", cache.diagnostics()}});
  } else {
    std::cout << entries.size() << " weights in " << path << '\n';
    for (const auto& w : entries) std::cout << format_weight_record(w) << '\n';
    for (const auto& d : cache.diagnostics()) std::cout << "corrupt: " << d << '\n';
  }
  return ok;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Kontsevich star products of linear Poisson structures"};
  app.require_subcommand(1);
  bool as_json = false;
  app.add_flag("--json", as_json, "Machine-readable output");

  EnumerateArgs en;
  auto* enumerate = app.add_subcommand("enumerate", "List admissible graphs");
  enumerate->add_option("--n", en.n, "First-type vertices")->required();
  enumerate->add_option("--m", en.m, "Second-type vertices")->required();
  enumerate->add_option("--edges", en.edges, "Edge count (default 2n+m-2)");
  enumerate->add_flag("--restricted", en.restricted, "Keep graphs without cycles among first-type vertices");
  enumerate->add_flag("--linear", en.linear, "Keep graphs with at most one edge into each first-type vertex");

  WeightArgs wa;
  auto* weight = app.add_subcommand("weight", "Compute the weight of one graph");
  weight->add_option("key", wa.key, "Graph key, e.g. 1;2;g1,g2")->required();
  weight->add_option("--samples", wa.samples, "Quasi-Monte-Carlo samples")->check(CLI::PositiveNumber);
  weight->add_option("--seed", wa.seed, "Random seed");
  weight->add_option("--angle", wa.angle, "Angle map");
  weight->add_option("--cache", wa.cache, "Weight cache file");

  StarArgs sa;
  auto* star = app.add_subcommand("star", "Build a star-product table and print x_i * x_j");
  star->add_option("--algebra", sa.algebra, "Bundled algebra name or config path")->required();
  star->add_option("--order", sa.order, "Truncation order N");
  star->add_option("--variant", sa.variant, "full or restricted")->check(CLI::IsMember({"full", "restricted"}));
  star->add_option("--samples", sa.samples, "Quasi-Monte-Carlo samples per graph")->check(CLI::PositiveNumber);
  star->add_option("--seed", sa.seed, "Random seed");
  star->add_option("--angle", sa.angle, "Angle map");
  star->add_option("--cache", sa.cache, "Weight cache file");
  star->add_option("--output", sa.output, "Table JSON path");
  star->add_option("--drop-below-sigma", sa.drop_below_sigma, "Drop graphs with |W| < K*std_error")
      ->check(CLI::NonNegativeNumber);

  CheckArgs ca, cc;
  auto add_check_options = [](CLI::App* cmd, CheckArgs& a) {
    cmd->add_option("--table", a.table, "Table JSON written by 'star'")->required();
    cmd->add_option("--max-degree", a.max_degree, "Largest monomial degree tested");
    cmd->add_option("--tolerance", a.floor, "Absolute floor of the acceptance threshold");
    cmd->add_option("--sigma-factor", a.sigma_factor, "Multiple of the propagated error allowed");
  };
  auto* assoc = app.add_subcommand("assoc", "Associativity defect over monomial triples");
  add_check_options(assoc, ca);
  auto* compare = app.add_subcommand("compare", "Compare a table with the Gutt product");
  compare->alias("cbh-compare");
  add_check_options(compare, cc);

  std::string show;
  auto* algebras = app.add_subcommand("algebras", "List bundled Lie algebras");
  algebras->add_option("--show", show, "Print one algebra");

  std::string cache_path;
  auto* cache = app.add_subcommand("cache", "Inspect a weight cache");
  cache->add_option("--cache", cache_path, "Weight cache file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return usage;
  }

  try {
    if (*enumerate) return run_enumerate(en, as_json);
    if (*weight) return run_weight(wa, as_json);
    if (*star) return run_star(sa, as_json);
    if (*assoc) return run_assoc(ca, as_json);
    if (*compare) return run_compare(cc, as_json);
    if (*algebras) return run_algebras(show, as_json);
    if (*cache) return run_cache(cache_path, as_json);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return usage;
  } catch (const FormatError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return usage;
  } catch (const JacobiError& e) {
    std::cerr << "error: " << e.what() << '\n';
    for (const auto& v : e.report().violations)
      std::cerr << "  Jacobi fails for (e" << v[0] + 1 << ", e" << v[1] + 1 << ", e" << v[2] + 1 << "), component "
                << v[3] + 1 << '\n';
    return jacobi;
  } catch (const DimensionError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return dimension;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return usage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return usage;
}
