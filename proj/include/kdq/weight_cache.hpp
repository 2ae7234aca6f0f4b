#pragma once

#include "kdq/weights.hpp"

#include <charconv>
#include <fstream>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace kdq {

/// Shortest decimal that round-trips to the same double.
inline std::string format_real(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

inline std::optional<double> parse_real(std::string_view s) {
  double v = 0.0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

/// `graph_key | angle_id | value | std_error | samples | seed`
inline std::string format_weight_record(const Weight& w) {
  return w.graph_key.text + " | " + w.angle_map + " | " + format_real(w.value) + " | " + format_real(w.std_error) + " | " +
         std::to_string(w.samples) + " | " + std::to_string(w.seed);
}

inline std::optional<Weight> parse_weight_record(std::string_view line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  while (true) {
    auto pos = line.find('|', start);
    std::string f(line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    auto b = f.find_first_not_of(" \t\r"), e = f.find_last_not_of(" \t\r");
    fields.push_back(b == std::string::npos ? std::string() : f.substr(b, e - b + 1));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  if (fields.size() != 6) return std::nullopt;
  Weight w;
  try {
    w.graph_key = AdmissibleGraph::parse(fields[0]).key();
  } catch (const GraphError&) {
    return std::nullopt;
  }
  if (w.graph_key.text != fields[0] || fields[1].empty()) return std::nullopt;
  w.angle_map = fields[1];
  auto value = parse_real(fields[2]);
  auto err = parse_real(fields[3]);
  std::uint64_t samples = 0, seed = 0;
  auto s1 = std::from_chars(fields[4].data(), fields[4].data() + fields[4].size(), samples);
  auto s2 = std::from_chars(fields[5].data(), fields[5].data() + fields[5].size(), seed);
  if (!value || !err || *err < 0 || s1.ec != std::errc() || s1.ptr != fields[4].data() + fields[4].size() ||
      s2.ec != std::errc() || s2.ptr != fields[5].data() + fields[5].size() || samples == 0)
    return std::nullopt;
  w.value = *value;
  w.std_error = *err;
  w.samples = samples;
  w.seed = seed;
  return w;
}

/// Append-only persistent store of weights, keyed by (graph key, angle map id).
///
/// get() returns the entry with the most samples. Corrupt lines are skipped and reported
/// through diagnostics(). One writer at a time; readers may run concurrently with it.
class WeightCache {
 public:
  /// In-memory cache with no backing file.
  WeightCache() = default;

  explicit WeightCache(std::string path) : path_(std::move(path)) {
    std::ifstream in(path_);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      if (line.empty() || line[0] == '#') continue;
      if (auto w = parse_weight_record(line))
        insert(*w);
      else
        diagnostics_.push_back(path_ + ":" + std::to_string(lineno) + ": corrupt weight record skipped");
    }
  }

  std::optional<Weight> get(const GraphKey& key, std::string_view angle_id) const {
    std::lock_guard lock(mutex_);
    auto it = entries_.find({key.text, std::string(angle_id)});
    if (it == entries_.end()) return std::nullopt;
    return it->second;
  }

  void put(const Weight& w) {
    std::lock_guard lock(mutex_);
    if (!path_.empty()) {
      std::ofstream out(path_, std::ios::app);
      if (!out) throw std::runtime_error("cannot write weight cache '" + path_ + "'");
      out << format_weight_record(w) << '\n';
    }
    insert(w);
  }

  std::vector<Weight> entries() const {
    std::lock_guard lock(mutex_);
    std::vector<Weight> out;
    for (const auto& [k, w] : entries_) out.push_back(w);
    return out;
  }

  const std::vector<std::string>& diagnostics() const { return diagnostics_; }
  const std::string& path() const { return path_; }

 private:
  void insert(const Weight& w) {
    auto [it, inserted] = entries_.try_emplace({w.graph_key.text, w.angle_map}, w);
    if (!inserted && w.samples > it->second.samples) it->second = w;
  }

  std::string path_;
  mutable std::mutex mutex_;
  std::map<std::pair<std::string, std::string>, Weight> entries_;
  std::vector<std::string> diagnostics_;
};

/// Cached weight if one with at least `samples` samples exists, otherwise computed and stored.
inline Weight cached_weight(WeightCache* cache, const AdmissibleGraph& g, const AngleMap& angle, std::size_t samples,
                            std::uint64_t seed) {
  if (cache) {
    if (auto w = cache->get(g.key(), angle.id()); w && w->samples >= effective_samples(samples)) return *w;
  }
  Weight w = compute_weight(g, angle, samples, seed);
  if (cache) cache->put(w);
  return w;
}

}  // namespace kdq
