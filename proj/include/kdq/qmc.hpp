#pragma once

#include "kdq/measured.hpp"

#include <boost/random/sobol.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

namespace kdq {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Samples actually drawn for a requested count: a whole number of points per replicate.
inline std::size_t effective_samples(std::size_t requested, std::size_t replicates = 32) {
  return std::max<std::size_t>(1, requested / replicates) * replicates;
}

struct QmcEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::size_t samples = 0;
};

/// Randomized quasi-Monte-Carlo integration over the open unit cube.
///
/// The first ⌊samples/replicates⌋ Sobol points are reused by every replicate, each under
/// its own random digital shift derived from (seed, replicate, coordinate). The estimate
/// is the mean of the replicate means and the standard error their spread / √replicates.
/// Points never touch the cube boundary.
class RqmcIntegrator {
 public:
  static constexpr std::size_t kReplicates = 32;

  RqmcIntegrator(std::size_t dim, std::size_t samples, std::uint64_t seed)
      : dim_(dim), per_replicate_(std::max<std::size_t>(1, samples / kReplicates)), seed_(seed) {
    if (dim_ == 0) throw std::invalid_argument("RQMC needs a positive dimension");
    boost::random::sobol gen(dim_);
    points_.resize(per_replicate_ * dim_);
    for (auto& v : points_) v = gen();
  }

  std::size_t dim() const { return dim_; }
  std::size_t samples() const { return per_replicate_ * kReplicates; }

  /// f receives a span of dim() coordinates in (0,1).
  template <class F>
  QmcEstimate integrate(F&& f) const {
    std::vector<double> u(dim_);
    std::vector<std::uint64_t> shift(dim_);
    std::vector<double> means(kReplicates);
    for (std::size_t r = 0; r < kReplicates; ++r) {
      for (std::size_t d = 0; d < dim_; ++d)
        shift[d] = splitmix64(splitmix64(seed_ ^ (0x5851f42d4c957f2dULL * (r + 1))) + d);
      CompensatedSum sum;
      for (std::size_t i = 0; i < per_replicate_; ++i) {
        const std::uint64_t* x = &points_[i * dim_];
        for (std::size_t d = 0; d < dim_; ++d)
          u[d] = (static_cast<double>((x[d] ^ shift[d]) >> 11) + 0.5) * 0x1.0p-53;
        sum.add(f(std::span<const double>(u)));
      }
      means[r] = sum.value() / static_cast<double>(per_replicate_);
    }
    CompensatedSum total;
    for (double m : means) total.add(m);
    QmcEstimate est;
    est.mean = total.value() / kReplicates;
    double var = 0.0;
    for (double m : means) var += (m - est.mean) * (m - est.mean);
    var /= static_cast<double>(kReplicates - 1);
    est.std_error = std::sqrt(var / kReplicates);
    est.samples = samples();
    return est;
  }

 private:
  std::size_t dim_;
  std::size_t per_replicate_;
  std::uint64_t seed_;
  std::vector<std::uint64_t> points_;
};

}  // namespace kdq
