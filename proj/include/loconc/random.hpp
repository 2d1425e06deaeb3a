#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <span>
#include <thread>
#include <vector>

#include "loconc/distribution.hpp"

namespace loconc {

// Samples are generated in fixed-size chunks; chunk k uses its own engine
// seeded from (seed, k). Output depends only on (seed, count), never on the
// number of worker threads.
inline constexpr std::size_t kSampleChunk = 1u << 16;

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::mt19937_64 chunk_engine(std::uint64_t seed, std::uint64_t chunk, std::uint64_t stream = 0) {
  return std::mt19937_64(splitmix64(splitmix64(seed ^ splitmix64(stream)) + chunk));
}

// Uniform on [0,1) with 53 random bits. Spelled out because
// std::uniform_real_distribution is not reproducible across standard libraries.
inline double unit_uniform(std::mt19937_64& eng) {
  return static_cast<double>(eng() >> 11) * 0x1.0p-53;
}

inline double standard_normal(std::mt19937_64& eng) {
  double u1 = unit_uniform(eng);
  while (u1 <= 0.0) u1 = unit_uniform(eng);
  const double u2 = unit_uniform(eng);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

// Draws one variate per call; discrete laws use inverse-CDF lookup.
class VariateSource {
 public:
  explicit VariateSource(const Distribution& F) : law_(F) {
    if (auto d = to_discrete(F)) {
      discrete_ = true;
      atoms_.assign(d->atoms().begin(), d->atoms().end());
      cdf_.resize(d->size());
      double acc = 0.0;
      for (std::size_t i = 0; i < d->size(); ++i) cdf_[i] = (acc += d->probs()[i]);
      cdf_.back() = 1.0;
    }
  }

  double operator()(std::mt19937_64& eng) const {
    if (discrete_) {
      if (atoms_.size() == 1) return atoms_.front();
      const double u = unit_uniform(eng);
      const auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
      return atoms_[std::min<std::size_t>(it - cdf_.begin(), atoms_.size() - 1)];
    }
    if (const auto* uni = std::get_if<UniformLaw>(&law_))
      return uni->a + (uni->b - uni->a) * unit_uniform(eng);
    const auto& s = std::get<SamplerLaw>(law_);
    return s.params[0] + s.params[1] * standard_normal(eng);
  }

 private:
  Distribution law_;
  bool discrete_ = false;
  std::vector<double> atoms_;
  std::vector<double> cdf_;
};

// Runs fill(chunk_index, begin, end) over [0, count) in fixed chunks,
// spread across worker threads. Each chunk writes a disjoint range.
template <class Fill>
void for_each_chunk(std::size_t count, unsigned threads, Fill fill) {
  const std::size_t chunks = (count + kSampleChunk - 1) / kSampleChunk;
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(chunks)));
  auto work = [&](unsigned worker) {
    for (std::size_t c = worker; c < chunks; c += threads)
      fill(c, c * kSampleChunk, std::min(count, (c + 1) * kSampleChunk));
  };
  if (threads == 1) {
    work(0);
    return;
  }
  std::vector<std::jthread> pool;
  pool.reserve(threads);
  for (unsigned w = 0; w < threads; ++w) pool.emplace_back(work, w);
}

inline unsigned default_threads() { return std::max(1u, std::thread::hardware_concurrency()); }

}  // namespace loconc
