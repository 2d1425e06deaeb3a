#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "loconc/distribution.hpp"

namespace loconc::testkit {

// Random finite-discrete law with `atoms` atoms drawn from [-spread, spread].
inline DiscreteLaw random_law(std::mt19937_64& rng, int atoms, double spread = 3.0) {
  std::uniform_real_distribution<double> pos(-spread, spread);
  std::uniform_real_distribution<double> w(0.05, 1.0);
  std::vector<double> x(atoms), p(atoms);
  double total = 0.0;
  for (int i = 0; i < atoms; ++i) {
    x[i] = pos(rng);
    p[i] = w(rng);
    total += p[i];
  }
  for (double& v : p) v /= total;
  return make_discrete(x, p);
}

inline std::vector<double> random_vector(std::mt19937_64& rng, int n, double lo, double hi) {
  std::uniform_real_distribution<double> u(lo, hi);
  std::vector<double> a(n);
  for (double& v : a) v = u(rng);
  return a;
}

}  // namespace loconc::testkit
