#pragma once

#include <cmath>
#include <random>

#include "vacrabi/core_model.hpp"

namespace vacrabi::testing {

// Log-uniform in [lo, hi].
inline double log_uniform(std::mt19937_64& rng, double lo, double hi) {
  std::uniform_real_distribution<double> u(std::log(lo), std::log(hi));
  return std::exp(u(rng));
}

// Every two-doublet rate strictly positive, spread over five decades.
inline RateTable random_rates(std::mt19937_64& rng, double lo = 0.1, double hi = 1e4) {
  RateTable r;
  for (double* x : {&r.gamma1, &r.gamma2, &r.gamma3, &r.gamma_a, &r.gamma_b, &r.gamma_c, &r.gamma4, &r.gamma5,
                    &r.gamma6, &r.gamma7, &r.gamma8, &r.gamma_e}) {
    *x = log_uniform(rng, lo, hi);
  }
  return r;
}

}  // namespace vacrabi::testing
