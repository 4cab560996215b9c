#pragma once

#include "lamelab/elliptic.hpp"

namespace lamelab::detail {

// z / mu = w0 + m + n tau' with w0 in the centred cell of the reduced lattice.
struct Reduced {
  Complex w0;
  double m = 0.0;
  double n = 0.0;
};

struct ReducedValues {
  Complex wp, dwp, zeta;
};

Reduced reduce(const LatticeContext& ctx, Complex z);
ReducedValues reduced_values(const LatticeContext& ctx, Complex w0);

// No clearance check; callers guarantee z is off the lattice.
EllipticValues values_unchecked(const LatticeContext& ctx, Complex z);

// Worker count from LAMELAB_THREADS (default: hardware concurrency).
int thread_count();

}  // namespace lamelab::detail

#include <algorithm>
#include <thread>
#include <vector>

namespace lamelab::detail {

// Runs f(i) for i in [0, n); results must be written to per-index slots so
// the outcome does not depend on scheduling.
template <class F>
void parallel_for(int n, F&& f) {
  const int workers = std::min(thread_count(), n);
  if (workers <= 1) {
    for (int i = 0; i < n; ++i) f(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (int i = w; i < n; i += workers) f(i);
    });
  }
  for (auto& t : pool) t.join();
}

}  // namespace lamelab::detail
