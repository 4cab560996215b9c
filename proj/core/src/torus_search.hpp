#pragma once

#include <array>
#include <functional>
#include <vector>

#include "lamelab/error.hpp"

namespace lamelab::detail {

// Value and (r, s)-derivatives of a smooth map E -> C in real coordinates.
struct Jet2 {
  Complex f;
  Complex fr;
  Complex fs;
};

using JetFn = std::function<Jet2(double r, double s)>;

struct ZeroSearchOptions {
  int grid = 64;
  double origin_exclusion = 0.0;  // skip nodes this close to (0,0) mod 1
  double dedup = 1e-7;
};

// Zeros of f on [0,1)^2 (f periodic). Candidates come from cells with a
// nonzero winding number and from local minima of |f| on the grid; each is
// polished by Newton on the real 2x2 system. Returns canonical (r, s).
std::vector<std::array<double, 2>> torus_zero_search(const JetFn& fn,
                                                     const ZeroSearchOptions& opt);

// Newton polish from a start point; false if it does not converge.
bool torus_newton(const JetFn& fn, double& r, double& s, double fscale,
                  double max_step);

double torus_distance(double r1, double s1, double r2, double s2);

}  // namespace lamelab::detail
