#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <span>
#include <vector>

#include "lamelab/elliptic.hpp"
#include "lamelab/multipoly.hpp"

namespace lamelab {

using Rational = boost::multiprecision::cpp_rational;

// Singular points p_i with weights l_i = 2 eta_i. Points are used exactly as
// given (not reduced mod the lattice); B depends on that choice.
struct SourceDivisor {
  std::vector<TorusPoint> points;
  std::vector<int> weights;

  int size() const { return static_cast<int>(points.size()); }
  int total_weight() const;
};

struct LameParams {
  std::vector<Complex> A;
  Complex B;
};

// Polynomial system in (A_1, ..., A_N, B): eqs[0] = sum A_i, eqs[i] = F_i.
// `tagged` carries one more variable u whose exponent records the weight of
// the lattice data (zeta Taylor coefficient of order k has weight k + 1, wp
// of order k has weight k + 2) in each coefficient.
struct GLameSystem {
  SourceDivisor divisor;
  int nvars = 0;  // N + 1
  std::vector<MultiPoly<Complex>> eqs;
  std::vector<MultiPoly<Complex>> tagged;
};

// Throws DistinctnessViolation when two points coincide mod the lattice.
GLameSystem build_system(const SourceDivisor& L, const LatticeContext& ctx);

// Weights for (A_1..A_N, B[, u]) used by the homogeneity checks.
std::vector<int> system_weights(int N, bool tagged);

// q_l(A, B) in variables (A, B) with exact coefficients.
MultiPoly<Rational> top_term_closed(int l);
MultiPoly<Rational> top_term_recursive(int l);
MultiPoly<Complex> to_complex(const MultiPoly<Rational>& p);

// Continuous extension e^_k(s); throws PoleAtInteger for s in {0, 1, ..., k}.
Complex ehat_eval(Complex s, int k, Complex A, Complex B);

// 1/2 prod (l_i + 1); throws EvenTotalWeight.
long long degree_formula(const SourceDivisor& L);

struct SolveConfig {
  int max_starts = 4000;
  std::uint64_t seed = 1;
  double dedup_rel = 1e-7;
  double residual_tol = 1e-10;
  int batch = 8;
};

struct SolveResult {
  std::vector<LameParams> solutions;
  std::vector<double> residuals;  // max_i |F_i| / sum |terms of F_i|
  long long expected = -1;        // -1 for even total weight
  int starts_used = 0;
  bool complete = false;
};

// Multistart damped Newton with deflation. Stops once the expected number
// of roots is reached (odd total weight) or max_starts is exhausted.
SolveResult solve_system(const GLameSystem& sys, const LatticeContext& ctx,
                         const SolveConfig& cfg = {});

// Throws PartialEnumeration when the result is short of the expected count.
void require_complete(const SolveResult& r);

double system_residual(const GLameSystem& sys, const LameParams& p);

// Symmetric primitive divisor: N = 2n + 1, p_{n+i} = -p_i, p_{2n+1} = 0.
// Solves the reduced system for A_{n+i} = -A_i, A_{2n+1} = 0 and returns
// the lifted solutions (2^n expected).
SolveResult symmetric_reduce(const GLameSystem& sys, const LatticeContext& ctx,
                             const SolveConfig& cfg = {});

// Symmetric primitive divisor with N = 2n, p_{n+i} = -p_i: points on the
// solution curve with A_{n+i} = -A_i, one for each prescribed A_1.
SolveResult symmetric_even_family(const GLameSystem& sys,
                                  std::span<const Complex> a1_values,
                                  const SolveConfig& cfg = {});

// Germ x_i(t) = eps_i sum_k a_{i,k} t^k at infinity for primitive even l.
struct GermSeries {
  std::vector<int> signs;                    // eps_i, sum = 0
  std::vector<std::vector<Complex>> coeffs;  // coeffs[i][k], k = 1..K
  // Sum of the moduli of the terms that produced coeffs[i][k]; the natural
  // scale when cancellation leaves coeffs[i][k] itself near zero.
  std::vector<std::vector<double>> magnitudes;
};

GermSeries germ_series(const SourceDivisor& L, const LatticeContext& ctx,
                       std::span<const int> signs, int K);

struct GermConstraints {
  std::vector<Complex> values;  // values[k] = sum_i eps_i a_{i,k}
  std::vector<double> scales;   // max_i magnitudes[i][k]
  Complex k4_lhs;               // sum eps_i zhat_i^3
  Complex k4_rhs;               // 3 sum eps_i zhat_i wp_i
};

GermConstraints germ_constraints(const SourceDivisor& L,
                                 const LatticeContext& ctx,
                                 const GermSeries& g);

std::vector<int> alternating_signs(int N);

struct L4Identity {
  Complex lhs;  // wp_24 - wp_13
  Complex rhs;  // (z24 - z13 + z12 - z34)(z24 + z13 - z14 - z23)
  double scale = 0.0;
};

L4Identity verify_l4_identity(std::span<const Complex> p,
                              const LatticeContext& ctx);

}  // namespace lamelab
