#pragma once

#include <span>
#include <vector>

#include "lamelab/elliptic.hpp"

namespace lamelab {

// s_0 = 1, s_1, ..., s_n of the Lame recursion at accessory parameter B.
std::vector<Complex> lame_sk(int n, Complex B, const LatticeContext& ctx);

// Spectral polynomial l_n(B), degree 2n + 1.
Complex lame_ln(int n, Complex B, const LatticeContext& ctx);

// Coefficients of X(x) = (-1)^n (x^n - s_1 x^{n-1} + ... + (-1)^n s_n),
// lowest degree first.
std::vector<Complex> spectral_poly(int n, Complex B, const LatticeContext& ctx);

// A point a = {a_1, ..., a_n} on X_n with x_i = wp(a_i), y_i = wp'(a_i).
struct XnPoint {
  int n = 0;
  Complex B;
  std::vector<TorusPoint> a;
  std::vector<Complex> x;
  std::vector<Complex> y;
};

// Throws RamifiedPoint when l_n(B) vanishes (a = -a) and NoSignPattern when
// no choice of signs satisfies sum y_i x_i^r = 0, r <= n - 2. Of a and -a the
// one whose sign vector starts with + (relative to principal square roots)
// is returned.
XnPoint point_on_Xn(int n, Complex B, const LatticeContext& ctx);

std::vector<Complex> xn_points(const XnPoint& p);

// z_n(a) = zeta(a_1 + ... + a_n) - sum zeta(a_i).
Complex zn_value(std::span<const Complex> a, const LatticeContext& ctx);

struct WnValue {
  Complex value;
  double scale = 0.0;  // largest monomial modulus
};

// W_n(z) with wp, wp' taken at sigma; n in 1..4.
WnValue Wn_eval_scaled(int n, Complex z, Complex sigma, const LatticeContext& ctx);
Complex Wn_eval(int n, Complex z, Complex sigma, const LatticeContext& ctx);

// Z_n(sigma) = W_n(Z(sigma)), sigma = r + s tau. Z_1 = Z.
Complex Zn_premodular(int n, double r, double s, const LatticeContext& ctx);

struct Type2Solution {
  TorusPoint sigma;
  XnPoint a;
  Complex z;               // z_n(a) = Z(sigma)
  double grad_residual = 0.0;  // |sum_i Z(a_i)|
};

// Nontrivial zeros of Z_n (sigma outside E[2]) and the matching points of
// X_n. n = 1 or 2.
std::vector<Type2Solution> find_type2(int n, const LatticeContext& ctx,
                                      int grid = 64);

// w_a(z) = exp(z sum zeta(a_i)) prod sigma(z - a_i) / (sigma(z) sigma(a_i)).
Complex hermite_halphen(std::span<const Complex> a, Complex z,
                        const LatticeContext& ctx);
// w_a'(z) / w_a(z).
Complex hermite_halphen_logderiv(std::span<const Complex> a, Complex z,
                                 const LatticeContext& ctx);

// Points of X_2 with a_1 + a_2 = sigma0 (as complex numbers).
std::vector<XnPoint> sigma2_fiber(Complex sigma0, const LatticeContext& ctx);

// Number of distinct B whose X_n point sums to sigma0; n = 1 or 2.
int sigma_n_degree_probe(int n, Complex sigma0, const LatticeContext& ctx);

}  // namespace lamelab
