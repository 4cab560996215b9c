#pragma once

#include <array>
#include <cstdint>
#include <initializer_list>
#include <vector>

#include "lamelab/error.hpp"

namespace lamelab {

// A point on E = C / (Z + Z tau) in real coordinates, z = r + s tau.
// Callers may hold non-canonical representatives; canonical() maps into
// [0,1)^2.
struct TorusPoint {
  double r = 0.0;
  double s = 0.0;
  Complex z{0.0, 0.0};
};

// Weierstrass data of the lattice Z + Z tau (omega1 = 1, omega2 = tau).
//
// Evaluation goes through an equivalent lattice: tau' = (a tau + b)/(c tau + d)
// in the standard SL(2,Z) fundamental domain, so that Lambda_tau = mu
// Lambda_tau' with mu = c tau + d.
struct LatticeContext {
  Complex tau;
  Complex q;  // exp(i pi tau)
  Complex g2, g3;
  Complex eta1, eta2;  // 2 zeta(omega_i / 2)
  int series_terms = 0;  // truncation of the raw theta series at tau
  double tol = 1e-14;
  double clearance = 1e-3;  // minimal lattice distance for pole evaluation

  // Reduced lattice.
  std::array<int, 4> gamma{1, 0, 0, 1};  // (a, b, c, d)
  Complex tau_red;
  Complex mu{1.0, 0.0};
  Complex q_red;
  Complex eta1_red, eta2_red;
  int terms_red = 0;
};

LatticeContext make_context(Complex tau, int series_terms = 0);

// Truncated series for the k-th z-derivative of theta_1(z | tau), k <= 3.
Complex theta1(Complex z, const LatticeContext& ctx, int deriv = 0);
Complex theta1_series(Complex z, Complex tau, int terms, int deriv = 0);

struct WpValues {
  Complex wp;
  Complex dwp;
};

struct EllipticValues {
  Complex wp;
  Complex dwp;
  Complex zeta;
};

// Distance from z to the nearest lattice point.
double lattice_distance(Complex z, const LatticeContext& ctx);

// All of these throw PoleProximity when z lies within ctx.clearance of the
// lattice.
WpValues weierstrass(Complex z, const LatticeContext& ctx);
Complex zeta_w(Complex z, const LatticeContext& ctx);
EllipticValues elliptic_values(Complex z, const LatticeContext& ctx);

// sigma has zeros instead of poles, so no clearance is enforced.
Complex sigma_w(Complex z, const LatticeContext& ctx);
// A branch of log sigma(z); its real part is log|sigma(z)|.
Complex log_sigma(Complex z, const LatticeContext& ctx);

// eta(m + n tau) = m eta1 + n eta2.
Complex quasi_period(const LatticeContext& ctx, double m, double n);

struct Invariants {
  Complex g2;
  Complex g3;
};

// g2 = 60 G4, g3 = 140 G6 from the Lambert q-series with q = exp(2 pi i tau).
// terms <= 0 picks the truncation from |q|.
Invariants eisenstein(Complex tau, int terms);

TorusPoint make_point(const LatticeContext& ctx, double r, double s);
TorusPoint point_from_z(const LatticeContext& ctx, Complex z);
TorusPoint canonical(const LatticeContext& ctx, const TorusPoint& p);

// Solves wp(a) = x. sign_hint = +1 picks wp'(a) = +sqrt(4x^3 - g2 x - g3)
// (principal branch), -1 the other sign. Throws NoConvergence.
TorusPoint wp_inverse(Complex x, int sign_hint, const LatticeContext& ctx);

enum class TaylorKind { kZeta, kWp };

// Taylor coefficients c_0..c_kmax of zeta(z - shift) or wp(z - shift) at
// z = base. When base - shift is a lattice point the regular part of the
// Laurent expansion is returned instead.
std::vector<Complex> taylor_data(TaylorKind kind, Complex base, Complex shift,
                                 int kmax, const LatticeContext& ctx);

// Laurent coefficients wp(t) = 1/t^2 + sum_{k>=2} c_k t^{2k-2}; entry k of
// the result is c_k (entries 0 and 1 are zero).
std::vector<Complex> wp_laurent(const LatticeContext& ctx, int kmax);

struct IdentityReport {
  int samples = 0;
  double addition_law = 0.0;  // z2^2 = wp(a1+a2) + wp(a1) + wp(a2)
  double cubic = 0.0;         // n = 3 cubic for z3
  double zeta_sum = 0.0;      // (zeta(a)+zeta(b)+zeta(c))^2, a+b+c = 0
};

IdentityReport check_identities(const LatticeContext& ctx, int samples,
                                std::uint64_t seed);

// |residual| / max |term|, with the terms listed explicitly.
double scaled_residual(Complex residual, std::initializer_list<Complex> terms);

}  // namespace lamelab
