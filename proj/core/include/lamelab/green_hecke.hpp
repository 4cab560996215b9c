#pragma once

#include <string_view>
#include <vector>

#include "lamelab/elliptic.hpp"

namespace lamelab {

// Green function on E normalised with constant 0:
// G(z) = -(1/2pi) log|theta_1(z)/theta_1'(0)| + Im(z)^2 / (2 Im tau).
double green_value(Complex z, const LatticeContext& ctx);

// Z_{r,s}(tau) = zeta(r + s tau) - r eta1 - s eta2 = -4 pi dG/dz.
Complex hecke_Z(double r, double s, const LatticeContext& ctx);

// Same function from its q-expansion in exp(2 pi i tau); independent of the
// theta-quotient route. max_terms = 0 picks the truncation automatically.
Complex hecke_Z_qseries(double r, double s, const LatticeContext& ctx,
                        int max_terms = 0);

// Z with its partial derivatives in the real coordinates (r, s).
struct HeckeJet {
  Complex Z;
  Complex dr;
  Complex ds;
};
HeckeJet hecke_Z_jet(double r, double s, const LatticeContext& ctx);

struct CriticalSet {
  Complex tau;
  std::vector<TorusPoint> points;  // canonical, half periods first
  int count = 0;
};

// Zeros of Z on E (critical points of G): grid scan, then Newton. The three
// half periods are always included.
CriticalSet critical_points(const LatticeContext& ctx, int grid = 64);

enum class OmegaClass { kOmega3, kOmega5, kNearBoundary };

std::string_view omega_name(OmegaClass c);

// NearBoundary when an extra critical point sits within tol of a half period.
OmegaClass classify_omega(const CriticalSet& set, double tol = 1e-6);

// Winding number of tau -> Z_{r,s}(tau) along the boundary of the truncated
// Gamma_0(2) domain {0 <= Re tau <= 1, |tau - 1/2| >= 1/2, cusp_cut <= Im tau
// <= top}, i.e. the number of zeros inside.
int tau_winding_number(double r, double s, double cusp_cut = 0.05,
                       double top = 3.0);

}  // namespace lamelab
