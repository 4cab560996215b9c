#pragma once

#include <Eigen/Dense>
#include <optional>
#include <vector>

#include "lamelab/glame.hpp"

namespace lamelab {

using Mat2 = Eigen::Matrix2cd;

// I(z) = sum eta_i (eta_i + 1) wp(z - p_i) + sum A_i zeta(z - p_i) + B,
// eta_i = l_i / 2.
Complex potential(Complex z, const SourceDivisor& L, const LameParams& params,
                  const LatticeContext& ctx);

// Straight segment from a to b, or the arc center + radius e^{i theta} for
// theta running from theta0 to theta0 + sweep.
struct PathSegment {
  enum class Kind { kLine, kArc } kind = Kind::kLine;
  Complex a, b;
  Complex center;
  double radius = 0.0;
  double theta0 = 0.0;
  double sweep = 0.0;

  Complex start() const;
  Complex end() const;
};

using Path = std::vector<PathSegment>;

Path polyline(const std::vector<Complex>& pts);
Path circle(Complex center, double radius, double theta0 = 0.0);

struct TransportConfig {
  double abs_tol = 1e-12;
  double rel_tol = 1e-12;
  double min_clearance = 1e-3;  // PathTooClose below this
  long max_steps = 200000;      // per segment, StepUnderflow beyond
};

// M with (w, w')(end) = M (w, w')(start) for every solution.
Mat2 transport(const Path& path, const SourceDivisor& L, const LameParams& params,
               const LatticeContext& ctx, const TransportConfig& cfg = {});

// Distance from the path to the nearest lattice translate of a singular point.
double path_clearance(const Path& path, const SourceDivisor& L,
                      const LatticeContext& ctx);

struct MonodromyPair {
  Mat2 S1, S2;
  Complex base;
  double residual = 0.0;         // max Wronskian drift over both loops
  double commutator_defect = 0.0;  // ||S2^-1 S1^-1 S2 S1 - (-1)^l I||
  int total_weight = 0;
};

// Detour radius: 1e-2, shrunk to a third of the closest pair distance.
double detour_radius(const SourceDivisor& L, const LatticeContext& ctx);

// Line from a to b with counterclockwise arcs of the given radius around
// every singular point closer than that radius.
Path detoured_segment(Complex a, Complex b, const SourceDivisor& L,
                      const LatticeContext& ctx, double radius);

// Base point whose straight loops z0 -> z0 + 1 and z0 -> z0 + tau stay as
// far as possible from the singular points.
Complex auto_base_point(const SourceDivisor& L, const LatticeContext& ctx);

// S1 along z0 -> z0 + 1, S2 along z0 -> z0 + tau. Without z0 a base point is
// chosen by auto_base_point.
MonodromyPair monodromy_pair(const SourceDivisor& L, const LameParams& params,
                             const LatticeContext& ctx,
                             std::optional<Complex> z0 = std::nullopt,
                             const TransportConfig& cfg = {});

// Counterclockwise circle about p_i (index i) of radius detour_radius.
Mat2 local_monodromy(int i, const SourceDivisor& L, const LameParams& params,
                     const LatticeContext& ctx, const TransportConfig& cfg = {});

enum class Projective { kK4, kAbelianDiagonal, kAbelianUnipotent, kOther };

const char* projective_name(Projective p);

// Throws Inconsistent when the commutator is neither I nor -I within tol.
Projective classify_projective(const MonodromyPair& mp, double tol = 1e-5);

// Both eigenvalue ratios of modulus one within tol. Throws NotDiagonalizable
// for a unipotent pair.
bool unitarizable(const MonodromyPair& mp, double tol = 1e-6);

// F_i(a) = 2 (omega_i zeta(a) - eta_i a), omega_1 = 1, omega_2 = tau.
Complex period_integral(Complex a, int i, const LatticeContext& ctx);

// Same integral by the periodic trapezoid rule on wp'(a) / (wp(x) - wp(a))
// along x0 + t omega_i, x0 chosen clear of +-a.
Complex period_integral_quadrature(Complex a, int i, const LatticeContext& ctx,
                                   int nodes = 4096);

// u = 8 pi + log(|f'|^2 / (1 + |f|^2)^2). Throws CriticalPointOfF at f' = 0.
double u_density(Complex f, Complex fprime);

}  // namespace lamelab
