#include "lamelab/green_hecke.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "internal.hpp"
#include "torus_search.hpp"

namespace lamelab {

using std::numbers::pi;
constexpr Complex kI{0.0, 1.0};

double green_value(Complex z, const LatticeContext& ctx) {
  TorusPoint p = point_from_z(ctx, z);
  p = make_point(ctx, p.r - std::round(p.r), p.s - std::round(p.s));
  const Complex ls = log_sigma(p.z, ctx);
  const double log_theta_ratio =
      ls.real() - (ctx.eta1 * p.z * p.z / 2.0).real();
  const double y = p.z.imag();
  return -log_theta_ratio / (2.0 * pi) + y * y / (2.0 * ctx.tau.imag());
}

Complex hecke_Z(double r, double s, const LatticeContext& ctx) {
  const double rr = r - std::round(r), ss = s - std::round(s);
  return zeta_w(rr + ss * ctx.tau, ctx) - rr * ctx.eta1 - ss * ctx.eta2;
}

HeckeJet hecke_Z_jet(double r, double s, const LatticeContext& ctx) {
  const double rr = r - std::round(r), ss = s - std::round(s);
  const EllipticValues v = elliptic_values(rr + ss * ctx.tau, ctx);
  HeckeJet j;
  j.Z = v.zeta - rr * ctx.eta1 - ss * ctx.eta2;
  j.dr = -v.wp - ctx.eta1;
  j.ds = -v.wp * ctx.tau - ctx.eta2;
  return j;
}

Complex hecke_Z_qseries(double r, double s, const LatticeContext& ctx,
                        int max_terms) {
  const double rr = r - std::floor(r);
  double ss = s - std::round(s);  // |s| <= 1/2 keeps both sums convergent
  const Complex z = rr + ss * ctx.tau;
  const Complex x = std::exp(2.0 * pi * kI * z);
  const Complex xi = 1.0 / x;
  const Complex Q = std::exp(2.0 * pi * kI * ctx.tau);
  const double b = ctx.tau.imag();
  int terms = max_terms;
  if (terms <= 0) {
    // |Q|^n e^{2 pi b |s|} < 1e-18
    terms = static_cast<int>(std::ceil(41.5 / (2.0 * pi * b) + std::abs(ss))) + 2;
    terms = std::min(terms, 2000000);
  }
  Complex sum{0.0, 0.0};
  Complex qn = Q;
  for (int n = 1; n <= terms; ++n) {
    const Complex a1 = x * qn, a2 = xi * qn;
    sum += a1 / (1.0 - a1) - a2 / (1.0 - a2);
    qn *= Q;
    if (std::abs(a1) + std::abs(a2) < 1e-19) break;
  }
  return 2.0 * pi * kI * (ss - 0.5) - pi * kI * 2.0 * x / (1.0 - x) -
         2.0 * pi * kI * sum;
}

namespace {

std::vector<std::array<double, 2>> half_periods() {
  return {{0.5, 0.0}, {0.0, 0.5}, {0.5, 0.5}};
}

double wrap01(double x) {
  double y = x - std::floor(x);
  return y >= 1.0 ? 0.0 : y;
}

}  // namespace

CriticalSet critical_points(const LatticeContext& ctx, int grid) {
  // Work on the reduced lattice, where the torus is well shaped, and map the
  // zeros back: r = d r' + b s', s = c r' + a s'.
  const LatticeContext red = make_context(ctx.tau_red);
  const auto [a, b, c, d] = ctx.gamma;

  detail::JetFn fn = [&red](double r, double s) {
    const HeckeJet j = hecke_Z_jet(r, s, red);
    return detail::Jet2{j.Z, j.dr, j.ds};
  };
  detail::ZeroSearchOptions opt;
  opt.grid = std::max(grid, 32);
  opt.origin_exclusion = 1.5 / opt.grid;
  const auto zeros = detail::torus_zero_search(fn, opt);

  std::vector<std::array<double, 2>> pts = half_periods();
  auto known = [&](double r, double s) {
    for (const auto& p : pts) {
      if (detail::torus_distance(p[0], p[1], r, s) < 1e-7) return true;
    }
    return false;
  };
  for (const auto& z : zeros) {
    if (known(z[0], z[1])) continue;
    pts.push_back(z);
    // Z is odd, so -p is a zero as well.
    const double mr = wrap01(-z[0]), ms = wrap01(-z[1]);
    if (!known(mr, ms)) pts.push_back({mr, ms});
  }

  CriticalSet set;
  set.tau = ctx.tau;
  for (const auto& p : pts) {
    const double r = d * p[0] + b * p[1];
    const double s = c * p[0] + a * p[1];
    set.points.push_back(canonical(ctx, make_point(ctx, r, s)));
  }
  set.count = static_cast<int>(set.points.size());
  return set;
}

std::string_view omega_name(OmegaClass c) {
  switch (c) {
    case OmegaClass::kOmega3: return "Omega3";
    case OmegaClass::kOmega5: return "Omega5";
    case OmegaClass::kNearBoundary: return "NearBoundary";
  }
  return "Unknown";
}

OmegaClass classify_omega(const CriticalSet& set, double tol) {
  const auto hp = half_periods();
  for (size_t k = 3; k < set.points.size(); ++k) {
    for (const auto& h : hp) {
      if (detail::torus_distance(set.points[k].r, set.points[k].s, h[0], h[1]) <
          tol) {
        return OmegaClass::kNearBoundary;
      }
    }
  }
  return set.count >= 5 ? OmegaClass::kOmega5 : OmegaClass::kOmega3;
}

namespace {

Complex z_at(double r, double s, Complex tau) {
  return hecke_Z(r, s, make_context(tau));
}

// Accumulated change of arg Z along the straight segment [t0, t1], refined
// until consecutive samples differ by less than 0.3 rad.
double arg_change(double r, double s, Complex t0, Complex t1, Complex f0,
                  Complex f1, int depth) {
  const double da = std::arg(f1 / f0);
  if (depth > 30 || std::abs(da) < 0.3) return da;
  const Complex tm = 0.5 * (t0 + t1);
  const Complex fm = z_at(r, s, tm);
  return arg_change(r, s, t0, tm, f0, fm, depth + 1) +
         arg_change(r, s, tm, t1, fm, f1, depth + 1);
}

}  // namespace

int tau_winding_number(double r, double s, double cusp_cut, double top) {
  const double dx = std::sqrt(0.25 - cusp_cut * cusp_cut);
  std::vector<Complex> path;
  const int kLine = 64, kArc = 128;
  // circle arc from near 0 to near 1 through 1/2 + i/2
  const double th0 = std::atan2(cusp_cut, -dx);
  const double th1 = std::atan2(cusp_cut, dx);
  path.push_back(Complex(0.0, cusp_cut));
  for (int k = 0; k <= kArc; ++k) {
    const double th = th0 + (th1 - th0) * k / kArc;
    path.push_back(0.5 + 0.5 * std::exp(kI * th));
  }
  for (int k = 0; k <= kLine; ++k) {
    path.push_back(Complex(1.0, cusp_cut + (top - cusp_cut) * k / kLine));
  }
  for (int k = 1; k <= kLine; ++k) {
    path.push_back(Complex(1.0 - static_cast<double>(k) / kLine, top));
  }
  for (int k = 1; k <= kLine; ++k) {
    path.push_back(Complex(0.0, top - (top - cusp_cut) * k / kLine));
  }
  std::vector<Complex> vals(path.size());
  detail::parallel_for(static_cast<int>(path.size()),
                       [&](int k) { vals[k] = z_at(r, s, path[k]); });
  double total = 0.0;
  for (size_t k = 0; k + 1 < path.size(); ++k) {
    total += arg_change(r, s, path[k], path[k + 1], vals[k], vals[k + 1], 0);
  }
  return static_cast<int>(std::lround(total / (2.0 * pi)));
}

}  // namespace lamelab
