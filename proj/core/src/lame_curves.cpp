#include "lamelab/lame_curves.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "internal.hpp"
#include "lamelab/green_hecke.hpp"
#include "torus_search.hpp"

namespace lamelab {

std::vector<Complex> lame_sk(int n, Complex B, const LatticeContext& ctx) {
  if (n < 1) throw Error(ErrorCode::kInvalidArgument, "n must be positive");
  // s[k + 2] holds s_k so that s_{-1} = s_{-2} = 0.
  std::vector<Complex> s(n + 3, Complex{0.0, 0.0});
  auto at = [&](int k) -> Complex& { return s[k + 2]; };
  at(0) = 1.0;
  for (int mu = n - 1; mu >= 0; --mu) {
    const double m1 = mu + 1.0, m2 = mu + 2.0, m3 = mu + 3.0;
    const int k = n - mu;
    const Complex rhs = 4.0 * m1 * B * at(k - 1) -
                        0.5 * ctx.g2 * m1 * m2 * (2.0 * mu + 3.0) * at(k - 2) +
                        ctx.g3 * m1 * m2 * m3 * at(k - 3);
    at(k) = rhs / (2.0 * (n - mu) * (2.0 * mu + 1.0) * (n + mu + 1.0));
  }
  return std::vector<Complex>(s.begin() + 2, s.end());
}

namespace {

struct LnTerms {
  Complex value;
  double scale;
};

LnTerms ln_terms(int n, Complex B, const LatticeContext& ctx) {
  const std::vector<Complex> s = lame_sk(n, B, ctx);
  auto at = [&](int k) { return k < 0 ? Complex{} : s[k]; };
  const Complex t1 = 4.0 * B * at(n) * at(n);
  const Complex t2 = 4.0 * ctx.g3 * at(n - 2) * at(n);
  const Complex t3 = -ctx.g2 * at(n - 1) * at(n);
  const Complex t4 = -ctx.g3 * at(n - 1) * at(n - 1);
  const double scale =
      std::max({std::abs(t1), std::abs(t2), std::abs(t3), std::abs(t4)});
  return {t1 + t2 + t3 + t4, scale};
}

// Roots of a monic polynomial, highest coefficient first after the leading 1.
std::vector<Complex> monic_roots(const std::vector<Complex>& c) {
  const int n = static_cast<int>(c.size());
  if (n == 0) return {};
  Eigen::MatrixXcd comp = Eigen::MatrixXcd::Zero(n, n);
  for (int j = 0; j < n; ++j) comp(0, j) = -c[j];
  for (int i = 1; i < n; ++i) comp(i, i - 1) = 1.0;
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(comp, false);
  std::vector<Complex> roots(es.eigenvalues().data(),
                             es.eigenvalues().data() + n);
  auto eval = [&](Complex x, Complex* d) {
    Complex p = 1.0, dp = 0.0;
    for (int j = 0; j < n; ++j) {
      dp = dp * x + p;
      p = p * x + c[j];
    }
    *d = dp;
    return p;
  };
  for (Complex& x : roots) {
    for (int it = 0; it < 4; ++it) {
      Complex d;
      const Complex p = eval(x, &d);
      if (std::abs(d) == 0.0) break;
      const Complex step = p / d;
      if (!std::isfinite(step.real()) || std::abs(step) > 1e-3 * (1.0 + std::abs(x))) break;
      x -= step;
    }
  }
  std::sort(roots.begin(), roots.end(), [](Complex a, Complex b) {
    return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
  });
  return roots;
}

}  // namespace

Complex lame_ln(int n, Complex B, const LatticeContext& ctx) {
  return ln_terms(n, B, ctx).value;
}

std::vector<Complex> spectral_poly(int n, Complex B, const LatticeContext& ctx) {
  const std::vector<Complex> s = lame_sk(n, B, ctx);
  std::vector<Complex> coef(n + 1);
  for (int j = 0; j <= n; ++j) {
    coef[n - j] = (((n + j) % 2 == 0) ? 1.0 : -1.0) * s[j];
  }
  return coef;
}

XnPoint point_on_Xn(int n, Complex B, const LatticeContext& ctx) {
  const LnTerms ln = ln_terms(n, B, ctx);
  if (std::abs(ln.value) <= 1e-10 * ln.scale) {
    throw Error(ErrorCode::kRamifiedPoint, "l_n(B) = 0: a = -a on X_n");
  }
  const std::vector<Complex> s = lame_sk(n, B, ctx);
  std::vector<Complex> monic(n);
  for (int j = 1; j <= n; ++j) monic[j - 1] = ((j % 2 == 0) ? 1.0 : -1.0) * s[j];
  const std::vector<Complex> x = monic_roots(monic);

  std::vector<TorusPoint> a(n);
  std::vector<Complex> y(n);
  for (int i = 0; i < n; ++i) {
    a[i] = wp_inverse(x[i], +1, ctx);
    y[i] = weierstrass(a[i].z, ctx).dwp;
  }

  // Sign patterns with the first sign +, i.e. the smaller of eps and -eps.
  int best_mask = 0;
  double best_res = 1e300;
  for (int mask = 0; mask < (1 << (n - 1)); ++mask) {
    double worst = 0.0;
    for (int r = 0; r <= n - 2; ++r) {
      Complex sum{0.0, 0.0};
      double scale = 0.0;
      for (int i = 0; i < n; ++i) {
        const double e = (i > 0 && (mask >> (i - 1)) & 1) ? -1.0 : 1.0;
        const Complex t = y[i] * std::pow(x[i], r);
        sum += e * t;
        scale = std::max(scale, std::abs(t));
      }
      worst = std::max(worst, std::abs(sum) / std::max(scale, 1e-300));
    }
    if (worst < best_res) {
      best_res = worst;
      best_mask = mask;
    }
  }
  if (best_res > 1e-7) {
    throw Error(ErrorCode::kNoSignPattern, "no sign vector satisfies the X_n equations");
  }
  XnPoint p;
  p.n = n;
  p.B = B;
  for (int i = 0; i < n; ++i) {
    const bool flip = i > 0 && ((best_mask >> (i - 1)) & 1);
    if (flip) {
      a[i] = canonical(ctx, point_from_z(ctx, -a[i].z));
      y[i] = -y[i];
    }
  }
  p.a = a;
  p.x = x;
  p.y = y;
  return p;
}

std::vector<Complex> xn_points(const XnPoint& p) {
  std::vector<Complex> out;
  for (const TorusPoint& t : p.a) out.push_back(t.z);
  return out;
}

Complex zn_value(std::span<const Complex> a, const LatticeContext& ctx) {
  Complex sum{0.0, 0.0}, zs{0.0, 0.0};
  for (const Complex& ai : a) {
    sum += ai;
    zs += zeta_w(ai, ctx);
  }
  return zeta_w(sum, ctx) - zs;
}

WnValue Wn_eval_scaled(int n, Complex z, Complex sigma,
                       const LatticeContext& ctx) {
  const WpValues v = weierstrass(sigma, ctx);
  const Complex p = v.wp, dp = v.dwp, g2 = ctx.g2, g3 = ctx.g3;
  std::vector<Complex> t;
  switch (n) {
    case 1:
      t = {z};
      break;
    case 2:
      t = {z * z * z, -3.0 * p * z, -dp};
      break;
    case 3:
      t = {std::pow(z, 6), -15.0 * p * std::pow(z, 4), -20.0 * dp * std::pow(z, 3),
           (27.0 / 4.0 * g2 - 45.0 * p * p) * z * z, -12.0 * dp * p * z,
           -5.0 / 4.0 * dp * dp};
      break;
    case 4: {
      const Complex p2 = p * p, p3 = p2 * p, p4 = p3 * p;
      t = {std::pow(z, 10),
           -45.0 * p * std::pow(z, 8),
           -120.0 * dp * std::pow(z, 7),
           (399.0 / 4.0 * g2 - 630.0 * p2) * std::pow(z, 6),
           -504.0 * p * dp * std::pow(z, 5),
           -15.0 / 4.0 * (280.0 * p3 - 49.0 * g2 * p - 115.0 * g3) * std::pow(z, 4),
           15.0 * (11.0 * g2 - 24.0 * p2) * dp * std::pow(z, 3),
           -9.0 / 4.0 *
               (140.0 * p4 - 245.0 * g2 * p2 + 190.0 * g3 * p + 21.0 * g2 * g2) *
               z * z,
           -(40.0 * p3 - 163.0 * g2 * p + 125.0 * g3) * dp * z,
           3.0 / 4.0 * (25.0 * g2 - 3.0 * p2) * dp * dp};
      break;
    }
    default:
      throw Error(ErrorCode::kInvalidArgument, "W_n is available for n <= 4");
  }
  WnValue out{Complex{0.0, 0.0}, 0.0};
  for (const Complex& c : t) {
    out.value += c;
    out.scale = std::max(out.scale, std::abs(c));
  }
  return out;
}

Complex Wn_eval(int n, Complex z, Complex sigma, const LatticeContext& ctx) {
  return Wn_eval_scaled(n, z, sigma, ctx).value;
}

Complex Zn_premodular(int n, double r, double s, const LatticeContext& ctx) {
  const Complex Z = hecke_Z(r, s, ctx);
  if (n == 1) return Z;
  return Wn_eval(n, Z, r + s * ctx.tau, ctx);
}

Complex hermite_halphen(std::span<const Complex> a, Complex z,
                        const LatticeContext& ctx) {
  Complex lz{0.0, 0.0}, zsum{0.0, 0.0};
  const Complex ls_z = log_sigma(z, ctx);
  for (const Complex& ai : a) {
    zsum += zeta_w(ai, ctx);
    lz += log_sigma(z - ai, ctx) - ls_z - log_sigma(ai, ctx);
  }
  return std::exp(z * zsum + lz);
}

Complex hermite_halphen_logderiv(std::span<const Complex> a, Complex z,
                                 const LatticeContext& ctx) {
  Complex out{0.0, 0.0};
  const Complex zz = zeta_w(z, ctx);
  for (const Complex& ai : a) out += zeta_w(ai, ctx) + zeta_w(z - ai, ctx) - zz;
  return out;
}

std::vector<XnPoint> sigma2_fiber(Complex sigma0, const LatticeContext& ctx) {
  // h(a1) = wp'(a1) + wp'(sigma0 - a1) has two triple poles per cell, so six
  // zeros: three unordered pairs {a1, a2}.
  constexpr int kGrid = 10;
  std::vector<Complex> found(kGrid * kGrid);
  std::vector<char> ok(found.size(), 0);
  detail::parallel_for(kGrid * kGrid, [&](int k) {
    const double r0 = (k / kGrid + 0.31) / kGrid;
    const double s0 = (k % kGrid + 0.23) / kGrid;
    Complex a1 = r0 + s0 * ctx.tau;
    for (int it = 0; it < 100; ++it) {
      EllipticValues u, v;
      try {
        u = elliptic_values(a1, ctx);
        v = elliptic_values(sigma0 - a1, ctx);
      } catch (const Error&) {
        return;
      }
      const Complex h = u.dwp + v.dwp;
      const Complex d2u = 6.0 * u.wp * u.wp - ctx.g2 / 2.0;
      const Complex d2v = 6.0 * v.wp * v.wp - ctx.g2 / 2.0;
      const Complex dh = d2u - d2v;
      const double scale = std::abs(u.dwp) + std::abs(v.dwp);
      if (std::abs(h) <= 1e-13 * scale) {
        found[k] = a1;
        ok[k] = 1;
        return;
      }
      Complex step = h / dh;
      if (!std::isfinite(step.real()) || !std::isfinite(step.imag())) return;
      const double cap = 0.1;
      if (std::abs(step) > cap) step *= cap / std::abs(step);
      a1 -= step;
    }
  });

  std::vector<XnPoint> out;
  auto same_point = [&](Complex u, Complex v) {
    return lattice_distance(u - v, ctx) < 1e-7;
  };
  for (size_t k = 0; k < found.size(); ++k) {
    if (!ok[k]) continue;
    const Complex a1 = found[k], a2 = sigma0 - a1;
    bool dup = false;
    for (const XnPoint& p : out) {
      const Complex b1 = p.a[0].z, b2 = p.a[1].z;
      if ((same_point(a1, b1) && same_point(a2, b2)) ||
          (same_point(a1, b2) && same_point(a2, b1))) {
        dup = true;
        break;
      }
    }
    if (dup) continue;
    XnPoint p;
    p.n = 2;
    const WpValues v1 = weierstrass(a1, ctx), v2 = weierstrass(a2, ctx);
    p.a = {point_from_z(ctx, a1), point_from_z(ctx, a2)};
    p.x = {v1.wp, v2.wp};
    p.y = {v1.dwp, v2.dwp};
    p.B = 3.0 * (v1.wp + v2.wp);
    out.push_back(p);
  }
  return out;
}

int sigma_n_degree_probe(int n, Complex sigma0, const LatticeContext& ctx) {
  if (n == 1) return 1;
  if (n != 2) {
    throw Error(ErrorCode::kInvalidArgument, "degree probe supports n <= 2");
  }
  const std::vector<XnPoint> fiber = sigma2_fiber(sigma0, ctx);
  std::vector<Complex> bs;
  for (const XnPoint& p : fiber) {
    bool dup = false;
    for (const Complex& b : bs) {
      if (std::abs(b - p.B) <= 1e-8 * (1.0 + std::abs(b))) dup = true;
    }
    if (!dup) bs.push_back(p.B);
  }
  return static_cast<int>(bs.size());
}

std::vector<Type2Solution> find_type2(int n, const LatticeContext& ctx, int grid) {
  if (n != 1 && n != 2) {
    throw Error(ErrorCode::kInvalidArgument, "find_type2 supports n = 1, 2");
  }
  std::vector<Type2Solution> out;
  if (n == 1) {
    const CriticalSet cs = critical_points(ctx, std::max(grid, 32));
    for (size_t k = 3; k < cs.points.size(); ++k) {
      Type2Solution sol;
      sol.sigma = cs.points[k];
      const WpValues v = weierstrass(sol.sigma.z, ctx);
      sol.a.n = 1;
      sol.a.B = v.wp;
      sol.a.a = {sol.sigma};
      sol.a.x = {v.wp};
      sol.a.y = {v.dwp};
      sol.z = 0.0;
      sol.grad_residual = std::abs(hecke_Z(sol.sigma.r, sol.sigma.s, ctx));
      out.push_back(sol);
    }
    return out;
  }

  // Z_2 = Z^3 - 3 wp Z - wp' has weight 3, so its zeros for tau and the
  // reduced tau' correspond under sigma = mu sigma'.
  const LatticeContext red = make_context(ctx.tau_red);
  detail::JetFn fn = [&red](double r, double s) {
    const double rr = r - std::round(r), ss = s - std::round(s);
    const Complex sg = rr + ss * red.tau;
    const EllipticValues v = elliptic_values(sg, red);
    const Complex Z = v.zeta - rr * red.eta1 - ss * red.eta2;
    const Complex Zr = -v.wp - red.eta1;
    const Complex Zs = -v.wp * red.tau - red.eta2;
    const Complex d2 = 6.0 * v.wp * v.wp - red.g2 / 2.0;
    const Complex dZ2 = 3.0 * Z * Z - 3.0 * v.wp;
    detail::Jet2 j;
    j.f = Z * Z * Z - 3.0 * v.wp * Z - v.dwp;
    j.fr = dZ2 * Zr - 3.0 * v.dwp * Z - d2;
    j.fs = dZ2 * Zs - 3.0 * v.dwp * red.tau * Z - d2 * red.tau;
    return j;
  };
  detail::ZeroSearchOptions opt;
  opt.grid = std::max(grid, 64);
  opt.origin_exclusion = 1.5 / opt.grid;
  const auto zeros = detail::torus_zero_search(fn, opt);
  const auto [ga, gb, gc, gd] = ctx.gamma;
  // Z_2 is odd in sigma, so every zero comes with its negative.
  std::vector<std::array<double, 2>> cand;
  auto seen = [&](double r, double s) {
    for (const auto& c : cand) {
      if (detail::torus_distance(c[0], c[1], r, s) < 1e-7) return true;
    }
    return false;
  };
  for (const auto& zr : zeros) {
    for (const double sign : {1.0, -1.0}) {
      const double r = sign * zr[0] - std::floor(sign * zr[0]);
      const double s = sign * zr[1] - std::floor(sign * zr[1]);
      if (!seen(r, s)) cand.push_back({r, s});
    }
  }
  for (const auto& zr : cand) {
    bool half = false;
    for (const auto& h : {std::array<double, 2>{0.5, 0.0}, {0.0, 0.5}, {0.5, 0.5}}) {
      if (detail::torus_distance(zr[0], zr[1], h[0], h[1]) < 1e-8) half = true;
    }
    if (half) continue;
    const double r = gd * zr[0] + gb * zr[1];
    const double s = gc * zr[0] + ga * zr[1];
    Type2Solution sol;
    sol.sigma = canonical(ctx, make_point(ctx, r, s));
    const Complex Zs = hecke_Z(sol.sigma.r, sol.sigma.s, ctx);
    const std::vector<XnPoint> fiber = sigma2_fiber(sol.sigma.z, ctx);
    double best = 1e300;
    for (const XnPoint& p : fiber) {
      const std::vector<Complex> pts = xn_points(p);
      const Complex z = zn_value(pts, ctx);
      if (std::abs(z - Zs) < best) {
        best = std::abs(z - Zs);
        sol.a = p;
        sol.z = z;
      }
    }
    // Near a degenerate trivial zero Newton can stall off E[2]; such points
    // have no matching fiber point and are dropped.
    if (fiber.empty() || best > 1e-8 * (1.0 + std::abs(Zs))) continue;
    Complex g{0.0, 0.0};
    for (const TorusPoint& t : sol.a.a) g += hecke_Z(t.r, t.s, ctx);
    sol.grad_residual = std::abs(g);
    out.push_back(sol);
  }
  return out;
}

}  // namespace lamelab
