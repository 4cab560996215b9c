#include "lamelab/elliptic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "internal.hpp"

namespace lamelab {

using std::numbers::pi;
constexpr Complex kI{0.0, 1.0};

std::string_view error_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kPoleProximity: return "PoleProximity";
    case ErrorCode::kNoConvergence: return "NoConvergence";
    case ErrorCode::kRamifiedPoint: return "RamifiedPoint";
    case ErrorCode::kNoSignPattern: return "NoSignPattern";
    case ErrorCode::kDistinctnessViolation: return "DistinctnessViolation";
    case ErrorCode::kPoleAtInteger: return "PoleAtInteger";
    case ErrorCode::kPartialEnumeration: return "PartialEnumeration";
    case ErrorCode::kEvenTotalWeight: return "EvenTotalWeight";
    case ErrorCode::kPathTooClose: return "PathTooClose";
    case ErrorCode::kStepUnderflow: return "StepUnderflow";
    case ErrorCode::kInconsistent: return "Inconsistent";
    case ErrorCode::kNotDiagonalizable: return "NotDiagonalizable";
    case ErrorCode::kHalfPeriodInput: return "HalfPeriodInput";
    case ErrorCode::kCriticalPointOfF: return "CriticalPointOfF";
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

namespace {

// T(w) = sum_n (-1)^n q^{n(n+1)} sin((2n+1) pi w) = theta_1(w) / (2 q^{1/4}),
// with derivatives up to order 3.
struct ThetaJet {
  Complex t[4];
};

ThetaJet theta_jet(Complex w, Complex tau, int terms) {
  ThetaJet jet{};
  for (int n = 0; n < terms; ++n) {
    const Complex coef =
        std::exp(kI * pi * tau * static_cast<double>(n * (n + 1))) *
        ((n % 2 == 0) ? 1.0 : -1.0);
    const double c = (2 * n + 1) * pi;
    const Complex sn = std::sin(c * w);
    const Complex cs = std::cos(c * w);
    jet.t[0] += coef * sn;
    jet.t[1] += coef * c * cs;
    jet.t[2] -= coef * c * c * sn;
    jet.t[3] -= coef * c * c * c * cs;
  }
  return jet;
}

int raw_terms_for(Complex q) {
  const double aq = std::abs(q);
  if (aq <= 0.0) return 2;
  // |q|^{N^2} < 1e-18
  const double need = std::log(1e-18) / std::log(aq);
  int n = static_cast<int>(std::ceil(std::sqrt(need)));
  return std::clamp(n + 1, 3, 4000);
}

int reduced_terms_for(Complex q) {
  // Terms grow like |q|^{n^2 - n} on the strip |Im w| <= Im tau / 2.
  const double aq = std::abs(q);
  int n = 2;
  while (n < 60 && std::pow(aq, n * n - n) > 1e-19) ++n;
  return n + 1;
}

}  // namespace

namespace detail {

Reduced reduce(const LatticeContext& ctx, Complex z) {
  const Complex w = z / ctx.mu;
  const double sp = w.imag() / ctx.tau_red.imag();
  const double rp = w.real() - sp * ctx.tau_red.real();
  Reduced red;
  red.m = std::round(rp);
  red.n = std::round(sp);
  red.w0 = w - red.m - red.n * ctx.tau_red;
  return red;
}

ReducedValues reduced_values(const LatticeContext& ctx, Complex w0) {
  const ThetaJet j = theta_jet(w0, ctx.tau_red, ctx.terms_red);
  const Complex l1 = j.t[1] / j.t[0];
  const Complex l2 = j.t[2] / j.t[0];
  const Complex l3 = j.t[3] / j.t[0];
  ReducedValues v;
  v.zeta = ctx.eta1_red * w0 + l1;
  v.wp = -ctx.eta1_red - (l2 - l1 * l1);
  v.dwp = -(l3 - 3.0 * l2 * l1 + 2.0 * l1 * l1 * l1);
  return v;
}

}  // namespace detail

Complex theta1_series(Complex z, Complex tau, int terms, int deriv) {
  Complex sum{0.0, 0.0};
  for (int n = 0; n < terms; ++n) {
    const double h = n + 0.5;
    const Complex coef =
        2.0 * std::exp(kI * pi * tau * (h * h)) * ((n % 2 == 0) ? 1.0 : -1.0);
    const double c = (2 * n + 1) * pi;
    switch (deriv) {
      case 0: sum += coef * std::sin(c * z); break;
      case 1: sum += coef * c * std::cos(c * z); break;
      case 2: sum -= coef * c * c * std::sin(c * z); break;
      case 3: sum -= coef * c * c * c * std::cos(c * z); break;
      default:
        throw Error(ErrorCode::kInvalidArgument, "theta1 derivative order > 3");
    }
  }
  return sum;
}

Complex theta1(Complex z, const LatticeContext& ctx, int deriv) {
  return theta1_series(z, ctx.tau, ctx.series_terms, deriv);
}

Invariants eisenstein(Complex tau, int terms) {
  const Complex Q = std::exp(2.0 * pi * kI * tau);
  if (terms <= 0) {
    // |Q|^n n^5 below 1e-18 relative.
    const double aq = std::abs(Q);
    terms = 1;
    while (std::pow(aq, terms) * std::pow(terms, 5) > 1e-18 && terms < 100000) ++terms;
  }
  Complex s3{0.0, 0.0}, s5{0.0, 0.0};
  Complex qn = Q;
  for (int n = 1; n <= terms; ++n) {
    const Complex lam = qn / (1.0 - qn);
    const double n3 = static_cast<double>(n) * n * n;
    s3 += n3 * lam;
    s5 += n3 * n * n * lam;
    qn *= Q;
  }
  const double p4 = std::pow(pi, 4), p6 = std::pow(pi, 6);
  return {4.0 * p4 / 3.0 * (1.0 + 240.0 * s3),
          8.0 * p6 / 27.0 * (1.0 - 504.0 * s5)};
}

LatticeContext make_context(Complex tau, int series_terms) {
  if (!(tau.imag() > 0.0) || !std::isfinite(tau.real()) ||
      !std::isfinite(tau.imag())) {
    throw Error(ErrorCode::kInvalidArgument, "tau must lie in the upper half plane");
  }
  LatticeContext ctx;
  ctx.tau = tau;
  ctx.q = std::exp(kI * pi * tau);
  ctx.series_terms = series_terms > 0 ? series_terms : raw_terms_for(ctx.q);

  int a = 1, b = 0, c = 0, d = 1;
  Complex t = tau;
  for (int it = 0; it < 10000; ++it) {
    const double k = std::round(t.real());
    if (k != 0.0) {
      t -= k;
      a -= static_cast<int>(k) * c;
      b -= static_cast<int>(k) * d;
    }
    if (std::norm(t) < 1.0 - 1e-14) {
      t = -1.0 / t;
      const int na = -c, nb = -d;
      c = a;
      d = b;
      a = na;
      b = nb;
    } else {
      break;
    }
  }
  ctx.gamma = {a, b, c, d};
  ctx.mu = static_cast<double>(c) * tau + static_cast<double>(d);
  // Recompute tau' from the matrix to keep the two consistent.
  ctx.tau_red = (static_cast<double>(a) * tau + static_cast<double>(b)) / ctx.mu;
  ctx.q_red = std::exp(kI * pi * ctx.tau_red);
  ctx.terms_red = reduced_terms_for(ctx.q_red);

  const ThetaJet j0 = theta_jet(Complex{0.0, 0.0}, ctx.tau_red, ctx.terms_red);
  ctx.eta1_red = -j0.t[3] / (3.0 * j0.t[1]);
  const Complex half = ctx.tau_red / 2.0;
  const ThetaJet jh = theta_jet(half, ctx.tau_red, ctx.terms_red);
  ctx.eta2_red = 2.0 * (ctx.eta1_red * half + jh.t[1] / jh.t[0]);

  int eterms = 1;
  const double aQ = std::norm(ctx.q_red);  // |exp(2 pi i tau')|
  while (eterms < 200 && std::pow(static_cast<double>(eterms), 5) *
                                 std::pow(aQ, eterms) > 1e-20) {
    ++eterms;
  }
  const Invariants inv = eisenstein(ctx.tau_red, eterms);
  const Complex mu2 = ctx.mu * ctx.mu;
  ctx.g2 = inv.g2 / (mu2 * mu2);
  ctx.g3 = inv.g3 / (mu2 * mu2 * mu2);
  ctx.eta1 = (static_cast<double>(a) * ctx.eta1_red -
              static_cast<double>(c) * ctx.eta2_red) / ctx.mu;
  ctx.eta2 = (static_cast<double>(d) * ctx.eta2_red -
              static_cast<double>(b) * ctx.eta1_red) / ctx.mu;
  return ctx;
}

double lattice_distance(Complex z, const LatticeContext& ctx) {
  const detail::Reduced red = detail::reduce(ctx, z);
  double best = std::abs(red.w0);
  for (int i = -1; i <= 1; ++i) {
    for (int j = -1; j <= 1; ++j) {
      best = std::min(best, std::abs(red.w0 - static_cast<double>(i) -
                                     static_cast<double>(j) * ctx.tau_red));
    }
  }
  return best * std::abs(ctx.mu);
}

EllipticValues elliptic_values(Complex z, const LatticeContext& ctx) {
  if (lattice_distance(z, ctx) < ctx.clearance) {
    throw Error(ErrorCode::kPoleProximity, "point too close to the lattice");
  }
  return detail::values_unchecked(ctx, z);
}

namespace detail {

EllipticValues values_unchecked(const LatticeContext& ctx, Complex z) {
  const Reduced red = reduce(ctx, z);
  const ReducedValues v = reduced_values(ctx, red.w0);
  const Complex mu = ctx.mu;
  EllipticValues out;
  out.zeta = (v.zeta + red.m * ctx.eta1_red + red.n * ctx.eta2_red) / mu;
  out.wp = v.wp / (mu * mu);
  out.dwp = v.dwp / (mu * mu * mu);
  return out;
}

}  // namespace detail

WpValues weierstrass(Complex z, const LatticeContext& ctx) {
  const EllipticValues v = elliptic_values(z, ctx);
  return {v.wp, v.dwp};
}

Complex zeta_w(Complex z, const LatticeContext& ctx) {
  return elliptic_values(z, ctx).zeta;
}

Complex log_sigma(Complex z, const LatticeContext& ctx) {
  const detail::Reduced red = detail::reduce(ctx, z);
  const ThetaJet j0 = theta_jet(Complex{0.0, 0.0}, ctx.tau_red, ctx.terms_red);
  const ThetaJet jw = theta_jet(red.w0, ctx.tau_red, ctx.terms_red);
  const Complex lam = red.m + red.n * ctx.tau_red;
  const Complex eta_lam = red.m * ctx.eta1_red + red.n * ctx.eta2_red;
  const long long mi = static_cast<long long>(red.m);
  const long long ni = static_cast<long long>(red.n);
  const bool negative = ((mi & 1) != 0) || ((ni & 1) != 0);
  Complex out = std::log(ctx.mu) + eta_lam * (red.w0 + lam / 2.0) +
                ctx.eta1_red * red.w0 * red.w0 / 2.0 +
                std::log(jw.t[0] / j0.t[1]);
  if (negative) out += kI * pi;
  return out;
}

Complex sigma_w(Complex z, const LatticeContext& ctx) {
  if (z == Complex{0.0, 0.0}) return {0.0, 0.0};
  return std::exp(log_sigma(z, ctx));
}

Complex quasi_period(const LatticeContext& ctx, double m, double n) {
  return m * ctx.eta1 + n * ctx.eta2;
}

TorusPoint make_point(const LatticeContext& ctx, double r, double s) {
  return {r, s, r + s * ctx.tau};
}

TorusPoint point_from_z(const LatticeContext& ctx, Complex z) {
  const double s = z.imag() / ctx.tau.imag();
  const double r = z.real() - s * ctx.tau.real();
  return {r, s, z};
}

TorusPoint canonical(const LatticeContext& ctx, const TorusPoint& p) {
  auto wrap = [](double x) {
    double y = x - std::floor(x);
    if (y >= 1.0) y = 0.0;
    return y;
  };
  return make_point(ctx, wrap(p.r), wrap(p.s));
}

TorusPoint wp_inverse(Complex x, int sign_hint, const LatticeContext& ctx) {
  const Complex mu2 = ctx.mu * ctx.mu;
  const Complex X = x * mu2;  // target for the reduced wp
  const double xscale = 1.0 + std::abs(X);

  auto residual_at = [&](Complex w, detail::ReducedValues* out) {
    const detail::Reduced red = detail::reduce(ctx, w * ctx.mu);
    if (std::abs(red.w0) < 1e-12) return 1e300;
    *out = detail::reduced_values(ctx, red.w0);
    return std::abs(out->wp - X) / xscale;
  };

  std::vector<std::pair<double, Complex>> seeds;
  constexpr int kGrid = 8;
  for (int i = 0; i < kGrid; ++i) {
    for (int j = 0; j < kGrid; ++j) {
      const double rp = -0.5 + (i + 0.41) / kGrid;
      const double sp = -0.5 + (j + 0.37) / kGrid;
      const Complex w = rp + sp * ctx.tau_red;
      detail::ReducedValues v;
      seeds.emplace_back(residual_at(w, &v), w);
    }
  }
  if (std::abs(X) > 50.0) {
    const Complex w = 1.0 / std::sqrt(X);
    detail::ReducedValues v;
    seeds.emplace_back(residual_at(w, &v), w);
  }
  std::sort(seeds.begin(), seeds.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });

  bool found = false;
  Complex w_best{0.0, 0.0};
  for (size_t k = 0; k < std::min<size_t>(seeds.size(), 12) && !found; ++k) {
    Complex w = seeds[k].second;
    double res = 1e300;
    for (int it = 0; it < 300; ++it) {
      detail::ReducedValues v;
      res = residual_at(w, &v);
      if (res > 1e299) break;
      if (res < 1e-15) break;
      Complex step = (v.wp - X) / v.dwp;
      if (!std::isfinite(step.real()) || !std::isfinite(step.imag())) break;
      const double cap = 0.2 * std::abs(ctx.tau_red);
      if (std::abs(step) > cap) step *= cap / std::abs(step);
      w -= step;
      if (std::abs(step) < 1e-17 * (1.0 + std::abs(w))) {
        res = residual_at(w, &v);
        break;
      }
    }
    if (res < 1e-10) {
      found = true;
      w_best = w;
    }
  }
  if (!found) {
    throw Error(ErrorCode::kNoConvergence, "wp_inverse did not converge");
  }
  Complex z = w_best * ctx.mu;
  const EllipticValues v = detail::values_unchecked(ctx, z);
  const Complex target =
      static_cast<double>(sign_hint >= 0 ? 1 : -1) *
      std::sqrt(4.0 * x * x * x - ctx.g2 * x - ctx.g3);
  if (std::abs(v.dwp - target) > std::abs(v.dwp + target)) z = -z;
  return canonical(ctx, point_from_z(ctx, z));
}

std::vector<Complex> wp_laurent(const LatticeContext& ctx, int kmax) {
  std::vector<Complex> c(std::max(kmax, 3) + 1, Complex{0.0, 0.0});
  c[2] = ctx.g2 / 20.0;
  c[3] = ctx.g3 / 28.0;
  for (int k = 4; k <= kmax; ++k) {
    Complex s{0.0, 0.0};
    for (int m = 2; m <= k - 2; ++m) s += c[m] * c[k - m];
    c[k] = 3.0 / ((2.0 * k + 1.0) * (k - 3.0)) * s;
  }
  return c;
}

std::vector<Complex> taylor_data(TaylorKind kind, Complex base, Complex shift,
                                 int kmax, const LatticeContext& ctx) {
  const Complex w = base - shift;
  std::vector<Complex> out(kmax + 1, Complex{0.0, 0.0});
  const double dist = lattice_distance(w, ctx);
  if (dist <= 1e-13 * (1.0 + std::abs(w))) {
    // Regular part at a lattice point lambda: zeta picks up eta(lambda).
    const TorusPoint p = point_from_z(ctx, w);
    const Complex eta = quasi_period(ctx, std::round(p.r), std::round(p.s));
    const std::vector<Complex> c = wp_laurent(ctx, kmax / 2 + 3);
    if (kind == TaylorKind::kWp) {
      for (int k = 2; 2 * k - 2 <= kmax; ++k) out[2 * k - 2] = c[k];
    } else {
      out[0] = eta;
      for (int k = 2; 2 * k - 1 <= kmax; ++k) {
        out[2 * k - 1] = -c[k] / (2.0 * k - 1.0);
      }
    }
    return out;
  }
  if (dist < ctx.clearance) {
    throw Error(ErrorCode::kPoleProximity, "taylor_data base too close to pole");
  }
  const EllipticValues v = detail::values_unchecked(ctx, w);
  std::vector<Complex> a(kmax + 2, Complex{0.0, 0.0});
  a[0] = v.wp;
  if (kmax + 1 >= 1) a[1] = v.dwp;
  for (int m = 0; m + 2 <= kmax + 1; ++m) {
    Complex s{0.0, 0.0};
    for (int k = 0; k <= m; ++k) s += a[k] * a[m - k];
    s *= 6.0;
    if (m == 0) s -= ctx.g2 / 2.0;
    a[m + 2] = s / ((m + 2.0) * (m + 1.0));
  }
  if (kind == TaylorKind::kWp) {
    for (int k = 0; k <= kmax; ++k) out[k] = a[k];
  } else {
    out[0] = v.zeta;
    for (int m = 0; m + 1 <= kmax; ++m) out[m + 1] = -a[m] / (m + 1.0);
  }
  return out;
}

double scaled_residual(Complex residual, std::initializer_list<Complex> terms) {
  double scale = 0.0;
  for (const Complex& t : terms) scale = std::max(scale, std::abs(t));
  if (scale == 0.0) return std::abs(residual);
  return std::abs(residual) / scale;
}

IdentityReport check_identities(const LatticeContext& ctx, int samples,
                                std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  IdentityReport rep;
  constexpr double kAway = 0.05;
  auto clear = [&](Complex z) { return lattice_distance(z, ctx) > kAway; };
  auto draw = [&]() { return make_point(ctx, unit(rng), unit(rng)).z; };

  int done = 0;
  while (done < samples) {
    const Complex a1 = draw(), a2 = draw(), a3 = draw();
    const Complex s2 = a1 + a2, s3 = a1 + a2 + a3;
    if (!clear(a1) || !clear(a2) || !clear(a3) || !clear(s2) || !clear(s3) ||
        !clear(a1 - a2)) {
      continue;
    }
    const EllipticValues v1 = elliptic_values(a1, ctx);
    const EllipticValues v2 = elliptic_values(a2, ctx);
    const EllipticValues v3 = elliptic_values(a3, ctx);
    const EllipticValues vs2 = elliptic_values(s2, ctx);
    const EllipticValues vs3 = elliptic_values(s3, ctx);

    const Complex z2 = vs2.zeta - v1.zeta - v2.zeta;
    rep.addition_law = std::max(
        rep.addition_law,
        scaled_residual(z2 * z2 - (vs2.wp + v1.wp + v2.wp),
                        {z2 * z2, vs2.wp, v1.wp, v2.wp}));

    const Complex z3 = vs3.zeta - v1.zeta - v2.zeta - v3.zeta;
    const Complex lin = 3.0 * (vs3.wp + v1.wp + v2.wp + v3.wp) * z3;
    const Complex cst = vs3.dwp - v1.dwp - v2.dwp - v3.dwp;
    rep.cubic = std::max(rep.cubic,
                         scaled_residual(z3 * z3 * z3 - lin - cst,
                                         {z3 * z3 * z3, lin, vs3.dwp, v1.dwp,
                                          v2.dwp, v3.dwp}));

    // a + b + c = 0 with c = -(a1 + a2)
    const Complex zs = v1.zeta + v2.zeta - vs2.zeta;
    rep.zeta_sum = std::max(
        rep.zeta_sum, scaled_residual(zs * zs - (v1.wp + v2.wp + vs2.wp),
                                      {zs * zs, v1.wp, v2.wp, vs2.wp}));
    ++done;
  }
  rep.samples = done;
  return rep;
}

}  // namespace lamelab
