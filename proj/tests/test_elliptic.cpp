#include <gtest/gtest.h>

#include <numbers>
#include <random>

#include "lamelab/elliptic.hpp"
#include "oracles.hpp"

using namespace lamelab;

namespace {

const Complex kI{0.0, 1.0};
const Complex kRho = std::polar(1.0, std::numbers::pi / 3.0);

double rel(Complex a, Complex b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

Complex random_z(std::mt19937_64& rng, const LatticeContext& ctx, double clearance = 0.05) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (;;) {
    const Complex z = u(rng) + u(rng) * ctx.tau;
    if (lattice_distance(z, ctx) > clearance) return z;
  }
}

}  // namespace

TEST(Theta1, VanishesAtOrigin) {
  for (Complex tau : {1.1 * kI, kRho, Complex(0.3, 0.8)}) {
    EXPECT_LT(std::abs(theta1(0.0, make_context(tau))), 1e-15);
  }
}

TEST(Theta1, OddAndAntiperiodic) {
  const LatticeContext ctx = make_context(1.1 * kI);
  std::mt19937_64 rng(7);
  for (int k = 0; k < 20; ++k) {
    const Complex z = random_z(rng, ctx);
    const Complex t = theta1(z, ctx);
    EXPECT_LT(std::abs(theta1(-z, ctx) + t), 1e-13 * std::max(1.0, std::abs(t)));
    EXPECT_LT(std::abs(theta1(z + 1.0, ctx) + t), 1e-13 * std::max(1.0, std::abs(t)));
  }
}

TEST(Theta1, TruncationSelfConsistent) {
  const Complex tau{0.2, 0.9};
  const LatticeContext ctx = make_context(tau);
  const Complex z{0.31, 0.17};
  const Complex a = theta1_series(z, tau, ctx.series_terms);
  const Complex b = theta1_series(z, tau, 2 * ctx.series_terms);
  EXPECT_LT(std::abs(a - b), 1e-12);
}

TEST(Weierstrass, HalfPeriodIsCritical) {
  const LatticeContext ctx = make_context(1.3 * kI);
  EXPECT_LT(std::abs(weierstrass(0.5, ctx).dwp), 1e-10);
}

TEST(Weierstrass, MatchesCosecantLatticeSum) {
  std::mt19937_64 rng(11);
  for (Complex tau : {1.3 * kI, Complex(0.2, 0.9), kRho, Complex(-0.4, 1.7)}) {
    const LatticeContext ctx = make_context(tau);
    for (int k = 0; k < 10; ++k) {
      const Complex z = random_z(rng, ctx);
      const WpValues v = weierstrass(z, ctx);
      EXPECT_LT(rel(v.wp, oracle::wp(z, tau)), 1e-10) << tau << " " << z;
      EXPECT_LT(rel(v.dwp, oracle::dwp(z, tau)), 1e-10) << tau << " " << z;
    }
  }
}

TEST(Weierstrass, DifferentialEquationAndEvenness) {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int k = 0; k < 100; ++k) {
    const Complex tau{u(rng) - 0.5, 0.6 + 1.5 * u(rng)};
    const LatticeContext ctx = make_context(tau);
    const Complex z = random_z(rng, ctx);
    const WpValues v = weierstrass(z, ctx);
    const Complex cubic = 4.0 * v.wp * v.wp * v.wp;
    const Complex r = v.dwp * v.dwp - cubic + ctx.g2 * v.wp + ctx.g3;
    EXPECT_LT(scaled_residual(r, {v.dwp * v.dwp, cubic, ctx.g2 * v.wp, ctx.g3}), 1e-9);
    EXPECT_LT(rel(weierstrass(-z, ctx).wp, v.wp), 1e-12);
  }
}

TEST(Weierstrass, RefusesPoles) {
  const LatticeContext ctx = make_context(kI);
  try {
    weierstrass(Complex(1e-5, 0.0) + ctx.tau, ctx);
    FAIL() << "expected PoleProximity";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kPoleProximity);
  }
}

TEST(Zeta, HalfPeriodIsHalfEta) {
  const LatticeContext ctx = make_context(Complex(0.1, 1.2));
  EXPECT_LT(std::abs(zeta_w(0.5, ctx) - ctx.eta1 / 2.0), 1e-12);
  EXPECT_LT(std::abs(zeta_w(ctx.tau / 2.0, ctx) - ctx.eta2 / 2.0), 1e-12);
}

TEST(Zeta, MatchesCotangentSumAndE2) {
  std::mt19937_64 rng(13);
  for (Complex tau : {1.3 * kI, Complex(0.2, 0.9), kRho}) {
    const LatticeContext ctx = make_context(tau);
    EXPECT_LT(rel(ctx.eta1, oracle::eta1(tau)), 1e-11);
    for (int k = 0; k < 10; ++k) {
      const Complex z = random_z(rng, ctx);
      EXPECT_LT(rel(zeta_w(z, ctx), oracle::zeta(z, tau)), 1e-10);
    }
  }
}

TEST(Zeta, QuasiPeriodicity) {
  std::mt19937_64 rng(14);
  const LatticeContext ctx = make_context(Complex(0.35, 1.05));
  for (int k = 0; k < 20; ++k) {
    const Complex z = random_z(rng, ctx);
    EXPECT_LT(std::abs(zeta_w(z + 1.0, ctx) - zeta_w(z, ctx) - ctx.eta1), 1e-9);
    EXPECT_LT(std::abs(zeta_w(z + ctx.tau, ctx) - zeta_w(z, ctx) - ctx.eta2), 1e-9);
  }
}

TEST(Zeta, DerivativeIsMinusWp) {
  std::mt19937_64 rng(15);
  const LatticeContext ctx = make_context(Complex(-0.2, 1.4));
  const double h = 1e-5;
  for (int k = 0; k < 20; ++k) {
    const Complex z = random_z(rng, ctx);
    const Complex d = (zeta_w(z + h, ctx) - zeta_w(z - h, ctx)) / (2.0 * h);
    EXPECT_LT(std::abs(d + weierstrass(z, ctx).wp) / std::max(1.0, std::abs(d)), 1e-8);
  }
}

TEST(Sigma, SimpleZeroNormalized) {
  const LatticeContext ctx = make_context(Complex(0.1, 1.1));
  EXPECT_EQ(std::abs(sigma_w(0.0, ctx)), 0.0);
  const Complex z{1e-4, 2e-4};
  EXPECT_LT(std::abs(sigma_w(z, ctx) / z - 1.0), 1e-8);
}

TEST(Sigma, QuasiPeriodicity) {
  // sigma(z + 1) = -exp(eta1 (z + 1/2)) sigma(z).
  const LatticeContext ctx = make_context(Complex(0.15, 1.2));
  const Complex z{0.21, 0.33};
  const Complex lhs = sigma_w(z + 1.0, ctx);
  const Complex rhs = -std::exp(ctx.eta1 * (z + 0.5)) * sigma_w(z, ctx);
  EXPECT_LT(std::abs(lhs - rhs) / std::abs(rhs), 1e-11);
  const Complex lhs2 = sigma_w(z + ctx.tau, ctx);
  const Complex rhs2 = -std::exp(ctx.eta2 * (z + ctx.tau / 2.0)) * sigma_w(z, ctx);
  EXPECT_LT(std::abs(lhs2 - rhs2) / std::abs(rhs2), 1e-11);
}

TEST(Legendre, HoldsAcrossTheUpperHalfPlane) {
  std::mt19937_64 rng(16);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const Complex two_pi_i{0.0, 2.0 * std::numbers::pi};
  for (int k = 0; k < 200; ++k) {
    const Complex tau{4.0 * u(rng) - 2.0, 0.03 + 2.5 * u(rng)};
    const LatticeContext ctx = make_context(tau);
    EXPECT_LT(std::abs(ctx.eta1 * tau - ctx.eta2 - two_pi_i), 1e-10) << tau;
  }
}

TEST(Eisenstein, SymmetricLattices) {
  const Invariants sq = eisenstein(kI, 0);
  EXPECT_LT(std::abs(sq.g3), 1e-10);
  const Invariants hex = eisenstein(kRho, 0);
  EXPECT_LT(std::abs(hex.g2), 1e-10);
}

TEST(Eisenstein, MatchesHalfPeriodValues) {
  for (Complex tau : {Complex(0.2, 0.9), Complex(0.45, 1.3), 1.7 * kI}) {
    Complex g2, g3;
    oracle::invariants(tau, g2, g3);
    const Invariants inv = eisenstein(tau, 0);
    EXPECT_LT(rel(inv.g2, g2), 1e-10);
    EXPECT_LT(rel(inv.g3, g3), 1e-10);
    const LatticeContext ctx = make_context(tau);
    EXPECT_LT(rel(ctx.g2, g2), 1e-10);
    EXPECT_LT(rel(ctx.g3, g3), 1e-10);
  }
}

TEST(WpInverse, RoundTrip) {
  std::mt19937_64 rng(17);
  std::normal_distribution<double> g(0.0, 3.0);
  const LatticeContext ctx = make_context(Complex(0.1, 1.15));
  for (int k = 0; k < 100; ++k) {
    const Complex x{g(rng), g(rng)};
    for (int sign : {1, -1}) {
      const TorusPoint a = wp_inverse(x, sign, ctx);
      const WpValues v = weierstrass(a.z, ctx);
      EXPECT_LT(std::abs(v.wp - x) / std::max(1.0, std::abs(x)), 1e-10);
      const Complex root = std::sqrt(4.0 * x * x * x - ctx.g2 * x - ctx.g3);
      EXPECT_LT(std::abs(v.dwp - static_cast<double>(sign) * root),
                1e-8 * std::max(1.0, std::abs(root)));
    }
  }
}

TEST(WpInverse, BranchPointsAreHalfPeriods) {
  const LatticeContext ctx = make_context(Complex(0.1, 1.15));
  for (Complex h : {Complex(0.5, 0.0), ctx.tau / 2.0, (1.0 + ctx.tau) / 2.0}) {
    const Complex e = weierstrass(h, ctx).wp;
    const TorusPoint a = wp_inverse(e, 1, ctx);
    EXPECT_LT(std::min(lattice_distance(a.z - h, ctx), lattice_distance(a.z + h, ctx)), 1e-6);
  }
}

TEST(TaylorData, CoincidentPointsDropSingularOrders) {
  const LatticeContext ctx = make_context(Complex(0.1, 1.15));
  const Complex p{0.3, 0.4};
  const auto zt = taylor_data(TaylorKind::kZeta, p, p, 4, ctx);
  for (int k = 0; k <= 2; ++k) EXPECT_LT(std::abs(zt[k]), 1e-14);
  const auto wt = taylor_data(TaylorKind::kWp, p, p, 4, ctx);
  for (int k = 0; k <= 1; ++k) EXPECT_LT(std::abs(wt[k]), 1e-14);
  // Regular part of wp at 0: g2/20 t^2 + ...
  EXPECT_LT(std::abs(wt[2] - ctx.g2 / 20.0), 1e-12);
}

TEST(TaylorData, MatchesDerivativesAtDistinctPoints) {
  const LatticeContext ctx = make_context(Complex(0.1, 1.15));
  const Complex pi{0.3, 0.4}, pj{0.7, 0.1};
  const auto zt = taylor_data(TaylorKind::kZeta, pi, pj, 5, ctx);
  EXPECT_LT(std::abs(zt[0] - zeta_w(pi - pj, ctx)), 1e-13);
  const WpValues v = weierstrass(pi - pj, ctx);
  EXPECT_LT(std::abs(zt[1] + v.wp), 1e-12);
  EXPECT_LT(std::abs(zt[2] + v.dwp / 2.0), 1e-12);
  // Cauchy integral for the order-4 coefficient of wp(z - pj) at pi.
  const auto wt = taylor_data(TaylorKind::kWp, pi, pj, 4, ctx);
  Complex c4{0.0, 0.0};
  const int M = 64;
  const double r = 0.05;
  for (int k = 0; k < M; ++k) {
    const Complex e = std::polar(1.0, 2.0 * std::numbers::pi * k / M);
    c4 += weierstrass(pi - pj + r * e, ctx).wp / std::pow(r * e, 4);
  }
  c4 /= static_cast<double>(M);
  EXPECT_LT(std::abs(wt[4] - c4) / std::abs(c4), 1e-9);
}

TEST(Identities, BatteryPassesAtReferenceTau) {
  const IdentityReport rep = check_identities(make_context(Complex(0.3, 1.2)), 50, 3);
  EXPECT_EQ(rep.samples, 50);
  EXPECT_LT(rep.addition_law, 1e-9);
  EXPECT_LT(rep.cubic, 1e-9);
  EXPECT_LT(rep.zeta_sum, 1e-9);
}

TEST(Identities, ZetaSumSquareAtSixthPeriods) {
  const LatticeContext ctx = make_context(kRho);
  const Complex w3 = 1.0 + ctx.tau;
  const Complex a = w3 / 6.0, b = w3 / 3.0, c = -w3 / 2.0;
  const Complex s = zeta_w(a, ctx) + zeta_w(b, ctx) + zeta_w(c, ctx);
  const Complex rhs = weierstrass(a, ctx).wp + weierstrass(b, ctx).wp + weierstrass(c, ctx).wp;
  EXPECT_LT(scaled_residual(s * s - rhs, {s * s, rhs}), 1e-9);
}
