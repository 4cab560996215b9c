#include <gtest/gtest.h>

#include <numbers>
#include <random>

#include "lamelab/green_hecke.hpp"
#include "lamelab/lame_curves.hpp"
#include "lamelab/monodromy.hpp"
#include "oracles.hpp"

using namespace lamelab;

namespace {

constexpr double kPi = std::numbers::pi;
const Complex kI{0.0, 1.0};

SourceDivisor divisor(const LatticeContext& ctx, const std::vector<std::array<double, 2>>& rs,
                      const std::vector<int>& w) {
  SourceDivisor L;
  for (const auto& p : rs) L.points.push_back(make_point(ctx, p[0], p[1]));
  L.weights = w;
  return L;
}

// Classical Lame: one point of weight 2n at the origin, A = 0.
SourceDivisor lame_divisor(const LatticeContext& ctx, int n) {
  return divisor(ctx, {{0.0, 0.0}}, {2 * n});
}

struct Fixture {
  LatticeContext ctx = make_context(Complex(0.13, 1.07));
  SourceDivisor L = divisor(ctx, {{0.11, 0.23}, {0.52, 0.71}, {0.83, 0.37}}, {1, 1, 1});
  std::vector<LameParams> roots;
  Fixture() { roots = solve_system(build_system(L, ctx), ctx).solutions; }
};

const Fixture& fixture() {
  static const Fixture f;
  return f;
}

}  // namespace

TEST(Potential, EllipticWhenResiduesCancel) {
  const auto& f = fixture();
  LameParams p{{Complex(0.3, 0.1), Complex(-0.5, 0.2), Complex(0.2, -0.3)}, Complex(1.1, 0.4)};
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int k = 0; k < 10; ++k) {
    const Complex z = u(rng) + u(rng) * f.ctx.tau;
    if (path_clearance(polyline({z, z}), f.L, f.ctx) < 0.05) continue;
    const Complex a = potential(z, f.L, p, f.ctx);
    EXPECT_LT(std::abs(potential(z + 1.0, f.L, p, f.ctx) - a), 1e-9 * (1.0 + std::abs(a)));
    EXPECT_LT(std::abs(potential(z + f.ctx.tau, f.L, p, f.ctx) - a), 1e-9 * (1.0 + std::abs(a)));
  }
}

TEST(Potential, ClassicalLameAndLeadingPole) {
  const LatticeContext ctx = make_context(Complex(-0.1, 1.2));
  const SourceDivisor L = lame_divisor(ctx, 1);
  const LameParams p{{0.0}, Complex(0.4, -0.2)};
  const Complex z{0.31, 0.52};
  EXPECT_LT(std::abs(potential(z, L, p, ctx) - (2.0 * oracle::wp(z, ctx.tau) + p.B)), 1e-9);

  // mean of (z - p_i)^2 I(z) over a small circle is the (z - p_i)^-2 coefficient
  const auto& f = fixture();
  const SourceDivisor L2 = divisor(f.ctx, {{0.11, 0.23}, {0.52, 0.71}, {0.83, 0.37}}, {3, 1, 2});
  const LameParams q{{Complex(0.3, 0.1), Complex(-0.5, 0.2), Complex(0.2, -0.3)}, Complex(1.1, 0.4)};
  for (int i = 0; i < 3; ++i) {
    const int M = 64;
    const double r = 0.02;
    Complex mean{0.0, 0.0};
    for (int j = 0; j < M; ++j) {
      const Complex d = std::polar(r, 2.0 * kPi * j / M);
      mean += d * d * potential(L2.points[i].z + d, L2, q, f.ctx);
    }
    mean /= static_cast<double>(M);
    const double eta = L2.weights[i] / 2.0;
    EXPECT_LT(std::abs(mean - eta * (eta + 1.0)), 1e-10) << i;
  }
}

TEST(Transport, ContractibleLoopIsIdentity) {
  const auto& f = fixture();
  const Mat2 M = transport(circle(Complex(0.35, 0.3), 0.08), f.L, f.roots.at(0), f.ctx);
  EXPECT_LT((M - Mat2::Identity()).norm(), 1e-8);
}

TEST(Transport, ConcatenationAndWronskian) {
  const auto& f = fixture();
  const LameParams& p = f.roots.at(1);
  const Complex a{0.3, 0.05}, b{0.7, 0.5}, c{0.2, 0.8};
  const Mat2 M1 = transport(polyline({a, b}), f.L, p, f.ctx);
  const Mat2 M2 = transport(polyline({b, c}), f.L, p, f.ctx);
  const Mat2 M12 = transport(polyline({a, b, c}), f.L, p, f.ctx);
  EXPECT_LT((M12 - M2 * M1).norm(), 1e-8 * M12.norm());
  for (const Mat2* M : {&M1, &M2, &M12}) EXPECT_LT(std::abs(M->determinant() - 1.0), 1e-9);
}

TEST(Transport, RefusesPathThroughSingularity) {
  const auto& f = fixture();
  const Complex p = f.L.points[0].z;
  try {
    transport(polyline({p - 0.1, p + 0.1}), f.L, f.roots.at(0), f.ctx);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kPathTooClose);
  }
}

TEST(Transport, HomotopicDetoursAgree) {
  const auto& f = fixture();
  const LameParams& p = f.roots.at(2);
  const Complex c = f.L.points[1].z;
  const Complex a = c - 0.15, b = c + 0.15;
  const double rad = detour_radius(f.L, f.ctx);
  // the detour passes below the point, as does the wide polyline
  const Mat2 D = transport(detoured_segment(a, b, f.L, f.ctx, rad), f.L, p, f.ctx);
  const Mat2 W = transport(polyline({a, c - Complex(0.05, 0.06), c + Complex(0.05, -0.06), b}), f.L, p, f.ctx);
  EXPECT_LT((D - W).norm(), 1e-7 * D.norm());
  const Mat2 U = transport(polyline({a, c + Complex(-0.05, 0.06), c + Complex(0.05, 0.06), b}), f.L, p, f.ctx);
  EXPECT_GT((D - U).norm(), 1e-3 * D.norm());
}

TEST(Monodromy, OddWeightRootsGiveKleinFour) {
  const auto& f = fixture();
  ASSERT_EQ(f.roots.size(), 4u);
  for (const LameParams& p : f.roots) {
    const MonodromyPair mp = monodromy_pair(f.L, p, f.ctx);
    EXPECT_EQ(mp.total_weight, 3);
    EXPECT_LT(mp.commutator_defect, 1e-6);
    EXPECT_LT(mp.residual, 1e-9);
    EXPECT_LT((mp.S1 * mp.S2 + mp.S2 * mp.S1).norm(), 1e-6 * (mp.S1 * mp.S2).norm());
    EXPECT_EQ(classify_projective(mp), Projective::kK4);
    for (int i = 0; i < 3; ++i) {
      EXPECT_LT((local_monodromy(i, f.L, p, f.ctx) + Mat2::Identity()).norm(), 1e-5) << i;
    }
  }
}

TEST(Monodromy, PerturbedParametersAreNotLogFree) {
  const auto& f = fixture();
  LameParams p = f.roots.at(0);
  p.B += 0.01;
  const Mat2 M = local_monodromy(0, f.L, p, f.ctx);
  EXPECT_GT((M + Mat2::Identity()).norm(), 1e-4);
}

TEST(Monodromy, TraceIndependentOfBasePoint) {
  const LatticeContext ctx = make_context(Complex(0.2, 1.1));
  const SourceDivisor L = lame_divisor(ctx, 1);
  const LameParams p{{0.0}, Complex(0.7, 0.3)};
  const MonodromyPair a = monodromy_pair(L, p, ctx, Complex(0.3, 0.2));
  const MonodromyPair b = monodromy_pair(L, p, ctx, Complex(0.55, 0.6));
  EXPECT_LT(std::abs(a.S1.trace() - b.S1.trace()), 1e-6);
  EXPECT_LT(std::abs(a.S2.trace() - b.S2.trace()), 1e-6);
  const auto& f = fixture();
  const MonodromyPair c = monodromy_pair(f.L, f.roots.at(0), f.ctx, Complex(0.3, 0.05));
  const MonodromyPair d = monodromy_pair(f.L, f.roots.at(0), f.ctx);
  EXPECT_LT(std::abs(c.S1.trace() - d.S1.trace()), 1e-6);
}

TEST(Monodromy, ClassicalLameCommutesAndLocalIsIdentity) {
  const LatticeContext ctx = make_context(Complex(0.2, 1.1));
  const SourceDivisor L = lame_divisor(ctx, 1);
  for (const Complex B : {Complex(0.7, 0.3), Complex(-1.2, 0.5)}) {
    const LameParams p{{0.0}, B};
    const MonodromyPair mp = monodromy_pair(L, p, ctx);
    EXPECT_LT((mp.S1 * mp.S2 - mp.S2 * mp.S1).norm(), 1e-7 * (mp.S1 * mp.S2).norm());
    EXPECT_EQ(classify_projective(mp), Projective::kAbelianDiagonal);
    EXPECT_LT((local_monodromy(0, L, p, ctx) - Mat2::Identity()).norm(), 1e-6);
  }
}

TEST(Monodromy, HermiteHalphenIsEigenvector) {
  const LatticeContext ctx = make_context(Complex(0.2, 1.1));
  for (int n = 1; n <= 2; ++n) {
    const XnPoint a = point_on_Xn(n, Complex(0.9, -0.4), ctx);
    const std::vector<Complex> pts = xn_points(a);
    const SourceDivisor L = lame_divisor(ctx, n);
    const MonodromyPair mp = monodromy_pair(L, {{0.0}, a.B}, ctx);
    const Complex z0 = mp.base;
    const Complex w = hermite_halphen(pts, z0, ctx);
    const Eigen::Vector2cd v(w, w * hermite_halphen_logderiv(pts, z0, ctx));
    for (const Mat2* S : {&mp.S1, &mp.S2}) {
      const Eigen::Vector2cd Sv = *S * v;
      EXPECT_LT(std::abs(Sv(0) * v(1) - Sv(1) * v(0)) / (Sv.norm() * v.norm()), 1e-5) << n;
    }
  }
}

TEST(Classify, HandBuiltUnipotentPair) {
  MonodromyPair mp;
  mp.S1 << 1.0, 1.0, 0.0, 1.0;
  mp.S2 << 1.0, Complex(0.5, 2.0), 0.0, 1.0;
  mp.total_weight = 2;
  EXPECT_EQ(classify_projective(mp), Projective::kAbelianUnipotent);
  try {
    unitarizable(mp);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNotDiagonalizable);
  }
  MonodromyPair bad;
  bad.S1 << 1.0, 1.0, 0.0, 1.0;
  bad.S2 << 1.0, 0.0, 1.0, 1.0;
  try {
    classify_projective(bad);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInconsistent);
  }
}

TEST(Unitarizable, CriticalPointVersusGeneric) {
  const LatticeContext rho = make_context(std::polar(1.0, kPi / 3.0));
  const TorusPoint a = make_point(rho, 1.0 / 3.0, 1.0 / 3.0);
  const SourceDivisor L = lame_divisor(rho, 1);
  EXPECT_TRUE(unitarizable(monodromy_pair(L, {{0.0}, weierstrass(a.z, rho).wp}, rho)));

  const LatticeContext rect = make_context(1.2 * kI);
  const TorusPoint b = make_point(rect, 0.23, 0.61);
  EXPECT_FALSE(unitarizable(monodromy_pair(lame_divisor(rect, 1), {{0.0}, weierstrass(b.z, rect).wp}, rect)));
}

TEST(Unitarizable, MatchesTypeTwoConditionOnX2) {
  const LatticeContext ctx = make_context(Complex(0.45, 1.3));
  const SourceDivisor L = lame_divisor(ctx, 2);
  std::vector<XnPoint> samples;
  for (const Type2Solution& s : find_type2(2, ctx)) samples.push_back(s.a);
  ASSERT_FALSE(samples.empty());
  std::mt19937_64 rng(32);
  std::uniform_real_distribution<double> u(-4.0, 4.0);
  while (samples.size() < 20) samples.push_back(point_on_Xn(2, Complex(u(rng), u(rng)), ctx));
  int positives = 0;
  for (const XnPoint& a : samples) {
    Complex g{0.0, 0.0};
    for (const TorusPoint& t : a.a) g += hecke_Z(t.r, t.s, ctx);
    const bool critical = std::abs(g) < 1e-6;
    const bool unit = unitarizable(monodromy_pair(L, {{0.0}, a.B}, ctx));
    EXPECT_EQ(unit, critical) << a.B;
    positives += critical;
  }
  EXPECT_GT(positives, 0);
}

TEST(PeriodIntegral, CriticalPointGivesImaginaryPeriods) {
  const LatticeContext rho = make_context(std::polar(1.0, kPi / 3.0));
  const Complex a = make_point(rho, 1.0 / 3.0, 1.0 / 3.0).z;
  for (int i = 1; i <= 2; ++i) {
    const Complex F = period_integral(a, i, rho);
    EXPECT_LT(std::abs(F.real()), 1e-8) << i;
    EXPECT_GT(std::abs(F.imag()), 1.0);
  }
}

TEST(PeriodIntegral, QuadratureAgreesModTwoPiI) {
  std::mt19937_64 rng(33);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int k = 0; k < 10; ++k) {
    const LatticeContext ctx = make_context(Complex(u(rng) - 0.5, 0.8 + 0.6 * u(rng)));
    const Complex a = (0.1 + 0.35 * u(rng)) + (0.1 + 0.35 * u(rng)) * ctx.tau;
    for (int i = 1; i <= 2; ++i) {
      const Complex m = (period_integral(a, i, ctx) - period_integral_quadrature(a, i, ctx)) / (2.0 * kPi * kI);
      EXPECT_LT(std::abs(m - std::round(m.real())), 1e-6) << i;
    }
    // omega2 F1 - omega1 F2 = -4 pi i a by the Legendre relation
    const Complex comb = ctx.tau * period_integral(a, 1, ctx) - period_integral(a, 2, ctx);
    EXPECT_LT(std::abs(comb + 4.0 * kPi * kI * a), 1e-9);
  }
}

TEST(PeriodIntegral, HalfPeriodRejected) {
  const LatticeContext ctx = make_context(Complex(0.1, 1.0));
  for (Complex h : {Complex(0.5, 0.0), ctx.tau / 2.0, (1.0 + ctx.tau) / 2.0}) {
    try {
      period_integral(h, 1, ctx);
      FAIL();
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::kHalfPeriodInput);
    }
  }
}

TEST(Density, ValueInvarianceAndErrors) {
  EXPECT_NEAR(u_density(0.0, 1.0), 8.0 * kPi, 1e-14);
  std::mt19937_64 rng(34);
  std::normal_distribution<double> g;
  for (int k = 0; k < 20; ++k) {
    Complex al{g(rng), g(rng)}, be{g(rng), g(rng)};
    const double nrm = std::sqrt(std::norm(al) + std::norm(be));
    al /= nrm;
    be /= nrm;
    const Complex f{g(rng), g(rng)}, fp{g(rng), g(rng)};
    const Complex den = -std::conj(be) * f + std::conj(al);
    const Complex Mf = (al * f + be) / den, Mfp = fp / (den * den);
    EXPECT_NEAR(u_density(Mf, Mfp), u_density(f, fp), 1e-10);
  }
  for (double lam : {-3.0, 0.0, 2.5}) EXPECT_TRUE(std::isfinite(u_density(std::exp(lam) * 0.4, std::exp(lam))));
  try {
    u_density(1.0, 0.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kCriticalPointOfF);
  }
}
