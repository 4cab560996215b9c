#include "lamelab/monodromy.hpp"

#include <array>
#include <boost/numeric/odeint.hpp>
#include <cmath>
#include <numbers>

#include "internal.hpp"

namespace lamelab {

namespace odeint = boost::numeric::odeint;

Complex potential(Complex z, const SourceDivisor& L, const LameParams& params,
                  const LatticeContext& ctx) {
  Complex I = params.B;
  for (int i = 0; i < L.size(); ++i) {
    const EllipticValues v = elliptic_values(z - L.points[i].z, ctx);
    const double eta = L.weights[i] / 2.0;
    I += eta * (eta + 1.0) * v.wp;
    if (i < static_cast<int>(params.A.size())) I += params.A[i] * v.zeta;
  }
  return I;
}

Complex PathSegment::start() const {
  if (kind == Kind::kLine) return a;
  return center + std::polar(radius, theta0);
}

Complex PathSegment::end() const {
  if (kind == Kind::kLine) return b;
  return center + std::polar(radius, theta0 + sweep);
}

Path polyline(const std::vector<Complex>& pts) {
  Path p;
  for (size_t k = 0; k + 1 < pts.size(); ++k) {
    PathSegment s;
    s.a = pts[k];
    s.b = pts[k + 1];
    p.push_back(s);
  }
  return p;
}

Path circle(Complex center, double radius, double theta0) {
  PathSegment s;
  s.kind = PathSegment::Kind::kArc;
  s.center = center;
  s.radius = radius;
  s.theta0 = theta0;
  s.sweep = 2.0 * std::numbers::pi;
  return {s};
}

namespace {

// Lattice translates of the singular points near the box spanned by the
// points of interest.
std::vector<Complex> nearby_singularities(const SourceDivisor& L,
                                          const LatticeContext& ctx,
                                          Complex lo_hint, Complex hi_hint) {
  std::vector<Complex> out;
  const double ti = ctx.tau.imag();
  const double ymin = std::min(lo_hint.imag(), hi_hint.imag()) - 1.0;
  const double ymax = std::max(lo_hint.imag(), hi_hint.imag()) + 1.0;
  const double xmin = std::min(lo_hint.real(), hi_hint.real()) - 1.0;
  const double xmax = std::max(lo_hint.real(), hi_hint.real()) + 1.0;
  for (const TorusPoint& p : L.points) {
    const int n0 = static_cast<int>(std::floor((ymin - p.z.imag()) / ti)) - 1;
    const int n1 = static_cast<int>(std::ceil((ymax - p.z.imag()) / ti)) + 1;
    for (int n = n0; n <= n1; ++n) {
      const Complex base = p.z + static_cast<double>(n) * ctx.tau;
      const int m0 = static_cast<int>(std::floor(xmin - base.real())) - 1;
      const int m1 = static_cast<int>(std::ceil(xmax - base.real())) + 1;
      for (int m = m0; m <= m1; ++m) out.push_back(base + static_cast<double>(m));
    }
  }
  return out;
}

double segment_distance(Complex a, Complex b, Complex p, double* t_out = nullptr) {
  const Complex d = b - a;
  double t = std::norm(d) > 0 ? ((p - a) * std::conj(d)).real() / std::norm(d) : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  if (t_out) *t_out = t;
  return std::abs(a + t * d - p);
}

double seg_clearance(const PathSegment& s, const std::vector<Complex>& sing) {
  double best = 1e300;
  for (const Complex& p : sing) {
    if (s.kind == PathSegment::Kind::kLine) {
      best = std::min(best, segment_distance(s.a, s.b, p));
    } else {
      // Sampled arc distance; arcs here are small and well separated.
      for (int k = 0; k <= 64; ++k) {
        const Complex z = s.center + std::polar(s.radius, s.theta0 + s.sweep * k / 64.0);
        best = std::min(best, std::abs(z - p));
      }
    }
  }
  return best;
}

std::vector<Complex> singularities_for(const Path& path, const SourceDivisor& L,
                                       const LatticeContext& ctx) {
  Complex lo{1e300, 1e300}, hi{-1e300, -1e300};
  for (const PathSegment& s : path) {
    for (Complex z : {s.start(), s.end(), s.center}) {
      if (s.kind == PathSegment::Kind::kLine && z == s.center) continue;
      lo = {std::min(lo.real(), z.real()), std::min(lo.imag(), z.imag())};
      hi = {std::max(hi.real(), z.real()), std::max(hi.imag(), z.imag())};
    }
  }
  return nearby_singularities(L, ctx, lo, hi);
}

using State = std::array<double, 8>;

struct StepLimit : std::exception {};

Mat2 transport_segment(const PathSegment& seg, const SourceDivisor& L,
                       const LameParams& params, const LatticeContext& ctx,
                       const TransportConfig& cfg, Mat2 Y) {
  auto zt = [&](double t) -> std::pair<Complex, Complex> {
    if (seg.kind == PathSegment::Kind::kLine) return {seg.a + t * (seg.b - seg.a), seg.b - seg.a};
    const double th = seg.theta0 + t * seg.sweep;
    const Complex e = std::polar(seg.radius, th);
    return {seg.center + e, Complex(0.0, seg.sweep) * e};
  };
  auto rhs = [&](const State& x, State& dx, double t) {
    const auto [z, dz] = zt(t);
    const Complex I = potential(z, L, params, ctx);
    // Y = [[w1, w2], [w1', w2']]; dY/dt = dz [[0, 1], [I, 0]] Y.
    for (int c = 0; c < 2; ++c) {
      const Complex w(x[4 * c + 0], x[4 * c + 1]);
      const Complex wp(x[4 * c + 2], x[4 * c + 3]);
      const Complex dw = dz * wp, dwp = dz * I * w;
      dx[4 * c + 0] = dw.real();
      dx[4 * c + 1] = dw.imag();
      dx[4 * c + 2] = dwp.real();
      dx[4 * c + 3] = dwp.imag();
    }
  };
  State x;
  for (int c = 0; c < 2; ++c) {
    x[4 * c + 0] = Y(0, c).real();
    x[4 * c + 1] = Y(0, c).imag();
    x[4 * c + 2] = Y(1, c).real();
    x[4 * c + 3] = Y(1, c).imag();
  }
  long steps = 0;
  auto observer = [&](const State&, double) {
    if (++steps > cfg.max_steps) throw StepLimit{};
  };
  try {
    odeint::integrate_adaptive(
        odeint::make_controlled<odeint::runge_kutta_fehlberg78<State>>(cfg.abs_tol,
                                                                     cfg.rel_tol),
        rhs, x, 0.0, 1.0, 1e-2, observer);
  } catch (const Error&) {
    throw;
  } catch (const StepLimit&) {
    throw Error(ErrorCode::kStepUnderflow, "step budget exhausted");
  } catch (const std::exception& e) {
    throw Error(ErrorCode::kStepUnderflow, e.what());
  }
  Mat2 out;
  for (int c = 0; c < 2; ++c) {
    out(0, c) = Complex(x[4 * c + 0], x[4 * c + 1]);
    out(1, c) = Complex(x[4 * c + 2], x[4 * c + 3]);
  }
  return out;
}

}  // namespace

double path_clearance(const Path& path, const SourceDivisor& L,
                      const LatticeContext& ctx) {
  const std::vector<Complex> sing = singularities_for(path, L, ctx);
  double best = 1e300;
  for (const PathSegment& s : path) best = std::min(best, seg_clearance(s, sing));
  return best;
}

Mat2 transport(const Path& path, const SourceDivisor& L, const LameParams& params,
               const LatticeContext& ctx, const TransportConfig& cfg) {
  if (path_clearance(path, L, ctx) < cfg.min_clearance) {
    throw Error(ErrorCode::kPathTooClose, "path passes within clearance of a singular point");
  }
  Mat2 Y = Mat2::Identity();
  for (const PathSegment& s : path) Y = transport_segment(s, L, params, ctx, cfg, Y);
  return Y;
}

double detour_radius(const SourceDivisor& L, const LatticeContext& ctx) {
  double r = 1e-2;
  for (int i = 0; i < L.size(); ++i) {
    for (int j = i + 1; j < L.size(); ++j) {
      r = std::min(r, lattice_distance(L.points[i].z - L.points[j].z, ctx) / 3.0);
    }
  }
  return r;
}

Path detoured_segment(Complex a, Complex b, const SourceDivisor& L,
                      const LatticeContext& ctx, double radius) {
  const std::vector<Complex> sing = nearby_singularities(L, ctx, a, b);
  const Complex d = b - a;
  const double len = std::abs(d);
  struct Hit {
    double t_in, t_out;
    Complex p;
  };
  std::vector<Hit> hits;
  for (const Complex& p : sing) {
    double t;
    if (segment_distance(a, b, p, &t) >= radius) continue;
    const double tc = ((p - a) * std::conj(d)).real() / std::norm(d);
    const double h = std::abs(((p - a) * std::conj(d)).imag()) / len;
    const double half = std::sqrt(radius * radius - h * h) / len;
    if (tc - half < 0.0 || tc + half > 1.0) {
      throw Error(ErrorCode::kPathTooClose, "endpoint within detour radius of a singular point");
    }
    hits.push_back({tc - half, tc + half, p});
  }
  std::sort(hits.begin(), hits.end(), [](const Hit& x, const Hit& y) { return x.t_in < y.t_in; });
  Path path;
  double t_prev = 0.0;
  for (const Hit& hit : hits) {
    if (hit.t_in < t_prev) {
      throw Error(ErrorCode::kPathTooClose, "overlapping detours");
    }
    PathSegment line;
    line.a = a + t_prev * d;
    line.b = a + hit.t_in * d;
    path.push_back(line);
    PathSegment arc;
    arc.kind = PathSegment::Kind::kArc;
    arc.center = hit.p;
    arc.radius = radius;
    arc.theta0 = std::arg(line.b - hit.p);
    double sweep = std::arg(a + hit.t_out * d - hit.p) - arc.theta0;
    while (sweep <= 0.0) sweep += 2.0 * std::numbers::pi;
    while (sweep > 2.0 * std::numbers::pi) sweep -= 2.0 * std::numbers::pi;
    arc.sweep = sweep;
    path.push_back(arc);
    t_prev = hit.t_out;
  }
  PathSegment tail;
  tail.a = a + t_prev * d;
  tail.b = b;
  path.push_back(tail);
  return path;
}

Complex auto_base_point(const SourceDivisor& L, const LatticeContext& ctx) {
  constexpr int kGrid = 24;
  Complex best_z{0.0, 0.0};
  double best = -1.0;
  for (int i = 0; i < kGrid; ++i) {
    for (int j = 0; j < kGrid; ++j) {
      const Complex z0 = (i + 0.5) / kGrid + ((j + 0.5) / kGrid) * ctx.tau;
      const double c = std::min(
          path_clearance(polyline({z0, z0 + 1.0}), L, ctx),
          path_clearance(polyline({z0, z0 + ctx.tau}), L, ctx));
      if (c > best) {
        best = c;
        best_z = z0;
      }
    }
  }
  return best_z;
}

MonodromyPair monodromy_pair(const SourceDivisor& L, const LameParams& params,
                             const LatticeContext& ctx, std::optional<Complex> z0,
                             const TransportConfig& cfg) {
  MonodromyPair mp;
  mp.total_weight = L.total_weight();
  Path p1, p2;
  if (z0) {
    const double r = detour_radius(L, ctx);
    p1 = detoured_segment(*z0, *z0 + 1.0, L, ctx, r);
    p2 = detoured_segment(*z0, *z0 + ctx.tau, L, ctx, r);
    mp.base = *z0;
  } else {
    mp.base = auto_base_point(L, ctx);
    p1 = polyline({mp.base, mp.base + 1.0});
    p2 = polyline({mp.base, mp.base + ctx.tau});
  }
  std::array<Mat2, 2> S;
  std::array<const Path*, 2> paths{&p1, &p2};
  detail::parallel_for(2, [&](int k) { S[k] = transport(*paths[k], L, params, ctx, cfg); });
  mp.S1 = S[0];
  mp.S2 = S[1];
  mp.residual = std::max(std::abs(mp.S1.determinant() - 1.0),
                         std::abs(mp.S2.determinant() - 1.0));
  const Mat2 C = mp.S2.inverse() * mp.S1.inverse() * mp.S2 * mp.S1;
  const double sign = (mp.total_weight % 2 == 0) ? 1.0 : -1.0;
  mp.commutator_defect = (C - sign * Mat2::Identity()).norm();
  return mp;
}

Mat2 local_monodromy(int i, const SourceDivisor& L, const LameParams& params,
                     const LatticeContext& ctx, const TransportConfig& cfg) {
  if (i < 0 || i >= L.size()) throw Error(ErrorCode::kInvalidArgument, "point index");
  return transport(circle(L.points[i].z, detour_radius(L, ctx)), L, params, ctx, cfg);
}

const char* projective_name(Projective p) {
  switch (p) {
    case Projective::kK4: return "K4";
    case Projective::kAbelianDiagonal: return "AbelianDiagonal";
    case Projective::kAbelianUnipotent: return "AbelianUnipotent";
    case Projective::kOther: return "Other";
  }
  return "Other";
}

namespace {

Mat2 det_normalized(const Mat2& S) { return S / std::sqrt(S.determinant()); }

// Determinant-one matrix: scalar, diagonalizable with distinct eigenvalues,
// or a nontrivial unipotent (times +-1).
enum class Shape { kScalar, kDiagonal, kUnipotent };

Shape shape_of(const Mat2& S, double tol) {
  const Complex tr = S.trace();
  const double scale = std::max(1.0, S.norm());
  if (std::abs(tr * tr - 4.0) > tol * scale * scale) return Shape::kDiagonal;
  const Complex lam = tr / 2.0;
  if ((S - lam * Mat2::Identity()).norm() < std::sqrt(tol) * scale) return Shape::kScalar;
  return Shape::kUnipotent;
}

}  // namespace

Projective classify_projective(const MonodromyPair& mp, double tol) {
  const Mat2 A = det_normalized(mp.S1), B = det_normalized(mp.S2);
  const Mat2 C = B.inverse() * A.inverse() * B * A;
  const double scale = std::max({1.0, A.norm() * B.norm()});
  const double d_minus = (C + Mat2::Identity()).norm();
  const double d_plus = (C - Mat2::Identity()).norm();
  if (d_minus < tol * scale) {
    const double tA = std::abs(A.trace()) / A.norm();
    const double tB = std::abs(B.trace()) / B.norm();
    return (tA < tol && tB < tol) ? Projective::kK4 : Projective::kOther;
  }
  if (d_plus < tol * scale) {
    const Shape sa = shape_of(A, tol), sb = shape_of(B, tol);
    if (sa == Shape::kUnipotent || sb == Shape::kUnipotent) {
      return (sa == Shape::kDiagonal || sb == Shape::kDiagonal)
                 ? Projective::kOther
                 : Projective::kAbelianUnipotent;
    }
    return Projective::kAbelianDiagonal;
  }
  throw Error(ErrorCode::kInconsistent,
              "commutator defect " + std::to_string(std::min(d_minus, d_plus)));
}

bool unitarizable(const MonodromyPair& mp, double tol) {
  const Projective p = classify_projective(mp, 1e-5);
  if (p == Projective::kAbelianUnipotent) {
    throw Error(ErrorCode::kNotDiagonalizable, "unipotent monodromy");
  }
  if (p != Projective::kAbelianDiagonal) {
    throw Error(ErrorCode::kInvalidArgument, "unitarizable expects an abelian diagonal pair");
  }
  for (const Mat2* S : {&mp.S1, &mp.S2}) {
    const Eigen::ComplexEigenSolver<Mat2> es(*S);
    const Complex r = es.eigenvalues()[0] / es.eigenvalues()[1];
    if (std::abs(std::abs(r) - 1.0) > tol) return false;
  }
  return true;
}

namespace {

void check_period_input(Complex a, const LatticeContext& ctx) {
  for (Complex h : {Complex(0.0, 0.0), Complex(0.5, 0.0), ctx.tau / 2.0,
                    (1.0 + ctx.tau) / 2.0}) {
    if (lattice_distance(a - h, ctx) < ctx.clearance) {
      throw Error(ErrorCode::kHalfPeriodInput, "a lies on the half-period lattice");
    }
  }
}

}  // namespace

Complex period_integral(Complex a, int i, const LatticeContext& ctx) {
  if (i != 1 && i != 2) throw Error(ErrorCode::kInvalidArgument, "i is 1 or 2");
  check_period_input(a, ctx);
  const Complex omega = (i == 1) ? Complex(1.0, 0.0) : ctx.tau;
  const Complex eta = (i == 1) ? ctx.eta1 : ctx.eta2;
  return 2.0 * (omega * zeta_w(a, ctx) - eta * a);
}

Complex period_integral_quadrature(Complex a, int i, const LatticeContext& ctx,
                                   int nodes) {
  if (i != 1 && i != 2) throw Error(ErrorCode::kInvalidArgument, "i is 1 or 2");
  if (nodes < 8) throw Error(ErrorCode::kInvalidArgument, "nodes >= 8");
  check_period_input(a, ctx);
  const Complex omega = (i == 1) ? Complex(1.0, 0.0) : ctx.tau;
  const Complex other = (i == 1) ? ctx.tau : Complex(1.0, 0.0);
  // Offset along the other period maximizing the distance to +-a and 0.
  Complex x0{0.0, 0.0};
  double best = -1.0;
  for (int k = 0; k < 64; ++k) {
    const Complex c = ((k + 0.5) / 64.0) * other;
    double d = 1e300;
    for (Complex p : {a, -a, Complex(0.0, 0.0)}) {
      for (int m = -2; m <= 2; ++m) {
        const Complex pm = p + static_cast<double>(m) * other;
        d = std::min(d, std::abs(((pm - c) * std::conj(omega)).imag()) / std::abs(omega));
      }
    }
    if (d > best) {
      best = d;
      x0 = c;
    }
  }
  const Complex dwp = weierstrass(a, ctx).dwp;
  const Complex wa = weierstrass(a, ctx).wp;
  Complex sum{0.0, 0.0};
  for (int k = 0; k < nodes; ++k) {
    const Complex x = x0 + (static_cast<double>(k) / nodes) * omega;
    sum += dwp / (weierstrass(x, ctx).wp - wa);
  }
  return sum * omega / static_cast<double>(nodes);
}

double u_density(Complex f, Complex fprime) {
  if (std::abs(fprime) == 0.0) {
    throw Error(ErrorCode::kCriticalPointOfF, "f' vanishes");
  }
  const double n = 1.0 + std::norm(f);
  return 8.0 * std::numbers::pi + std::log(std::norm(fprime) / (n * n));
}

}  // namespace lamelab
