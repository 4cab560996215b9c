#include "lamelab/glame.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <functional>
#include <random>

#include "internal.hpp"

namespace lamelab {

using CPoly = MultiPoly<Complex>;
using RPoly = MultiPoly<Rational>;

int SourceDivisor::total_weight() const {
  int s = 0;
  for (int w : weights) s += w;
  return s;
}

namespace {

CPoly monomial(int nv, const std::vector<std::pair<int, int>>& powers, Complex c) {
  CPoly p(nv);
  std::vector<int> e(nv, 0);
  for (const auto& [var, k] : powers) e[var] += k;
  p.add_term(e, c);
  return p;
}

void check_divisor(const SourceDivisor& L, const LatticeContext& ctx) {
  if (L.points.size() != L.weights.size() || L.points.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "divisor needs matching points and weights");
  }
  for (int w : L.weights) {
    if (w < 1) throw Error(ErrorCode::kInvalidArgument, "weights must be positive");
  }
  for (int i = 0; i < L.size(); ++i) {
    for (int j = i + 1; j < L.size(); ++j) {
      if (lattice_distance(L.points[i].z - L.points[j].z, ctx) < 1e-6) {
        throw Error(ErrorCode::kDistinctnessViolation,
                    "points " + std::to_string(i + 1) + " and " +
                        std::to_string(j + 1) + " coincide mod the lattice");
      }
    }
  }
}

}  // namespace

std::vector<int> system_weights(int N, bool tagged) {
  std::vector<int> w(N, 1);
  w.push_back(2);
  if (tagged) w.push_back(1);
  return w;
}

GLameSystem build_system(const SourceDivisor& L, const LatticeContext& ctx) {
  check_divisor(L, ctx);
  const int N = L.size();
  const int nv = N + 2;
  const int vB = N, vU = N + 1;

  GLameSystem sys;
  sys.divisor = L;
  sys.nvars = N + 1;

  CPoly f0(nv);
  for (int i = 0; i < N; ++i) f0 += CPoly::variable(nv, i);
  sys.tagged.push_back(f0);

  for (int i = 0; i < N; ++i) {
    const int l = L.weights[i];
    std::vector<CPoly> Lk(l, CPoly(nv));
    for (int j = 0; j < N; ++j) {
      const double eta = L.weights[j] / 2.0;
      const double cw = eta * (eta + 1.0);
      const std::vector<Complex> zt =
          taylor_data(TaylorKind::kZeta, L.points[i].z, L.points[j].z, l - 1, ctx);
      const std::vector<Complex> wt =
          taylor_data(TaylorKind::kWp, L.points[i].z, L.points[j].z, l - 1, ctx);
      for (int k = 0; k < l; ++k) {
        Lk[k] += monomial(nv, {{j, 1}, {vU, k + 1}}, zt[k]);
        Lk[k] += monomial(nv, {{vU, k + 2}}, cw * wt[k]);
      }
    }
    Lk[0] += CPoly::variable(nv, vB);

    std::vector<CPoly> e;
    e.push_back(CPoly::variable(nv, i, Complex(1.0 / l, 0.0)));
    auto conv = [&](int k) {
      CPoly s(nv);
      for (int t = 0; t <= k; ++t) s += e[t] * e[k - t];
      return s;
    };
    for (int k = 0; k + 1 < l; ++k) {
      e.push_back((Lk[k] - conv(k)) * Complex(1.0 / (l - k - 1), 0.0));
    }
    sys.tagged.push_back(Lk[l - 1] - conv(l - 1));
  }
  for (const CPoly& p : sys.tagged) sys.eqs.push_back(p.drop_variable(vU));
  return sys;
}

RPoly top_term_recursive(int l) {
  if (l < 1) throw Error(ErrorCode::kInvalidArgument, "l must be positive");
  const int nv = 2;
  const RPoly A = RPoly::variable(nv, 0), B = RPoly::variable(nv, 1);
  std::vector<RPoly> e{A * Rational(1, l)};
  auto conv = [&](int k) {
    RPoly s(nv);
    for (int t = 0; t <= k; ++t) s += e[t] * e[k - t];
    return s;
  };
  for (int k = 0; k + 1 < l; ++k) {
    RPoly rhs = -conv(k);
    if (k == 0) rhs += B;
    e.push_back(rhs * Rational(1, l - k - 1));
  }
  RPoly q = -conv(l - 1);
  if (l == 1) q += B;
  return q;
}

RPoly top_term_closed(int l) {
  if (l < 0) throw Error(ErrorCode::kInvalidArgument, "l must be non-negative");
  const int nv = 2;
  const RPoly A = RPoly::variable(nv, 0), B = RPoly::variable(nv, 1);
  Rational fact = 1;
  for (int k = 2; k <= l; ++k) fact *= k;
  RPoly q = RPoly::constant(nv, Rational(l % 2 == 0 ? 1 : -1) / (fact * fact));
  if (l % 2 == 0) q = q * A;
  for (int m = l; m > 0; m -= 2) q = q * (A * A - B * Rational(m * m));
  return q;
}

CPoly to_complex(const RPoly& p) {
  return p.map_coefficients<Complex>(
      [](const Rational& r) { return Complex(r.convert_to<double>(), 0.0); });
}

Complex ehat_eval(Complex s, int k, Complex A, Complex B) {
  for (int j = 0; j <= k; ++j) {
    if (std::abs(s - static_cast<double>(j)) < 1e-12) {
      throw Error(ErrorCode::kPoleAtInteger, "s = " + std::to_string(j));
    }
  }
  std::vector<Complex> e{-A / s};
  if (k >= 1) e.push_back((A * A / (s * s) - B) / (s - 1.0));
  for (int m = 1; m + 1 <= k; ++m) {
    Complex sum{0.0, 0.0};
    for (int t = 0; t <= m; ++t) sum += e[t] * e[m - t];
    e.push_back(sum / (s - static_cast<double>(m + 1)));
  }
  return e[k];
}

long long degree_formula(const SourceDivisor& L) {
  if (L.total_weight() % 2 == 0) {
    throw Error(ErrorCode::kEvenTotalWeight, "solution set is not finite");
  }
  long long prod = 1;
  for (int w : L.weights) prod *= (w + 1);
  return prod / 2;
}

// ---------------------------------------------------------------------------
// Newton machinery

namespace {

using Vec = Eigen::VectorXcd;
using Mat = Eigen::MatrixXcd;

struct Evaluated {
  Vec F;
  Mat J;
  Eigen::VectorXd scale;
  double rel() const {
    double r = 0.0;
    for (Eigen::Index i = 0; i < F.size(); ++i) {
      r = std::max(r, std::abs(F[i]) / std::max(scale[i], 1e-300));
    }
    return r;
  }
};

using SystemFn = std::function<Evaluated(const Vec&)>;

struct PolyJacobian {
  std::vector<CPoly> eqs;
  std::vector<std::vector<CPoly>> jac;

  explicit PolyJacobian(const std::vector<CPoly>& e) : eqs(e) {
    for (const CPoly& p : eqs) {
      std::vector<CPoly> row;
      for (int v = 0; v < p.nvars(); ++v) row.push_back(p.derivative(v));
      jac.push_back(std::move(row));
    }
  }

  Evaluated operator()(const Vec& x) const {
    const int m = static_cast<int>(eqs.size());
    const int n = static_cast<int>(x.size());
    std::span<const Complex> xs(x.data(), n);
    Evaluated ev{Vec(m), Mat(m, n), Eigen::VectorXd(m)};
    for (int i = 0; i < m; ++i) {
      ev.F[i] = eqs[i].eval(xs);
      ev.scale[i] = eqs[i].eval_abs(xs);
      for (int j = 0; j < n; ++j) ev.J(i, j) = jac[i][j].eval(xs);
    }
    return ev;
  }
};

struct NewtonOutcome {
  bool ok = false;
  Vec x;
  double rel = 1e300;
};

double deflation_logm(const Vec& x, const std::vector<Vec>& roots) {
  double s = 0.0;
  for (const Vec& r : roots) {
    const double d2 = (x - r).squaredNorm();
    s += std::log(1.0 / std::max(d2, 1e-300) + 1.0);
  }
  return s;
}

NewtonOutcome deflated_newton(const SystemFn& fn, Vec x,
                              const std::vector<Vec>& roots, double radius,
                              double tol) {
  NewtonOutcome out;
  auto merit = [&](const Vec& y, const Evaluated& ev) {
    double s = 0.0;
    for (Eigen::Index i = 0; i < ev.F.size(); ++i) {
      const double t = std::abs(ev.F[i]) / std::max(ev.scale[i], 1e-300);
      s += t * t;
    }
    return 0.5 * std::log(s + 1e-300) + deflation_logm(y, roots);
  };
  Evaluated ev = fn(x);
  for (int it = 0; it < 200; ++it) {
    if (!ev.F.allFinite()) return out;
    if (ev.rel() < 1e-15) break;
    Eigen::PartialPivLU<Mat> lu(ev.J);
    Vec d = lu.solve(-ev.F);
    if (!d.allFinite()) return out;
    // Deflated step: Newton direction scaled by 1/(1 - D log m . d).
    double dlog = 0.0;
    for (const Vec& r : roots) {
      const Vec diff = x - r;
      const double d2 = diff.squaredNorm();
      const double inner = (diff.adjoint() * d)(0).real();
      dlog += (-2.0 * inner / (d2 * d2)) / (1.0 / d2 + 1.0);
    }
    const double scale_step = 1.0 / (1.0 - dlog);
    if (std::isfinite(scale_step)) d *= scale_step;
    const double cap = std::max(radius, 0.5 * x.norm());
    if (d.norm() > cap) d *= cap / d.norm();

    const double m0 = merit(x, ev);
    double lam = 1.0;
    Vec xn;
    Evaluated en;
    for (int ls = 0; ls < 8; ++ls) {
      xn = x + lam * d;
      en = fn(xn);
      if (en.F.allFinite() && merit(xn, en) < m0) break;
      lam *= 0.5;
    }
    const double step = (xn - x).norm();
    x = xn;
    ev = en;
    if (x.norm() > 1e8 * radius) return out;
    if (step < 1e-15 * (1.0 + x.norm())) break;
  }
  // Undeflated polish.
  for (int it = 0; it < 8; ++it) {
    if (!ev.F.allFinite()) return out;
    if (ev.rel() < 1e-15) break;
    Eigen::PartialPivLU<Mat> lu(ev.J);
    const Vec d = lu.solve(-ev.F);
    if (!d.allFinite()) break;
    const Vec xn = x + d;
    const Evaluated en = fn(xn);
    if (!en.F.allFinite() || en.rel() > ev.rel()) break;
    x = xn;
    ev = en;
  }
  out.x = x;
  out.rel = ev.rel();
  out.ok = out.rel < tol;
  return out;
}

struct MultistartJob {
  SystemFn fn;
  std::vector<int> weights;  // start magnitude radius^w per variable
  double radius = 1.0;
  long long expected = -1;
};

struct MultistartResult {
  std::vector<Vec> roots;
  std::vector<double> rel;
  int starts = 0;
};

MultistartResult multistart(const MultistartJob& job, const SolveConfig& cfg) {
  std::mt19937_64 rng(cfg.seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  MultistartResult res;
  const int n = static_cast<int>(job.weights.size());
  const int batch = std::max(1, cfg.batch);
  while (res.starts < cfg.max_starts &&
         (job.expected < 0 ||
          static_cast<long long>(res.roots.size()) < job.expected)) {
    const int m = std::min(batch, cfg.max_starts - res.starts);
    std::vector<Vec> starts(m, Vec(n));
    for (int k = 0; k < m; ++k) {
      for (int v = 0; v < n; ++v) {
        const double mag = std::pow(job.radius, job.weights[v]);
        starts[k][v] = mag * Complex(gauss(rng), gauss(rng)) / std::sqrt(2.0);
      }
    }
    const std::vector<Vec> known = res.roots;
    std::vector<NewtonOutcome> outs(m);
    detail::parallel_for(m, [&](int k) {
      outs[k] = deflated_newton(job.fn, starts[k], known, job.radius,
                                cfg.residual_tol);
    });
    for (const NewtonOutcome& o : outs) {
      if (!o.ok) continue;
      bool dup = false;
      for (const Vec& r : res.roots) {
        if ((o.x - r).norm() <= cfg.dedup_rel * (1.0 + r.norm())) {
          dup = true;
          break;
        }
      }
      if (!dup) {
        res.roots.push_back(o.x);
        res.rel.push_back(o.rel);
      }
    }
    res.starts += m;
  }
  return res;
}

double data_radius(const SourceDivisor& L, const LatticeContext& ctx) {
  double zmax = 0.0, wmax = 0.0;
  for (int i = 0; i < L.size(); ++i) {
    for (int j = 0; j < L.size(); ++j) {
      if (i == j) continue;
      const EllipticValues v = elliptic_values(L.points[i].z - L.points[j].z, ctx);
      zmax = std::max(zmax, std::abs(v.zeta));
      wmax = std::max(wmax, std::abs(v.wp));
    }
  }
  const double g = std::sqrt(std::abs(ctx.g2)) / 4.0;
  int lmax = 1;
  for (int w : L.weights) lmax = std::max(lmax, w);
  return lmax * (1.0 + zmax + std::sqrt(wmax + g));
}

LameParams to_params(const Vec& x, int N) {
  LameParams p;
  for (int i = 0; i < N; ++i) p.A.push_back(x[i]);
  p.B = x[N];
  return p;
}

Vec from_params(const LameParams& p) {
  Vec x(p.A.size() + 1);
  for (size_t i = 0; i < p.A.size(); ++i) x[i] = p.A[i];
  x[p.A.size()] = p.B;
  return x;
}

}  // namespace

double system_residual(const GLameSystem& sys, const LameParams& p) {
  const Vec x = from_params(p);
  std::span<const Complex> xs(x.data(), x.size());
  double r = 0.0;
  for (const CPoly& f : sys.eqs) {
    r = std::max(r, std::abs(f.eval(xs)) / std::max(f.eval_abs(xs), 1e-300));
  }
  return r;
}

SolveResult solve_system(const GLameSystem& sys, const LatticeContext& ctx,
                         const SolveConfig& cfg) {
  const int N = sys.divisor.size();
  const bool odd = sys.divisor.total_weight() % 2 == 1;
  PolyJacobian pj(sys.eqs);
  MultistartJob job;
  job.fn = [&pj](const Vec& x) { return pj(x); };
  job.weights = system_weights(N, false);
  job.radius = data_radius(sys.divisor, ctx);
  job.expected = odd ? degree_formula(sys.divisor) : -1;
  SolveConfig c = cfg;
  if (!odd) c.max_starts = std::min(c.max_starts, 64);
  const MultistartResult mr = multistart(job, c);

  SolveResult out;
  out.expected = job.expected;
  out.starts_used = mr.starts;
  for (size_t k = 0; k < mr.roots.size(); ++k) {
    out.solutions.push_back(to_params(mr.roots[k], N));
    out.residuals.push_back(mr.rel[k]);
  }
  out.complete = odd && static_cast<long long>(out.solutions.size()) == out.expected;
  return out;
}

void require_complete(const SolveResult& r) {
  if (!r.complete) {
    throw Error(ErrorCode::kPartialEnumeration,
                "found " + std::to_string(r.solutions.size()) + " of " +
                    std::to_string(r.expected) + " solutions");
  }
}

SolveResult symmetric_reduce(const GLameSystem& sys, const LatticeContext& ctx,
                             const SolveConfig& cfg) {
  const SourceDivisor& L = sys.divisor;
  const int N = L.size();
  if (N % 2 == 0) {
    throw Error(ErrorCode::kInvalidArgument, "symmetric reduction needs N = 2n + 1");
  }
  const int n = (N - 1) / 2;
  for (int w : L.weights) {
    if (w != 1) throw Error(ErrorCode::kInvalidArgument, "divisor must be primitive");
  }
  const double tol = 1e-12 * (1.0 + std::abs(ctx.tau));
  if (std::abs(L.points[N - 1].z) > tol) {
    throw Error(ErrorCode::kInvalidArgument, "last point must be 0");
  }
  for (int i = 0; i < n; ++i) {
    if (std::abs(L.points[n + i].z + L.points[i].z) > tol) {
      throw Error(ErrorCode::kInvalidArgument, "points must satisfy p_{n+i} = -p_i");
    }
  }

  // Reduced variables y = (A_1..A_n, B); lift A_{n+i} = -A_i, A_{2n+1} = 0.
  Eigen::MatrixXcd T = Eigen::MatrixXcd::Zero(N + 1, n + 1);
  for (int i = 0; i < n; ++i) {
    T(i, i) = 1.0;
    T(n + i, i) = -1.0;
  }
  T(N, n) = 1.0;
  std::vector<int> rows;
  for (int i = 1; i <= n; ++i) rows.push_back(i);
  rows.push_back(N);  // F_{2n+1}: the linear relation

  PolyJacobian pj(sys.eqs);
  MultistartJob job;
  job.fn = [&pj, T, rows](const Vec& y) {
    const Evaluated full = pj(T * y);
    const int m = static_cast<int>(rows.size());
    Evaluated ev{Vec(m), Mat(m, T.cols()), Eigen::VectorXd(m)};
    for (int k = 0; k < m; ++k) {
      ev.F[k] = full.F[rows[k]];
      ev.scale[k] = full.scale[rows[k]];
      ev.J.row(k) = full.J.row(rows[k]) * T;
    }
    return ev;
  };
  job.weights = system_weights(n, false);
  job.radius = data_radius(L, ctx);
  job.expected = 1LL << n;
  const MultistartResult mr = multistart(job, cfg);

  SolveResult out;
  out.expected = job.expected;
  out.starts_used = mr.starts;
  for (const Vec& y : mr.roots) {
    const LameParams p = to_params(T * y, N);
    out.solutions.push_back(p);
    out.residuals.push_back(system_residual(sys, p));
  }
  out.complete = static_cast<long long>(out.solutions.size()) == out.expected;
  return out;
}

SolveResult symmetric_even_family(const GLameSystem& sys,
                                  std::span<const Complex> a1_values,
                                  const SolveConfig& cfg) {
  const SourceDivisor& L = sys.divisor;
  const int N = L.size();
  if (N % 2 != 0) {
    throw Error(ErrorCode::kInvalidArgument, "even family needs N = 2n");
  }
  const int n = N / 2;
  for (int w : L.weights) {
    if (w != 1) throw Error(ErrorCode::kInvalidArgument, "divisor must be primitive");
  }
  PolyJacobian pj(sys.eqs);

  SolveResult out;
  Vec prev;  // (A_2..A_n, B) from the previous sample
  for (const Complex a1 : a1_values) {
    // Unknowns y = (A_2..A_n, B); A_1 fixed, A_{n+i} = -A_i.
    Eigen::MatrixXcd T = Eigen::MatrixXcd::Zero(N + 1, n);
    Vec shift = Vec::Zero(N + 1);
    shift[0] = a1;
    shift[n] = -a1;
    for (int i = 1; i < n; ++i) {
      T(i, i - 1) = 1.0;
      T(n + i, i - 1) = -1.0;
    }
    T(N, n - 1) = 1.0;
    SystemFn fn = [&pj, T, shift, n](const Vec& y) {
      const Evaluated full = pj(T * y + shift);
      Evaluated ev{Vec(n), Mat(n, n), Eigen::VectorXd(n)};
      for (int k = 0; k < n; ++k) {
        ev.F[k] = full.F[k + 1];
        ev.scale[k] = full.scale[k + 1];
        ev.J.row(k) = full.J.row(k + 1) * T;
      }
      return ev;
    };
    NewtonOutcome best;
    if (prev.size() == n) best = deflated_newton(fn, prev, {}, 1.0 + prev.norm(), cfg.residual_tol);
    if (!best.ok) {
      MultistartJob job;
      job.fn = fn;
      job.weights = std::vector<int>(n, 1);
      job.weights.back() = 2;
      job.radius = 1.0 + std::abs(a1);
      job.expected = 1;
      SolveConfig c = cfg;
      c.max_starts = std::min(cfg.max_starts, 400);
      const MultistartResult mr = multistart(job, c);
      if (mr.roots.empty()) continue;
      best.ok = true;
      best.x = mr.roots.front();
    }
    prev = best.x;
    const LameParams p = to_params(T * best.x + shift, N);
    out.solutions.push_back(p);
    out.residuals.push_back(system_residual(sys, p));
  }
  out.expected = static_cast<long long>(a1_values.size());
  out.complete = out.solutions.size() == a1_values.size();
  return out;
}

// ---------------------------------------------------------------------------
// Germs at infinity

std::vector<int> alternating_signs(int N) {
  std::vector<int> s(N);
  for (int i = 0; i < N; ++i) s[i] = ((i + 1) % 2 == 0) ? 1 : -1;
  return s;
}

namespace {

struct PairData {
  std::vector<std::vector<Complex>> zeta;  // zeta(p_i - p_j), i != j
  std::vector<Complex> wp_sum;             // sum_{j != i} wp(p_i - p_j)
};

PairData pair_data(const SourceDivisor& L, const LatticeContext& ctx) {
  const int N = L.size();
  PairData d{std::vector<std::vector<Complex>>(N, std::vector<Complex>(N)),
             std::vector<Complex>(N)};
  for (int i = 0; i < N; ++i) {
    for (int j = 0; j < N; ++j) {
      if (i == j) continue;
      const EllipticValues v = elliptic_values(L.points[i].z - L.points[j].z, ctx);
      d.zeta[i][j] = v.zeta;
      d.wp_sum[i] += v.wp;
    }
  }
  return d;
}

void check_germ_input(const SourceDivisor& L, std::span<const int> signs) {
  const int N = L.size();
  if (N % 2 != 0) throw Error(ErrorCode::kInvalidArgument, "germs need even N");
  for (int w : L.weights) {
    if (w != 1) throw Error(ErrorCode::kInvalidArgument, "divisor must be primitive");
  }
  if (static_cast<int>(signs.size()) != N) {
    throw Error(ErrorCode::kInvalidArgument, "one sign per point");
  }
  int s = 0;
  for (int e : signs) {
    if (e != 1 && e != -1) throw Error(ErrorCode::kInvalidArgument, "signs are +-1");
    s += e;
  }
  if (s != 0) throw Error(ErrorCode::kInvalidArgument, "signs must sum to 0");
}

}  // namespace

GermSeries germ_series(const SourceDivisor& L, const LatticeContext& ctx,
                       std::span<const int> signs, int K) {
  check_divisor(L, ctx);
  check_germ_input(L, signs);
  const int N = L.size();
  const PairData d = pair_data(L, ctx);
  GermSeries g;
  g.signs.assign(signs.begin(), signs.end());
  g.coeffs.assign(N, std::vector<Complex>(K + 1, Complex{0.0, 0.0}));
  g.magnitudes.assign(N, std::vector<double>(K + 1, 0.0));
  for (int i = 0; i < N; ++i) {
    g.coeffs[i][1] = 1.0;
    g.magnitudes[i][1] = 1.0;
  }
  for (int k = 1; k < K; ++k) {
    for (int i = 0; i < N; ++i) {
      Complex s{0.0, 0.0};
      double mag = 0.0;
      auto add = [&](Complex term) {
        s += term;
        mag += std::abs(term);
      };
      for (int j = 0; j < N; ++j) {
        if (j != i) add(static_cast<double>(signs[j]) * d.zeta[i][j] * g.coeffs[j][k]);
      }
      if (k == 2) add(0.75 * d.wp_sum[i]);
      for (int p = 2; p <= k; ++p) add(-g.coeffs[i][p] * g.coeffs[i][k + 2 - p]);
      g.coeffs[i][k + 1] = 0.5 * s;
      g.magnitudes[i][k + 1] = 0.5 * mag;
    }
  }
  return g;
}

GermConstraints germ_constraints(const SourceDivisor& L,
                                 const LatticeContext& ctx,
                                 const GermSeries& g) {
  const int N = L.size();
  const int K = static_cast<int>(g.coeffs.front().size()) - 1;
  GermConstraints c;
  c.values.assign(K + 1, Complex{0.0, 0.0});
  c.scales.assign(K + 1, 0.0);
  for (int k = 1; k <= K; ++k) {
    for (int i = 0; i < N; ++i) {
      c.values[k] += static_cast<double>(g.signs[i]) * g.coeffs[i][k];
      c.scales[k] = std::max(c.scales[k], g.magnitudes[i][k]);
    }
  }
  const PairData d = pair_data(L, ctx);
  for (int i = 0; i < N; ++i) {
    Complex zh{0.0, 0.0};
    for (int j = 0; j < N; ++j) {
      if (j != i) zh += static_cast<double>(g.signs[j]) * d.zeta[i][j];
    }
    c.k4_lhs += static_cast<double>(g.signs[i]) * zh * zh * zh;
    c.k4_rhs += 3.0 * static_cast<double>(g.signs[i]) * zh * d.wp_sum[i];
  }
  return c;
}

L4Identity verify_l4_identity(std::span<const Complex> p,
                              const LatticeContext& ctx) {
  if (p.size() != 4) throw Error(ErrorCode::kInvalidArgument, "four points");
  auto zt = [&](int i, int j) { return zeta_w(p[i - 1] - p[j - 1], ctx); };
  auto wp = [&](int i, int j) { return weierstrass(p[i - 1] - p[j - 1], ctx).wp; };
  const Complex z12 = zt(1, 2), z13 = zt(1, 3), z14 = zt(1, 4);
  const Complex z23 = zt(2, 3), z24 = zt(2, 4), z34 = zt(3, 4);
  L4Identity out;
  out.lhs = wp(2, 4) - wp(1, 3);
  const Complex f1 = z24 - z13 + z12 - z34;
  const Complex f2 = z24 + z13 - z14 - z23;
  out.rhs = f1 * f2;
  out.scale = std::max({std::abs(wp(2, 4)), std::abs(wp(1, 3)), std::abs(out.rhs),
                        std::abs(z24 * z24), std::abs(z13 * z13)});
  return out;
}

}  // namespace lamelab
