#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include "cli_support.hpp"
#include "lamelab/green_hecke.hpp"
#include "lamelab/lame_curves.hpp"

using namespace lamelab;
using nlohmann::json;

namespace {

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;
constexpr int kExitIncomplete = 3;

struct Common {
  std::string tau = "0+1i";
  std::string output;
  std::string format = "json";
  std::uint64_t seed = 1;
};

void add_common(CLI::App* app, Common& c, bool with_tau = true) {
  if (with_tau) app->add_option("--tau", c.tau, "period ratio as a+bi");
  app->add_option("-o,--output", c.output, "output file (default stdout)");
  app->add_option("--format", c.format, "json or csv")
      ->check(CLI::IsMember({"json", "csv"}));
  app->add_option("--seed", c.seed, "multistart seed");
}

void emit(const Common& c, const std::string& text) {
  if (c.output.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(c.output, std::ios::binary);
  if (!out) throw Error(ErrorCode::kInvalidArgument, "cannot open " + c.output);
  out << text;
}

void emit_json(const Common& c, json j) {
  j["schema"] = 1;
  emit(c, j.dump(2) + "\n");
}

void need_json(const Common& c, const char* cmd) {
  if (c.format != "json") {
    throw Error(ErrorCode::kInvalidArgument, std::string(cmd) + " supports json output only");
  }
}

std::string num(double x) {
  std::ostringstream s;
  s.precision(17);
  s << x;
  return s.str();
}

// --- critical ---------------------------------------------------------------

struct CriticalArgs {
  Common c;
  int grid = 64;
};

int run_critical(const CriticalArgs& a) {
  const LatticeContext ctx = make_context(cli::parse_tau(a.c.tau));
  const CriticalSet set = critical_points(ctx, a.grid);
  if (a.c.format == "csv") {
    std::string out = "r,s,re_z,im_z\n";
    for (const TorusPoint& p : set.points) {
      out += num(p.r) + "," + num(p.s) + "," + num(p.z.real()) + "," + num(p.z.imag()) + "\n";
    }
    emit(a.c, out);
    return kExitPass;
  }
  json pts = json::array();
  for (const TorusPoint& p : set.points) pts.push_back(cli::to_json(p));
  emit_json(a.c, {{"command", "critical"},
                  {"tau", cli::to_json(ctx.tau)},
                  {"count", set.count},
                  {"class", std::string(omega_name(classify_omega(set)))},
                  {"points", pts}});
  return kExitPass;
}

// --- hecke ------------------------------------------------------------------

struct HeckeArgs {
  Common c;
  double r = 1.0 / 3.0, s = 1.0 / 3.0;
  bool winding = false;
};

int run_hecke(const HeckeArgs& a) {
  need_json(a.c, "hecke");
  const LatticeContext ctx = make_context(cli::parse_tau(a.c.tau));
  const HeckeJet jet = hecke_Z_jet(a.r, a.s, ctx);
  json j{{"command", "hecke"},
         {"tau", cli::to_json(ctx.tau)},
         {"r", a.r},
         {"s", a.s},
         {"Z", cli::to_json(jet.Z)},
         {"Z_qseries", cli::to_json(hecke_Z_qseries(a.r, a.s, ctx))},
         {"dZ_dr", cli::to_json(jet.dr)},
         {"dZ_ds", cli::to_json(jet.ds)},
         {"green", green_value(a.r + a.s * ctx.tau, ctx)}};
  if (a.winding) j["tau_zeros"] = tau_winding_number(a.r, a.s);
  emit_json(a.c, j);
  return kExitPass;
}

// --- lame-curve -------------------------------------------------------------

struct LameArgs {
  Common c;
  int n = 2;
  std::string B = "1+0.5i";
};

int run_lame_curve(const LameArgs& a) {
  need_json(a.c, "lame-curve");
  const LatticeContext ctx = make_context(cli::parse_tau(a.c.tau));
  const Complex B = cli::parse_complex(a.B);
  json j{{"command", "lame-curve"},
         {"tau", cli::to_json(ctx.tau)},
         {"n", a.n},
         {"B", cli::to_json(B)},
         {"l_n", cli::to_json(lame_ln(a.n, B, ctx))}};
  json sk = json::array();
  for (const Complex& s : lame_sk(a.n, B, ctx)) sk.push_back(cli::to_json(s));
  j["s"] = sk;
  try {
    const XnPoint p = point_on_Xn(a.n, B, ctx);
    json pts = json::array(), xs = json::array(), ys = json::array();
    std::vector<Complex> zs;
    for (int i = 0; i < p.n; ++i) {
      pts.push_back(cli::to_json(p.a[i]));
      xs.push_back(cli::to_json(p.x[i]));
      ys.push_back(cli::to_json(p.y[i]));
      zs.push_back(p.a[i].z);
    }
    j["point"] = {{"a", pts}, {"x", xs}, {"y", ys}};
    if (a.n >= 2) {
      Complex sigma{0.0, 0.0};
      for (const Complex& z : zs) sigma += z;
      const Complex zn = zn_value(zs, ctx);
      j["z_n"] = cli::to_json(zn);
      if (a.n <= 4) {
        const WnValue w = Wn_eval_scaled(a.n, zn, sigma, ctx);
        j["W_n"] = cli::to_json(w.value);
        j["W_n_scale"] = w.scale;
      }
    }
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kRamifiedPoint) throw;
    j["point"] = nullptr;
    j["ramified"] = true;
  }
  emit_json(a.c, j);
  return kExitPass;
}

// --- premodular -------------------------------------------------------------

struct PremodularArgs {
  Common c;
  int n = 2;
  double r = 1.0 / 3.0, s = 1.0 / 3.0;
};

int run_premodular(const PremodularArgs& a) {
  need_json(a.c, "premodular");
  const LatticeContext ctx = make_context(cli::parse_tau(a.c.tau));
  emit_json(a.c, {{"command", "premodular"},
                  {"tau", cli::to_json(ctx.tau)},
                  {"n", a.n},
                  {"r", a.r},
                  {"s", a.s},
                  {"Z_n", cli::to_json(Zn_premodular(a.n, a.r, a.s, ctx))}});
  return kExitPass;
}

// --- type2 ------------------------------------------------------------------

struct Type2Args {
  Common c;
  int n = 1;
  int grid = 64;
};

int run_type2(const Type2Args& a) {
  const LatticeContext ctx = make_context(cli::parse_tau(a.c.tau));
  const std::vector<Type2Solution> sols = find_type2(a.n, ctx, a.grid);
  if (a.c.format == "csv") {
    std::string out = "sigma_r,sigma_s,re_B,im_B,re_z,im_z,grad_residual\n";
    for (const Type2Solution& s : sols) {
      out += num(s.sigma.r) + "," + num(s.sigma.s) + "," + num(s.a.B.real()) + "," +
             num(s.a.B.imag()) + "," + num(s.z.real()) + "," + num(s.z.imag()) + "," +
             num(s.grad_residual) + "\n";
    }
    emit(a.c, out);
    return kExitPass;
  }
  json arr = json::array();
  for (const Type2Solution& s : sols) {
    json pts = json::array();
    for (const TorusPoint& p : s.a.a) pts.push_back(cli::to_json(p));
    arr.push_back({{"sigma", cli::to_json(s.sigma)},
                   {"B", cli::to_json(s.a.B)},
                   {"a", pts},
                   {"z", cli::to_json(s.z)},
                   {"grad_residual", s.grad_residual}});
  }
  emit_json(a.c, {{"command", "type2"}, {"tau", cli::to_json(ctx.tau)}, {"n", a.n},
                  {"solutions", arr}});
  return kExitPass;
}

// --- solve ------------------------------------------------------------------

struct SolveArgs {
  Common c;
  std::string divisor;
  bool check_monodromy = false;
  bool symmetric = false;
  int max_starts = 4000;
};

json monodromy_json(const SourceDivisor& L, const LameParams& p, const LatticeContext& ctx,
                    std::optional<Complex> z0) {
  const MonodromyPair mp = monodromy_pair(L, p, ctx, z0);
  json j{{"params", cli::to_json(p)},
         {"base", cli::to_json(mp.base)},
         {"S1", cli::to_json(mp.S1)},
         {"S2", cli::to_json(mp.S2)},
         {"commutator_defect", mp.commutator_defect},
         {"wronskian_drift", mp.residual}};
  try {
    const Projective cls = classify_projective(mp);
    j["classification"] = projective_name(cls);
    j["unitarizable"] = cls == Projective::kAbelianDiagonal ? json(unitarizable(mp)) : json(nullptr);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kInconsistent) throw;
    j["classification"] = "Inconsistent";
    j["unitarizable"] = nullptr;
  }
  return j;
}

int run_solve(const SolveArgs& a) {
  const LatticeContext ctx = make_context(cli::parse_tau(a.c.tau));
  const SourceDivisor L = cli::parse_divisor(a.divisor, ctx);
  const GLameSystem sys = build_system(L, ctx);
  SolveConfig cfg;
  cfg.seed = a.c.seed;
  cfg.max_starts = a.max_starts;
  const SolveResult res = a.symmetric ? symmetric_reduce(sys, ctx, cfg) : solve_system(sys, ctx, cfg);
  const int code = (res.expected >= 0 && !res.complete) ? kExitIncomplete : kExitPass;

  if (a.c.format == "csv") {
    std::string out = "index,re_B,im_B";
    for (int i = 0; i < L.size(); ++i) {
      out += ",re_A" + std::to_string(i + 1) + ",im_A" + std::to_string(i + 1);
    }
    out += ",residual\n";
    for (size_t k = 0; k < res.solutions.size(); ++k) {
      const LameParams& p = res.solutions[k];
      out += std::to_string(k) + "," + num(p.B.real()) + "," + num(p.B.imag());
      for (const Complex& x : p.A) out += "," + num(x.real()) + "," + num(x.imag());
      out += "," + num(res.residuals[k]) + "\n";
    }
    emit(a.c, out);
    return code;
  }
  json sols = json::array();
  for (size_t k = 0; k < res.solutions.size(); ++k) {
    json s = cli::to_json(res.solutions[k]);
    s["residual"] = res.residuals[k];
    if (a.check_monodromy) {
      s["monodromy"] = monodromy_json(L, res.solutions[k], ctx, std::nullopt);
    }
    sols.push_back(s);
  }
  json j{{"command", "solve"},
         {"tau", cli::to_json(ctx.tau)},
         {"total_weight", L.total_weight()},
         {"expected", res.expected >= 0 ? json(res.expected) : json(nullptr)},
         {"found", res.solutions.size()},
         {"complete", res.complete},
         {"starts_used", res.starts_used},
         {"solutions", sols}};
  emit_json(a.c, j);
  if (code == kExitIncomplete) {
    std::cerr << "PartialEnumeration: found " << res.solutions.size() << " of "
              << res.expected << "\n";
  }
  return code;
}

// --- monodromy --------------------------------------------------------------

struct MonodromyArgs {
  Common c;
  std::string divisor;
  std::string A;
  std::string B = "0";
  std::string z0;
  bool local = false;
};

int run_monodromy(const MonodromyArgs& a) {
  need_json(a.c, "monodromy");
  const LatticeContext ctx = make_context(cli::parse_tau(a.c.tau));
  const SourceDivisor L = cli::parse_divisor(a.divisor, ctx);
  LameParams p;
  p.A = a.A.empty() ? std::vector<Complex>(L.size(), Complex{0.0, 0.0})
                    : cli::parse_complex_list(a.A);
  if (static_cast<int>(p.A.size()) != L.size()) {
    throw Error(ErrorCode::kInvalidArgument, "need one A per point");
  }
  p.B = cli::parse_complex(a.B);
  std::optional<Complex> z0;
  if (!a.z0.empty()) z0 = cli::parse_complex(a.z0);
  json j = monodromy_json(L, p, ctx, z0);
  j["command"] = "monodromy";
  j["tau"] = cli::to_json(ctx.tau);
  if (a.local) {
    json loc = json::array();
    for (int i = 0; i < L.size(); ++i) loc.push_back(cli::to_json(local_monodromy(i, L, p, ctx)));
    j["local"] = loc;
  }
  emit_json(a.c, j);
  return kExitPass;
}

// --- identities -------------------------------------------------------------

struct IdentityArgs {
  Common c;
  int samples = 20;
  int germ_k = 0;
  int n = 2;
};

SourceDivisor random_even_divisor(int N, const LatticeContext& ctx, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (;;) {
    SourceDivisor L;
    for (int k = 0; k < N; ++k) {
      L.points.push_back(make_point(ctx, u(rng), u(rng)));
      L.weights.push_back(1);
    }
    bool ok = true;
    for (int i = 0; i < N && ok; ++i) {
      for (int j = i + 1; j < N && ok; ++j) {
        ok = lattice_distance(L.points[i].z - L.points[j].z, ctx) > 0.05;
      }
    }
    if (ok) return L;
  }
}

int run_identities(const IdentityArgs& a) {
  if (a.samples < 1) throw Error(ErrorCode::kInvalidArgument, "--samples must be >= 1");
  const LatticeContext ctx = make_context(cli::parse_tau(a.c.tau));
  std::mt19937_64 rng(a.c.seed);

  if (a.germ_k > 0) {
    // Constraint table sum eps_i a_{i,k} for k = 1..K at N = 2n random points.
    if (a.n < 1) throw Error(ErrorCode::kInvalidArgument, "--n must be >= 1");
    std::string out = "sample,k,re_value,im_value,scale\n";
    for (int t = 0; t < a.samples; ++t) {
      const SourceDivisor L = random_even_divisor(2 * a.n, ctx, rng);
      const std::vector<int> eps = alternating_signs(2 * a.n);
      const GermConstraints g = germ_constraints(L, ctx, germ_series(L, ctx, eps, a.germ_k));
      for (int k = 1; k <= a.germ_k; ++k) {
        out += std::to_string(t) + "," + std::to_string(k) + "," + num(g.values[k].real()) +
               "," + num(g.values[k].imag()) + "," + num(g.scales[k]) + "\n";
      }
    }
    emit(a.c, out);
    return kExitPass;
  }
  need_json(a.c, "identities");

  struct Check {
    std::string name;
    double residual;
    double tol;
  };
  std::vector<Check> checks;
  const IdentityReport rep = check_identities(ctx, a.samples, a.c.seed);
  checks.push_back({"addition_law", rep.addition_law, 1e-9});
  checks.push_back({"z3_cubic", rep.cubic, 1e-9});
  checks.push_back({"zeta_sum_square", rep.zeta_sum, 1e-9});

  double l4 = 0.0;
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int t = 0; t < a.samples; ++t) {
    const SourceDivisor L = random_even_divisor(4, ctx, rng);
    std::vector<Complex> p;
    for (const TorusPoint& q : L.points) p.push_back(q.z);
    const L4Identity id = verify_l4_identity(p, ctx);
    l4 = std::max(l4, std::abs(id.lhs - id.rhs) / id.scale);
  }
  checks.push_back({"l4_identity", l4, 1e-9});

  json k4 = json::array();
  for (int n : {2, 3, 4}) {
    double worst = 0.0;
    double k4_worst = 0.0;
    for (int t = 0; t < a.samples; ++t) {
      const SourceDivisor L = random_even_divisor(2 * n, ctx, rng);
      const std::vector<int> eps = alternating_signs(2 * n);
      const GermConstraints g = germ_constraints(L, ctx, germ_series(L, ctx, eps, 4));
      worst = std::max(worst, std::abs(g.values[3]) / std::max(g.scales[3], 1e-300));
      const double ks = std::max({std::abs(g.k4_lhs), std::abs(g.k4_rhs), 1e-300});
      k4_worst = std::max(k4_worst, std::abs(g.k4_lhs - g.k4_rhs) / ks);
    }
    checks.push_back({"germ_k3_n" + std::to_string(n), worst, 1e-8});
    k4.push_back({{"n", n}, {"max_relative_gap", k4_worst}});
  }

  json arr = json::array();
  const Check* worst = nullptr;
  bool pass = true;
  for (const Check& c : checks) {
    const bool ok = c.residual < c.tol;
    arr.push_back({{"name", c.name}, {"residual", c.residual}, {"tol", c.tol}, {"pass", ok}});
    if (!ok && (!worst || c.residual / c.tol > worst->residual / worst->tol)) worst = &c;
    pass = pass && ok;
  }
  json j{{"command", "identities"},
         {"tau", cli::to_json(ctx.tau)},
         {"samples", a.samples},
         {"checks", arr},
         {"k4_constraint_report", k4},
         {"pass", pass}};
  emit_json(a.c, j);
  if (!pass) {
    std::cerr << "FAIL " << worst->name << " residual " << worst->residual << " tol "
              << worst->tol << "\n";
    return kExitFail;
  }
  return kExitPass;
}

// --- germ -------------------------------------------------------------------

struct GermArgs {
  Common c;
  std::string divisor;
  std::string signs;
  int K = 6;
};

int run_germ(const GermArgs& a) {
  const LatticeContext ctx = make_context(cli::parse_tau(a.c.tau));
  const SourceDivisor L = cli::parse_divisor(a.divisor, ctx);
  std::vector<int> eps;
  if (a.signs.empty()) {
    eps = alternating_signs(L.size());
  } else {
    for (char ch : a.signs) {
      if (ch == '+') eps.push_back(1);
      else if (ch == '-') eps.push_back(-1);
      else throw Error(ErrorCode::kInvalidArgument, "signs are a string of + and -");
    }
  }
  if (a.K < 1) throw Error(ErrorCode::kInvalidArgument, "--K must be >= 1");
  const GermSeries g = germ_series(L, ctx, eps, a.K);
  const GermConstraints c = germ_constraints(L, ctx, g);
  if (a.c.format == "csv") {
    std::string out = "k,re_value,im_value,scale\n";
    for (int k = 1; k <= a.K; ++k) {
      out += std::to_string(k) + "," + num(c.values[k].real()) + "," +
             num(c.values[k].imag()) + "," + num(c.scales[k]) + "\n";
    }
    emit(a.c, out);
    return kExitPass;
  }
  json coeffs = json::array();
  for (const auto& row : g.coeffs) {
    json r = json::array();
    for (int k = 1; k <= a.K; ++k) r.push_back(cli::to_json(row[k]));
    coeffs.push_back(r);
  }
  json vals = json::array();
  for (int k = 1; k <= a.K; ++k) {
    vals.push_back({{"k", k}, {"value", cli::to_json(c.values[k])}, {"scale", c.scales[k]}});
  }
  emit_json(a.c, {{"command", "germ"},
                  {"tau", cli::to_json(ctx.tau)},
                  {"signs", eps},
                  {"coefficients", coeffs},
                  {"constraints", vals},
                  {"k4_lhs", cli::to_json(c.k4_lhs)},
                  {"k4_rhs", cli::to_json(c.k4_rhs)}});
  return kExitPass;
}

int exit_code_for(const Error& e) {
  switch (e.code()) {
    case ErrorCode::kInvalidArgument:
    case ErrorCode::kDistinctnessViolation:
    case ErrorCode::kEvenTotalWeight:
    case ErrorCode::kHalfPeriodInput:
      return kExitUsage;
    case ErrorCode::kPartialEnumeration:
      return kExitIncomplete;
    default:
      return kExitFail;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"lamelab: Lame equations, torus Green functions and monodromy"};
  app.require_subcommand(1);

  CriticalArgs crit;
  auto* c_crit = app.add_subcommand("critical", "critical points of the Green function");
  add_common(c_crit, crit.c);
  c_crit->add_option("--grid", crit.grid, "scan grid size")->check(CLI::Range(8, 1024));

  HeckeArgs hecke;
  auto* c_hecke = app.add_subcommand("hecke", "Hecke function Z_{r,s}(tau)");
  add_common(c_hecke, hecke.c);
  c_hecke->add_option("--r", hecke.r);
  c_hecke->add_option("--s", hecke.s);
  c_hecke->add_flag("--winding", hecke.winding, "count tau-zeros in the Gamma_0(2) domain");

  LameArgs lame;
  auto* c_lame = app.add_subcommand("lame-curve", "Lame curve data at B");
  add_common(c_lame, lame.c);
  c_lame->add_option("--n", lame.n)->check(CLI::Range(1, 12));
  c_lame->add_option("--B", lame.B, "accessory parameter a+bi");

  PremodularArgs pre;
  auto* c_pre = app.add_subcommand("premodular", "pre-modular form Z_n at a torsion point");
  add_common(c_pre, pre.c);
  c_pre->add_option("--n", pre.n)->check(CLI::Range(1, 4));
  c_pre->add_option("--r", pre.r);
  c_pre->add_option("--s", pre.s);

  Type2Args t2;
  auto* c_t2 = app.add_subcommand("type2", "type II solutions (zeros of Z_n)");
  add_common(c_t2, t2.c);
  c_t2->add_option("--n", t2.n)->check(CLI::Range(1, 2));
  c_t2->add_option("--grid", t2.grid)->check(CLI::Range(8, 1024));

  SolveArgs solve;
  auto* c_solve = app.add_subcommand("solve", "log-free parameters of a generalized Lame equation");
  add_common(c_solve, solve.c);
  c_solve->add_option("--divisor", solve.divisor, "p=r,s:w;...")->required();
  c_solve->add_flag("--check-monodromy", solve.check_monodromy);
  c_solve->add_flag("--symmetric", solve.symmetric, "use the p_{n+i} = -p_i reduction");
  c_solve->add_option("--max-starts", solve.max_starts)->check(CLI::Range(1, 10000000));

  MonodromyArgs mono;
  auto* c_mono = app.add_subcommand("monodromy", "monodromy pair S1, S2");
  add_common(c_mono, mono.c);
  c_mono->add_option("--divisor", mono.divisor, "p=r,s:w;...")->required();
  c_mono->add_option("--A", mono.A, "comma separated A_i (default 0)");
  c_mono->add_option("--B", mono.B);
  c_mono->add_option("--z0", mono.z0, "base point (default: automatic)");
  c_mono->add_flag("--local", mono.local, "also report local monodromy at each point");

  IdentityArgs ids;
  auto* c_ids = app.add_subcommand("identities", "elliptic identity battery");
  add_common(c_ids, ids.c);
  ids.c.tau = "0.2+1.3i";
  c_ids->add_option("--samples", ids.samples);
  c_ids->add_option("--germ-k", ids.germ_k, "emit the germ constraint table up to this order");
  c_ids->add_option("--n", ids.n, "half the number of points for --germ-k");

  GermArgs germ;
  auto* c_germ = app.add_subcommand("germ", "germ series at infinity for even primitive divisors");
  add_common(c_germ, germ.c);
  c_germ->add_option("--divisor", germ.divisor, "p=r,s;...")->required();
  c_germ->add_option("--signs", germ.signs, "e.g. -+-+ (default alternating)");
  c_germ->add_option("--K", germ.K);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitPass : kExitUsage;
  }

  try {
    if (*c_crit) return run_critical(crit);
    if (*c_hecke) return run_hecke(hecke);
    if (*c_lame) return run_lame_curve(lame);
    if (*c_pre) return run_premodular(pre);
    if (*c_t2) return run_type2(t2);
    if (*c_solve) return run_solve(solve);
    if (*c_mono) return run_monodromy(mono);
    if (*c_ids) return run_identities(ids);
    if (*c_germ) return run_germ(germ);
  } catch (const Error& e) {
    std::cerr << e.what() << "\n";
    return exit_code_for(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFail;
  }
  return kExitUsage;
}
