#include "torus_search.hpp"

#include <cmath>
#include <numbers>

#include "internal.hpp"

namespace lamelab::detail {

namespace {

double wrap01(double x) {
  double y = x - std::floor(x);
  return y >= 1.0 ? 0.0 : y;
}

double wrap_half(double x) { return x - std::round(x); }

// Rejects points where the real Jacobian is numerically singular. On very
// tall tori f is ~1e-15 along a whole line and every point there would
// otherwise pass the residual test.
bool well_conditioned(const Jet2& j) {
  const double det = j.fr.real() * j.fs.imag() - j.fs.real() * j.fr.imag();
  const double norm2 = std::norm(j.fr) + std::norm(j.fs);
  return std::abs(det) > 1e-8 * norm2;
}

}  // namespace

double torus_distance(double r1, double s1, double r2, double s2) {
  return std::hypot(wrap_half(r1 - r2), wrap_half(s1 - s2));
}

bool torus_newton(const JetFn& fn, double& r, double& s, double fscale,
                  double max_step) {
  double last_step = 1.0;
  for (int it = 0; it < 80; ++it) {
    Jet2 j;
    try {
      j = fn(r, s);
    } catch (const Error&) {
      return false;
    }
    const double a = j.fr.real(), b = j.fs.real();
    const double c = j.fr.imag(), d = j.fs.imag();
    const double det = a * d - b * c;
    if (std::abs(j.f) <= 1e-15 * fscale) return well_conditioned(j);
    if (det == 0.0 || !std::isfinite(det)) return false;
    double dr = -(d * j.f.real() - b * j.f.imag()) / det;
    double ds = -(-c * j.f.real() + a * j.f.imag()) / det;
    const double len = std::hypot(dr, ds);
    if (!std::isfinite(len)) return false;
    if (len > max_step) {
      dr *= max_step / len;
      ds *= max_step / len;
    }
    r += dr;
    s += ds;
    last_step = std::hypot(dr, ds);
    if (last_step < 1e-15) break;
  }
  try {
    const Jet2 j = fn(r, s);
    return std::abs(j.f) <= 1e-10 * fscale && last_step < 1e-9 && well_conditioned(j);
  } catch (const Error&) {
    return false;
  }
}

std::vector<std::array<double, 2>> torus_zero_search(
    const JetFn& fn, const ZeroSearchOptions& opt) {
  const int g = opt.grid;
  const double off_r = 0.37, off_s = 0.29;
  auto node_r = [&](int i) { return (i + off_r) / g; };
  auto node_s = [&](int j) { return (j + off_s) / g; };

  std::vector<Complex> val(static_cast<size_t>(g) * g);
  std::vector<char> ok(val.size(), 0);
  parallel_for(g, [&](int i) {
    for (int j = 0; j < g; ++j) {
      const size_t k = static_cast<size_t>(i) * g + j;
      const double r = node_r(i), s = node_s(j);
      if (torus_distance(r, s, 0.0, 0.0) < opt.origin_exclusion) continue;
      try {
        val[k] = fn(r, s).f;
        ok[k] = std::isfinite(val[k].real()) && std::isfinite(val[k].imag());
      } catch (const Error&) {
      }
    }
  });
  auto idx = [&](int i, int j) {
    return static_cast<size_t>((i % g + g) % g) * g + ((j % g + g) % g);
  };

  double fscale = 0.0;
  int nvalid = 0;
  for (size_t k = 0; k < val.size(); ++k) {
    if (ok[k]) {
      fscale += std::abs(val[k]);
      ++nvalid;
    }
  }
  fscale = nvalid > 0 ? std::max(1.0, fscale / nvalid) : 1.0;

  std::vector<std::array<double, 2>> starts;
  for (int i = 0; i < g; ++i) {
    for (int j = 0; j < g; ++j) {
      const size_t c[4] = {idx(i, j), idx(i + 1, j), idx(i + 1, j + 1),
                           idx(i, j + 1)};
      bool all = true;
      for (size_t k : c) all = all && ok[k];
      if (all) {
        double turn = 0.0;
        for (int e = 0; e < 4; ++e) {
          turn += std::arg(val[c[(e + 1) % 4]] / val[c[e]]);
        }
        const long w = std::lround(turn / (2.0 * std::numbers::pi));
        if (w != 0) starts.push_back({node_r(i) + 0.5 / g, node_s(j) + 0.5 / g});
      }
      // local minimum of |f| over the 8-neighbourhood
      if (!ok[idx(i, j)]) continue;
      const double here = std::abs(val[idx(i, j)]);
      bool is_min = true;
      for (int di = -1; di <= 1 && is_min; ++di) {
        for (int dj = -1; dj <= 1; ++dj) {
          if (di == 0 && dj == 0) continue;
          const size_t k = idx(i + di, j + dj);
          if (!ok[k] || std::abs(val[k]) < here) {
            is_min = false;
            break;
          }
        }
      }
      if (is_min) starts.push_back({node_r(i), node_s(j)});
    }
  }

  std::vector<std::array<double, 2>> polished(starts.size());
  std::vector<char> good(starts.size(), 0);
  parallel_for(static_cast<int>(starts.size()), [&](int k) {
    double r = starts[k][0], s = starts[k][1];
    if (torus_newton(fn, r, s, fscale, 2.0 / g)) {
      polished[k] = {wrap01(r), wrap01(s)};
      good[k] = 1;
    }
  });

  std::vector<std::array<double, 2>> out;
  for (size_t k = 0; k < starts.size(); ++k) {
    if (!good[k]) continue;
    bool dup = false;
    for (const auto& p : out) {
      if (torus_distance(p[0], p[1], polished[k][0], polished[k][1]) <
          opt.dedup) {
        dup = true;
        break;
      }
    }
    if (!dup) out.push_back(polished[k]);
  }
  return out;
}

}  // namespace lamelab::detail
