#pragma once

// Reference values computed by routes that share no code with the library:
// row-summed cosecant/cotangent lattice sums and Lambert series.

#include <cmath>
#include <complex>
#include <numbers>

namespace oracle {

using C = std::complex<double>;
constexpr double kPi = std::numbers::pi;

inline C csc2(C w) {
  const C s = std::sin(kPi * w);
  return kPi * kPi / (s * s);
}

// wp(z) = sum over rows n of pi^2 / sin^2(pi (z + n tau)), regularized.
inline C wp(C z, C tau, int rows = 60) {
  C sum = csc2(z) - kPi * kPi / 3.0;
  for (int n = 1; n <= rows; ++n) {
    const C t = static_cast<double>(n) * tau;
    sum += csc2(z + t) + csc2(z - t) - 2.0 * csc2(t);
  }
  return sum;
}

// d/dz of pi^2 csc^2(pi w) = -2 pi^3 cos / sin^3.
inline C dcsc2(C w) {
  const C s = std::sin(kPi * w);
  return -2.0 * kPi * kPi * kPi * std::cos(kPi * w) / (s * s * s);
}

inline C dwp(C z, C tau, int rows = 60) {
  C sum = dcsc2(z);
  for (int n = 1; n <= rows; ++n) {
    const C t = static_cast<double>(n) * tau;
    sum += dcsc2(z + t) + dcsc2(z - t);
  }
  return sum;
}

// eta1 = G2(tau) = (pi^2 / 3) E2(tau), E2 = 1 - 24 sum sigma_1(n) Q^n.
inline C eta1(C tau, int terms = 400) {
  const C Q = std::exp(C(0.0, 2.0 * kPi) * tau);
  C s = 0.0;
  C Qn = 1.0;
  for (int n = 1; n <= terms; ++n) {
    Qn *= Q;
    double sig = 0.0;
    for (int d = 1; d <= n; ++d) {
      if (n % d == 0) sig += d;
    }
    s += sig * Qn;
  }
  return kPi * kPi / 3.0 * (1.0 - 24.0 * s);
}

inline C cot_pi(C w) { return kPi * std::cos(kPi * w) / std::sin(kPi * w); }

// zeta(z) = eta1 z + pi cot(pi z) + sum_{n != 0} [pi cot(pi(z + n tau)) - pi cot(pi n tau)].
inline C zeta(C z, C tau, int rows = 60) {
  C sum = eta1(tau) * z + cot_pi(z);
  for (int n = 1; n <= rows; ++n) {
    const C t = static_cast<double>(n) * tau;
    sum += cot_pi(z + t) + cot_pi(z - t);
  }
  return sum;
}

// g2, g3 from the half-period values e_k.
inline void invariants(C tau, C& g2, C& g3) {
  const C e1 = wp(0.5, tau), e2 = wp(tau / 2.0, tau), e3 = wp((1.0 + tau) / 2.0, tau);
  g2 = -4.0 * (e1 * e2 + e1 * e3 + e2 * e3);
  g3 = 4.0 * e1 * e2 * e3;
}

}  // namespace oracle
