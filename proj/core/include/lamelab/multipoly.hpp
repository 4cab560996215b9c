#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <span>
#include <stdexcept>
#include <vector>

namespace lamelab {

// Sparse multivariate polynomial; zero coefficients are never stored.
template <class C>
class MultiPoly {
 public:
  using Exponent = std::vector<int>;
  using TermMap = std::map<Exponent, C>;

  MultiPoly() = default;
  explicit MultiPoly(int nvars) : nvars_(nvars) {}

  static MultiPoly constant(int nvars, const C& c) {
    MultiPoly p(nvars);
    p.add_term(Exponent(nvars, 0), c);
    return p;
  }

  static MultiPoly variable(int nvars, int var, const C& c = C(1)) {
    MultiPoly p(nvars);
    Exponent e(nvars, 0);
    e.at(var) = 1;
    p.add_term(e, c);
    return p;
  }

  int nvars() const { return nvars_; }
  const TermMap& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  void add_term(const Exponent& e, const C& c) {
    if (static_cast<int>(e.size()) != nvars_) {
      throw std::invalid_argument("exponent length mismatch");
    }
    auto it = terms_.find(e);
    if (it == terms_.end()) {
      if (!(c == C(0))) terms_.emplace(e, c);
      return;
    }
    it->second += c;
    if (it->second == C(0)) terms_.erase(it);
  }

  MultiPoly& operator+=(const MultiPoly& o) {
    check(o);
    for (const auto& [e, c] : o.terms_) add_term(e, c);
    return *this;
  }
  MultiPoly& operator-=(const MultiPoly& o) {
    check(o);
    for (const auto& [e, c] : o.terms_) add_term(e, -c);
    return *this;
  }
  MultiPoly& operator*=(const C& s) {
    if (s == C(0)) {
      terms_.clear();
      return *this;
    }
    for (auto& [e, c] : terms_) c *= s;
    return *this;
  }

  friend MultiPoly operator+(MultiPoly a, const MultiPoly& b) { return a += b; }
  friend MultiPoly operator-(MultiPoly a, const MultiPoly& b) { return a -= b; }
  friend MultiPoly operator*(MultiPoly a, const C& s) { return a *= s; }
  friend MultiPoly operator*(const C& s, MultiPoly a) { return a *= s; }
  friend MultiPoly operator-(MultiPoly a) { return a *= C(-1); }

  friend MultiPoly operator*(const MultiPoly& a, const MultiPoly& b) {
    a.check(b);
    MultiPoly out(a.nvars_);
    Exponent e(a.nvars_);
    for (const auto& [ea, ca] : a.terms_) {
      for (const auto& [eb, cb] : b.terms_) {
        for (int i = 0; i < a.nvars_; ++i) e[i] = ea[i] + eb[i];
        out.add_term(e, ca * cb);
      }
    }
    return out;
  }

  friend bool operator==(const MultiPoly& a, const MultiPoly& b) {
    return a.nvars_ == b.nvars_ && a.terms_ == b.terms_;
  }

  MultiPoly derivative(int var) const {
    MultiPoly out(nvars_);
    for (const auto& [e, c] : terms_) {
      if (e[var] == 0) continue;
      Exponent d = e;
      d[var] -= 1;
      out.add_term(d, c * C(e[var]));
    }
    return out;
  }

  int degree() const {
    int d = -1;
    for (const auto& [e, c] : terms_) {
      int s = 0;
      for (int x : e) s += x;
      d = std::max(d, s);
    }
    return d;
  }

  int weighted_degree(std::span<const int> weights) const {
    int d = -1;
    for (const auto& [e, c] : terms_) d = std::max(d, weight_of(e, weights));
    return d;
  }

  static int weight_of(const Exponent& e, std::span<const int> weights) {
    int s = 0;
    for (size_t i = 0; i < e.size(); ++i) s += e[i] * weights[i];
    return s;
  }

  // Terms of weighted degree exactly w.
  MultiPoly homogeneous_part(std::span<const int> weights, int w) const {
    MultiPoly out(nvars_);
    for (const auto& [e, c] : terms_) {
      if (weight_of(e, weights) == w) out.add_term(e, c);
    }
    return out;
  }

  template <class V>
  V eval(std::span<const V> x) const {
    V sum(0);
    for (const auto& [e, c] : terms_) {
      V m = V(c);
      for (int i = 0; i < nvars_; ++i) {
        for (int k = 0; k < e[i]; ++k) m *= x[i];
      }
      sum += m;
    }
    return sum;
  }

  // Sum of |c x^e|, the natural scale for a relative residual.
  template <class V>
  double eval_abs(std::span<const V> x) const {
    double sum = 0.0;
    for (const auto& [e, c] : terms_) {
      double m = std::abs(V(c));
      for (int i = 0; i < nvars_; ++i) m *= std::pow(std::abs(x[i]), e[i]);
      sum += m;
    }
    return sum;
  }

  // Polynomial with variable `var` dropped (its exponents are discarded and
  // colliding terms summed).
  MultiPoly drop_variable(int var) const {
    MultiPoly out(nvars_ - 1);
    for (const auto& [e, c] : terms_) {
      Exponent d;
      d.reserve(nvars_ - 1);
      for (int i = 0; i < nvars_; ++i) {
        if (i != var) d.push_back(e[i]);
      }
      out.add_term(d, c);
    }
    return out;
  }

  template <class D, class F>
  MultiPoly<D> map_coefficients(F&& f) const {
    MultiPoly<D> out(nvars_);
    for (const auto& [e, c] : terms_) out.add_term(e, f(c));
    return out;
  }

 private:
  void check(const MultiPoly& o) const {
    if (o.nvars_ != nvars_) throw std::invalid_argument("variable count mismatch");
  }

  int nvars_ = 0;
  TermMap terms_;
};

}  // namespace lamelab
