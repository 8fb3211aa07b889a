#include "qma/poly.hpp"

#include <cmath>

namespace qma {

namespace {
constexpr double kDropTol = 1e-300;  // exact-zero cleanup only
}

Poly Poly::constant(int nvars, Complex c) {
  Poly p(nvars);
  p.add_term(0, c);
  return p;
}

Poly Poly::variable(int nvars, int axis) {
  Poly p(nvars);
  p.add_term(std::uint64_t(1) << (8 * axis), 1.0);
  return p;
}

void Poly::add_term(std::uint64_t key, Complex c) {
  if (std::abs(c) <= kDropTol) return;
  auto [it, inserted] = terms_.emplace(key, c);
  if (!inserted) {
    it->second += c;
    if (std::abs(it->second) <= kDropTol) terms_.erase(it);
  }
}

Poly Poly::operator+(const Poly& o) const {
  Poly r = *this;
  for (const auto& [k, c] : o.terms_) r.add_term(k, c);
  return r;
}

Poly Poly::operator-(const Poly& o) const {
  Poly r = *this;
  for (const auto& [k, c] : o.terms_) r.add_term(k, -c);
  return r;
}

Poly Poly::operator*(const Poly& o) const {
  Poly r(nvars_);
  for (const auto& [ka, ca] : terms_)
    for (const auto& [kb, cb] : o.terms_) r.add_term(ka + kb, ca * cb);
  return r;
}

Poly Poly::operator*(Complex s) const {
  Poly r(nvars_);
  for (const auto& [k, c] : terms_) r.add_term(k, c * s);
  return r;
}

Poly& Poly::operator+=(const Poly& o) {
  for (const auto& [k, c] : o.terms_) add_term(k, c);
  return *this;
}

Poly Poly::diff(int axis) const {
  Poly r(nvars_);
  for (const auto& [k, c] : terms_) {
    const int e = exponent(k, axis);
    if (e == 0) continue;
    r.add_term(k - (std::uint64_t(1) << (8 * axis)), c * double(e));
  }
  return r;
}

Poly Poly::conj() const {
  Poly r(nvars_);
  for (const auto& [k, c] : terms_) r.add_term(k, std::conj(c));
  return r;
}

Complex Poly::eval(const std::vector<double>& x) const {
  Complex s{0.0, 0.0};
  for (const auto& [k, c] : terms_) {
    double m = 1.0;
    for (int a = 0; a < nvars_; ++a) {
      const int e = exponent(k, a);
      for (int i = 0; i < e; ++i) m *= x[a];
    }
    s += c * m;
  }
  return s;
}

double Poly::max_abs_coeff() const {
  double m = 0.0;
  for (const auto& [k, c] : terms_) m = std::max(m, std::abs(c));
  return m;
}

int Poly::total_degree() const {
  int d = 0;
  for (const auto& [k, c] : terms_) {
    int td = 0;
    for (int a = 0; a < nvars_; ++a) td += exponent(k, a);
    d = std::max(d, td);
  }
  return d;
}

}  // namespace qma
