#pragma once

#include <complex>
#include <cstdint>
#include <map>
#include <vector>

namespace qma {

using Complex = std::complex<double>;

// Multivariate polynomial in up to 8 real variables with complex
// coefficients. Exponents pack one byte per variable into the key, so term
// order (and every iteration) is deterministic.
class Poly {
 public:
  Poly() = default;
  explicit Poly(int nvars) : nvars_(nvars) {}

  static Poly constant(int nvars, Complex c);
  static Poly variable(int nvars, int axis);

  int nvars() const { return nvars_; }
  bool empty() const { return terms_.empty(); }
  const std::map<std::uint64_t, Complex>& terms() const { return terms_; }

  void add_term(std::uint64_t key, Complex c);

  Poly operator+(const Poly& o) const;
  Poly operator-(const Poly& o) const;
  Poly operator*(const Poly& o) const;
  Poly operator*(Complex s) const;
  Poly& operator+=(const Poly& o);

  Poly diff(int axis) const;
  Poly conj() const;
  Complex eval(const std::vector<double>& x) const;
  double max_abs_coeff() const;
  int total_degree() const;

  static int exponent(std::uint64_t key, int axis) {
    return int((key >> (8 * axis)) & 0xffu);
  }

 private:
  int nvars_ = 0;
  std::map<std::uint64_t, Complex> terms_;
};

}  // namespace qma
