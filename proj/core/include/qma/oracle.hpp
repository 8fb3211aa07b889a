#pragma once

#include <array>
#include <map>
#include <string>
#include <vector>

#include "qma/forms.hpp"
#include "qma/hyperhermitian.hpp"
#include "qma/poly.hpp"
#include "qma/rng.hpp"

namespace qma {

struct CalibrationReport {
  double kappa = 0.0;
  double c_grad = 0.0;
  std::map<std::string, double> residuals;
};

// Computes the universal constant kappa (two independent routes) and the
// gradient-norm constant c_grad; throws CalibrationMismatch if the kappa
// routes disagree beyond 1e-9. Deterministic: fixed internal seed.
CalibrationReport calibrate_kappa();

struct FormuleResiduals {
  double wedge_ratio = 0.0;   // |ratio - det(G + kappa H)/det(G)|
  double linearized = 0.0;    // |n (ddJ phi ^ Omega^{n-1})/Omega^n - kappa Re tr(G^{-1}H)|
};

FormuleResiduals verify_formule(const HyperhermitianMatrix& g,
                                const HyperhermitianMatrix& h, double kappa);

// Residual of alpha ^ J(conj beta) ^ Omega^{n-1} / Omega^n = -g(alpha, conj beta)/(2n);
// alpha and beta are given by their 2n holomorphic frame components.
double verify_lucio(const HyperhermitianMatrix& g,
                    const std::vector<Complex>& alpha,
                    const std::vector<Complex>& beta, double kappa);

// Hyperhermitian matrix with polynomial entries (degree <= 2); enforces
// U_sr = conj(U_rs) from the upper triangle.
class HyperhermitianPolyMatrix {
 public:
  HyperhermitianPolyMatrix(int n, int nvars);

  int n() const { return n_; }
  int nvars() const { return nvars_; }

  // sets entry (r,s), r <= s, and mirrors the conjugate; diagonal entries
  // must have vanishing imaginary parts
  void set_entry(int r, int s, const std::array<Poly, 4>& q);
  const std::array<Poly, 4>& entry(int r, int s) const {
    return e_[std::size_t(r) * n_ + s];
  }

  HyperhermitianMatrix evaluate(const std::vector<double>& x) const;

 private:
  int n_ = 0;
  int nvars_ = 0;
  std::vector<std::array<Poly, 4>> e_;
};

// Residual of the log-determinant Laplacian identity at a point where U is
// diagonal and positive: exact polynomial derivatives on the left, the
// summed formula on the right.
double verify_delta_logdet(const HyperhermitianPolyMatrix& u,
                           const std::vector<double>& p, double kappa);

// Same identity with the left side from Richardson-extrapolated central
// differences through moore_det (steps 1e-2, 5e-3, 2.5e-3).
double verify_delta_logdet_fd(const HyperhermitianPolyMatrix& u,
                              const std::vector<double>& p, double kappa);

// Random inputs for the verification suites.
HyperhermitianMatrix random_hyperhermitian(Rng& rng, int n, double scale);
HyperhermitianMatrix random_posdef_hyperhermitian(Rng& rng, int n);
HyperhermitianPolyMatrix random_jet(Rng& rng, int n, bool quadratic);

}  // namespace qma
