#pragma once

#include <cstdint>
#include <map>
#include <utility>
#include <vector>

#include "qma/hyperhermitian.hpp"
#include "qma/poly.hpp"

namespace qma {

// Complex frame adapted to I0 on R^{4n}: holomorphic covectors
//   zeta^r     = dx^r_0 + i dx^r_1      (r = 0..n-1)
//   zeta^{n+r} = dx^r_2 + i dx^r_3
// followed by their conjugates. Frame index b < 2n is (1,0), b >= 2n is
// (0,1). Built and checked once per n.
struct FrameTables {
  int n = 0;
  int axes = 0;  // 4n
  int nz = 0;    // 2n holomorphic covectors

  // frame covector components over the real covector basis
  std::vector<std::vector<Complex>> frame;
  // dx^a expanded over the frame
  std::vector<std::vector<std::pair<int, Complex>>> dx_in_frame;
  // J action on frame covectors: J(e_b) = sum w * e_{b'}
  std::vector<std::vector<std::pair<int, Complex>>> jrow;
  StructureMatrices structure;

  static const FrameTables& get(int n);
};

// Differential form with polynomial coefficients, stored per wedge of frame
// covectors (bitmask over the 4n frame indices). Bidegree is read off the
// mask, so (p,q)-decomposition is a filter.
class PolyForm {
 public:
  PolyForm() = default;
  explicit PolyForm(int n) : n_(n) {}

  static PolyForm function(int n, const Poly& u);
  static PolyForm frame_covector(int n, int frame_index);

  int n() const { return n_; }
  int axes() const { return 4 * n_; }
  const std::map<std::uint32_t, Poly>& terms() const { return terms_; }
  bool empty() const { return terms_.empty(); }

  void add_term(std::uint32_t mask, const Poly& coeff);

  PolyForm operator+(const PolyForm& o) const;
  PolyForm operator-(const PolyForm& o) const;
  PolyForm operator*(Complex s) const;

  PolyForm wedge(const PolyForm& o) const;
  PolyForm conj_form() const;
  double max_abs_coeff() const;

  // (p,q) component w.r.t. I0
  PolyForm bidegree(int p, int q) const;

  std::map<std::uint32_t, Complex> eval_at(const std::vector<double>& x) const;

 private:
  int n_ = 0;
  std::map<std::uint32_t, Poly> terms_;
};

PolyForm wedge_pow(const PolyForm& f, int k);

// Exterior derivative split into (del, delbar) by bidegree.
std::pair<PolyForm, PolyForm> d_split(const PolyForm& f);

// Pullback by J0 in every covector slot; maps (p,q) to (q,p).
PolyForm J_act(const PolyForm& f);

// J^{-1} = (-1)^deg J termwise.
PolyForm J_inv_act(const PolyForm& f);

// del_J = J^{-1} delbar J.
PolyForm partial_J(const PolyForm& f);

// The (2,0)-form del del_J u.
PolyForm dd_J(int n, const Poly& u);

// Coefficient of the full holomorphic top wedge zeta^1 ^ ... ^ zeta^{2n}.
Complex top_coeff(const PolyForm& f, const std::vector<double>& x);

// Hyperhermitian matrix of the metric induced by a q-real (2,0)-form via
// Omega(X,Y) = 2 g(JX, Y); throws NotQReal if J(Omega) != conj(Omega) at x.
HyperhermitianMatrix metric_from_form(const PolyForm& omega,
                                      const std::vector<double>& x);

// dd_J of the quadratic with Hess_H u = H (real Hessian iota(H)/4).
PolyForm hessian_form(const HyperhermitianMatrix& h);

// Constant-coefficient (2,0)-form whose metric_from_form returns G:
// hessian_form(G / kappa).
PolyForm matrix_to_form(const HyperhermitianMatrix& g, double kappa);

}  // namespace qma
