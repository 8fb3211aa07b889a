#include "qma/hyperhermitian.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "qma/errors.hpp"

namespace qma {

QuatMatrix QuatMatrix::identity(int n) {
  QuatMatrix m(n);
  for (int r = 0; r < n; ++r) m(r, r) = Quaternion::real(1.0);
  return m;
}

QuatMatrix QuatMatrix::conj_transpose() const {
  QuatMatrix t(n_);
  for (int r = 0; r < n_; ++r)
    for (int s = 0; s < n_; ++s) t(s, r) = (*this)(r, s).conj();
  return t;
}

QuatMatrix QuatMatrix::operator+(const QuatMatrix& o) const {
  QuatMatrix r(n_);
  for (std::size_t k = 0; k < e_.size(); ++k) r.e_[k] = e_[k] + o.e_[k];
  return r;
}

QuatMatrix QuatMatrix::operator-(const QuatMatrix& o) const {
  QuatMatrix r(n_);
  for (std::size_t k = 0; k < e_.size(); ++k) r.e_[k] = e_[k] - o.e_[k];
  return r;
}

QuatMatrix QuatMatrix::operator*(const QuatMatrix& o) const {
  QuatMatrix r(n_);
  for (int i = 0; i < n_; ++i)
    for (int k = 0; k < n_; ++k) {
      const Quaternion& aik = (*this)(i, k);
      for (int j = 0; j < n_; ++j) r(i, j) += quat_mul(aik, o(k, j));
    }
  return r;
}

QuatMatrix QuatMatrix::operator*(double s) const {
  QuatMatrix r(n_);
  for (std::size_t k = 0; k < e_.size(); ++k) r.e_[k] = e_[k] * s;
  return r;
}

double QuatMatrix::max_entry_norm() const {
  double m = 0.0;
  for (const Quaternion& q : e_) m = std::max(m, q.norm());
  return m;
}

HyperhermitianMatrix::HyperhermitianMatrix(const QuatMatrix& m) : m_(m) {
  const int n = m.n();
  const double scale = 1.0 + m.max_entry_norm();
  for (int r = 0; r < n; ++r)
    for (int s = r; s < n; ++s) {
      const Quaternion d = m(r, s) - m(s, r).conj();
      if (d.norm() > 1e-12 * scale)
        throw Error("HyperhermitianMatrix: conj-transpose symmetry violated");
    }
}

HyperhermitianMatrix HyperhermitianMatrix::unchecked(QuatMatrix m) {
  HyperhermitianMatrix h;
  h.m_ = std::move(m);
  return h;
}

HyperhermitianMatrix HyperhermitianMatrix::identity(int n) {
  return unchecked(QuatMatrix::identity(n));
}

HyperhermitianMatrix HyperhermitianMatrix::diagonal(
    const std::vector<double>& d) {
  QuatMatrix m(int(d.size()));
  for (int r = 0; r < int(d.size()); ++r) m(r, r) = Quaternion::real(d[r]);
  return unchecked(std::move(m));
}

StructureMatrices structure_matrices(int n) {
  // Block patterns (each entry an n x n identity multiple):
  //   I0 = [[0,-1,0,0],[1,0,0,0],[0,0,0,-1],[0,0,1,0]]
  //   J0 = [[0,0,-1,0],[0,0,0,1],[1,0,0,0],[0,-1,0,0]]
  //   K0 = [[0,0,0,-1],[0,0,-1,0],[0,1,0,0],[1,0,0,0]]
  static const int iblk[4][4] = {
      {0, -1, 0, 0}, {1, 0, 0, 0}, {0, 0, 0, -1}, {0, 0, 1, 0}};
  static const int jblk[4][4] = {
      {0, 0, -1, 0}, {0, 0, 0, 1}, {1, 0, 0, 0}, {0, -1, 0, 0}};
  static const int kblk[4][4] = {
      {0, 0, 0, -1}, {0, 0, -1, 0}, {0, 1, 0, 0}, {1, 0, 0, 0}};

  auto expand = [n](const int blk[4][4]) {
    RealMatrix m(4 * n);
    for (int bi = 0; bi < 4; ++bi)
      for (int bj = 0; bj < 4; ++bj)
        if (blk[bi][bj] != 0)
          for (int r = 0; r < n; ++r)
            m(bi * n + r, bj * n + r) = double(blk[bi][bj]);
    return m;
  };
  return {expand(iblk), expand(jblk), expand(kblk)};
}

const IotaPattern& iota_pattern() {
  static const IotaPattern pat = {
      {{0, 1, 2, 3}, {1, 0, 3, 2}, {2, 3, 0, 1}, {3, 2, 1, 0}},
      {{1, 1, 1, 1}, {-1, 1, -1, 1}, {-1, 1, 1, -1}, {-1, -1, 1, 1}}};
  return pat;
}

RealMatrix iota(const QuatMatrix& m) {
  const int n = m.n();
  RealMatrix out(4 * n);
  const IotaPattern& pat = iota_pattern();
  for (int r = 0; r < n; ++r)
    for (int s = 0; s < n; ++s) {
      const Quaternion& q = m(r, s);
      const double c[4] = {q.w, q.x, q.y, q.z};
      for (int bi = 0; bi < 4; ++bi)
        for (int bj = 0; bj < 4; ++bj)
          out(bi * n + r, bj * n + s) = pat.sign[bi][bj] * c[pat.comp[bi][bj]];
    }
  return out;
}

QuatMatrix iota_inverse(const RealMatrix& m) {
  const int n = m.dim() / 4;
  QuatMatrix out(n);
  auto blk = [&](int bi, int bj, int r, int s) {
    return m(bi * n + r, bj * n + s);
  };
  for (int r = 0; r < n; ++r)
    for (int s = 0; s < n; ++s) {
      Quaternion q;
      q.w = 0.25 * (blk(0, 0, r, s) + blk(1, 1, r, s) + blk(2, 2, r, s) +
                    blk(3, 3, r, s));
      q.x = 0.25 * (blk(0, 1, r, s) - blk(1, 0, r, s) - blk(2, 3, r, s) +
                    blk(3, 2, r, s));
      q.y = 0.25 * (blk(0, 2, r, s) + blk(1, 3, r, s) - blk(2, 0, r, s) -
                    blk(3, 1, r, s));
      q.z = 0.25 * (blk(0, 3, r, s) - blk(1, 2, r, s) + blk(2, 1, r, s) -
                    blk(3, 0, r, s));
      out(r, s) = q;
    }
  return out;
}

RealMatrix p_project(const RealMatrix& m) {
  const int n = m.dim() / 4;
  const StructureMatrices s = structure_matrices(n);
  RealMatrix acc = m;
  acc = acc - s.I0 * m * s.I0;
  acc = acc - s.J0 * m * s.J0;
  acc = acc - s.K0 * m * s.K0;
  return acc * 0.25;
}

namespace {

// Group the 4n sorted eigenvalues of iota(U) into n quadruples.
std::vector<double> quadruple_means(const std::vector<double>& ev,
                                    double tol) {
  const int n = int(ev.size()) / 4;
  std::vector<double> means(n);
  for (int g = 0; g < n; ++g) {
    const double lo = ev[4 * g];
    const double hi = ev[4 * g + 3];
    if (hi - lo > tol)
      throw DegenerateSpectrum(
          "eigenvalues of iota(U) are not quadruples: group " +
          std::to_string(g) + " spread " + std::to_string(hi - lo));
    means[g] = 0.25 * (ev[4 * g] + ev[4 * g + 1] + ev[4 * g + 2] + ev[4 * g + 3]);
  }
  return means;
}

}  // namespace

std::vector<double> hh_eigenvalues(const HyperhermitianMatrix& u) {
  const RealMatrix iu = iota(u.quat());
  const double tol = 1e-8 * iu.frobenius_norm();
  // a non-hyperhermitian input makes iota(U) non-symmetric and its true
  // spectrum complex, so there is no real quadruple grouping
  if ((iu - iu.transpose()).frobenius_norm() > tol)
    throw DegenerateSpectrum(
        "iota(U) is not symmetric: input is not hyperhermitian");
  return quadruple_means(symmetric_eigenvalues(iu), tol);
}

double moore_det(const HyperhermitianMatrix& u) {
  double det = 1.0;
  for (double ev : hh_eigenvalues(u)) det *= ev;
  return det;
}

bool is_positive_definite(const HyperhermitianMatrix& u, double margin) {
  return hh_eigenvalues(u).front() > margin;
}

HyperhermitianMatrix hh_inverse(const HyperhermitianMatrix& u) {
  const RealMatrix iu = iota(u.quat());
  const std::vector<double> ev = hh_eigenvalues(u);
  double min_abs = std::fabs(ev.front());
  for (double e : ev) min_abs = std::min(min_abs, std::fabs(e));
  if (min_abs < 1e-12 * iu.frobenius_norm())
    throw SingularMatrix("hh_inverse: eigenvalue " + std::to_string(min_abs) +
                         " below singularity guard");
  RealMatrix inv = lu_inverse(iu);
  // symmetrize and re-project; exact inverses already live in the commutant
  inv = (inv + inv.transpose()) * 0.5;
  return HyperhermitianMatrix::unchecked(iota_inverse(p_project(inv)));
}

double re_trace_product(const HyperhermitianMatrix& a,
                        const HyperhermitianMatrix& b) {
  const int n = a.n();
  double tr = 0.0;
  for (int r = 0; r < n; ++r)
    for (int s = 0; s < n; ++s) {
      const Quaternion& x = a(r, s);
      const Quaternion& y = b(s, r);
      // real part of x*y
      tr += x.w * y.w - x.x * y.x - x.y * y.y - x.z * y.z;
    }
  return tr;
}

}  // namespace qma
