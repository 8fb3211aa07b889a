#include "qma/smallmat.hpp"

#include <algorithm>
#include <cmath>

#include "qma/errors.hpp"

namespace qma {

RealMatrix RealMatrix::identity(int dim) {
  RealMatrix m(dim);
  for (int i = 0; i < dim; ++i) m(i, i) = 1.0;
  return m;
}

RealMatrix RealMatrix::transpose() const {
  RealMatrix t(dim_);
  for (int i = 0; i < dim_; ++i)
    for (int j = 0; j < dim_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

RealMatrix RealMatrix::operator+(const RealMatrix& o) const {
  RealMatrix r(dim_);
  for (std::size_t k = 0; k < a_.size(); ++k) r.a_[k] = a_[k] + o.a_[k];
  return r;
}

RealMatrix RealMatrix::operator-(const RealMatrix& o) const {
  RealMatrix r(dim_);
  for (std::size_t k = 0; k < a_.size(); ++k) r.a_[k] = a_[k] - o.a_[k];
  return r;
}

RealMatrix RealMatrix::operator*(const RealMatrix& o) const {
  RealMatrix r(dim_);
  for (int i = 0; i < dim_; ++i)
    for (int k = 0; k < dim_; ++k) {
      const double aik = (*this)(i, k);
      if (aik == 0.0) continue;
      for (int j = 0; j < dim_; ++j) r(i, j) += aik * o(k, j);
    }
  return r;
}

RealMatrix RealMatrix::operator*(double s) const {
  RealMatrix r(dim_);
  for (std::size_t k = 0; k < a_.size(); ++k) r.a_[k] = a_[k] * s;
  return r;
}

RealMatrix& RealMatrix::operator+=(const RealMatrix& o) {
  for (std::size_t k = 0; k < a_.size(); ++k) a_[k] += o.a_[k];
  return *this;
}

double RealMatrix::frobenius_norm() const {
  double s = 0.0;
  for (double v : a_) s += v * v;
  return std::sqrt(s);
}

double RealMatrix::max_abs() const {
  double m = 0.0;
  for (double v : a_) m = std::max(m, std::fabs(v));
  return m;
}

std::vector<double> symmetric_eigenvalues(RealMatrix a) {
  const int m = a.dim();
  const double scale = a.frobenius_norm();
  if (scale == 0.0) return std::vector<double>(m, 0.0);
  const double tol = 1e-15 * scale;

  for (int sweep = 0; sweep < 64; ++sweep) {
    double off = 0.0;
    for (int p = 0; p < m; ++p)
      for (int q = p + 1; q < m; ++q) off += a(p, q) * a(p, q);
    if (std::sqrt(2.0 * off) <= tol) break;

    for (int p = 0; p < m - 1; ++p) {
      for (int q = p + 1; q < m; ++q) {
        const double apq = a(p, q);
        if (std::fabs(apq) <= 1e-300) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double sgn = theta >= 0.0 ? 1.0 : -1.0;
        const double t =
            sgn / (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        const double tau = s / (1.0 + c);

        const double app = a(p, p);
        const double aqq = a(q, q);
        a(p, p) = app - t * apq;
        a(q, q) = aqq + t * apq;
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        for (int k = 0; k < m; ++k) {
          if (k == p || k == q) continue;
          const double akp = a(k, p);
          const double akq = a(k, q);
          a(k, p) = akp - s * (akq + tau * akp);
          a(p, k) = a(k, p);
          a(k, q) = akq + s * (akp - tau * akq);
          a(q, k) = a(k, q);
        }
      }
    }
  }

  std::vector<double> ev(m);
  for (int i = 0; i < m; ++i) ev[i] = a(i, i);
  std::sort(ev.begin(), ev.end());
  return ev;
}

double min_symmetric_eigenvalue(const RealMatrix& a) {
  return symmetric_eigenvalues(a).front();
}

namespace {

// Returns the pivoted LU decomposition in place; `sign` picks up row swaps.
bool lu_factor(RealMatrix& a, std::vector<int>& perm, double& sign) {
  const int m = a.dim();
  perm.resize(m);
  for (int i = 0; i < m; ++i) perm[i] = i;
  sign = 1.0;
  for (int col = 0; col < m; ++col) {
    int piv = col;
    double best = std::fabs(a(col, col));
    for (int r = col + 1; r < m; ++r) {
      const double v = std::fabs(a(r, col));
      if (v > best) {
        best = v;
        piv = r;
      }
    }
    if (best == 0.0) return false;
    if (piv != col) {
      for (int j = 0; j < m; ++j) std::swap(a(piv, j), a(col, j));
      std::swap(perm[piv], perm[col]);
      sign = -sign;
    }
    const double pivval = a(col, col);
    for (int r = col + 1; r < m; ++r) {
      const double f = a(r, col) / pivval;
      a(r, col) = f;
      for (int j = col + 1; j < m; ++j) a(r, j) -= f * a(col, j);
    }
  }
  return true;
}

}  // namespace

double lu_determinant(RealMatrix a) {
  std::vector<int> perm;
  double sign = 0.0;
  if (!lu_factor(a, perm, sign)) return 0.0;
  double det = sign;
  for (int i = 0; i < a.dim(); ++i) det *= a(i, i);
  return det;
}

RealMatrix lu_inverse(const RealMatrix& a) {
  const int m = a.dim();
  RealMatrix lu = a;
  std::vector<int> perm;
  double sign = 0.0;
  if (!lu_factor(lu, perm, sign))
    throw SingularMatrix("lu_inverse: exactly singular matrix");
  RealMatrix inv(m);
  std::vector<double> col(m);
  for (int c = 0; c < m; ++c) {
    // forward substitution on the permuted unit vector
    for (int i = 0; i < m; ++i) col[i] = (perm[i] == c) ? 1.0 : 0.0;
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < i; ++j) col[i] -= lu(i, j) * col[j];
    for (int i = m - 1; i >= 0; --i) {
      for (int j = i + 1; j < m; ++j) col[i] -= lu(i, j) * col[j];
      col[i] /= lu(i, i);
    }
    for (int i = 0; i < m; ++i) inv(i, c) = col[i];
  }
  return inv;
}

}  // namespace qma
