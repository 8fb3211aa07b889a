#pragma once

#include <vector>

#include "qma/quaternion.hpp"
#include "qma/smallmat.hpp"

namespace qma {

// n x n quaternion matrix, row-major.
class QuatMatrix {
 public:
  QuatMatrix() = default;
  explicit QuatMatrix(int n) : n_(n), e_(std::size_t(n) * n) {}

  static QuatMatrix identity(int n);

  int n() const { return n_; }
  Quaternion& operator()(int r, int s) { return e_[std::size_t(r) * n_ + s]; }
  const Quaternion& operator()(int r, int s) const {
    return e_[std::size_t(r) * n_ + s];
  }

  QuatMatrix conj_transpose() const;
  QuatMatrix operator+(const QuatMatrix& o) const;
  QuatMatrix operator-(const QuatMatrix& o) const;
  QuatMatrix operator*(const QuatMatrix& o) const;
  QuatMatrix operator*(double s) const;

  double max_entry_norm() const;

 private:
  int n_ = 0;
  std::vector<Quaternion> e_;
};

// Quaternion matrix with conj(U) == transpose(U); diagonal entries real.
// The constructor validates the symmetry to 1e-12 relative; `unchecked`
// skips the validation (hot paths, deliberate error-path tests).
class HyperhermitianMatrix {
 public:
  HyperhermitianMatrix() = default;
  explicit HyperhermitianMatrix(const QuatMatrix& m);

  static HyperhermitianMatrix unchecked(QuatMatrix m);
  static HyperhermitianMatrix identity(int n);
  static HyperhermitianMatrix diagonal(const std::vector<double>& d);

  int n() const { return m_.n(); }
  const QuatMatrix& quat() const { return m_; }
  const Quaternion& operator()(int r, int s) const { return m_(r, s); }

  HyperhermitianMatrix operator+(const HyperhermitianMatrix& o) const {
    return unchecked(m_ + o.m_);
  }
  HyperhermitianMatrix operator-(const HyperhermitianMatrix& o) const {
    return unchecked(m_ - o.m_);
  }
  HyperhermitianMatrix operator*(double s) const { return unchecked(m_ * s); }

 private:
  QuatMatrix m_;
};

// I0, J0, K0 as 4n x 4n real matrices in the coordinate order
// (x^1_0..x^n_0, x^1_1..x^n_1, x^1_2..x^n_2, x^1_3..x^n_3).
struct StructureMatrices {
  RealMatrix I0, J0, K0;
};

StructureMatrices structure_matrices(int n);

// Real representation iota(A + iB + jC + kD) as the 4x4 block matrix
//   [  A  B  C  D ]
//   [ -B  A -D  C ]
//   [ -C  D  A -B ]
//   [ -D -C  B  A ].
RealMatrix iota(const QuatMatrix& m);

// Component index and sign of each iota block: block (bi,bj) holds
// sign[bi][bj] * component comp[bi][bj] of the quaternion entry.
struct IotaPattern {
  int comp[4][4];
  int sign[4][4];
};
const IotaPattern& iota_pattern();

// Left inverse of iota; averages the four copies of each component block,
// so it is also the nearest quaternionic matrix for inputs slightly off
// the image of iota.
QuatMatrix iota_inverse(const RealMatrix& m);

// p(N) = (N - I0*N*I0 - J0*N*J0 - K0*N*K0) / 4, the projector onto the
// commutant {H : I0 H I0 = J0 H J0 = K0 H K0 = -H}.
RealMatrix p_project(const RealMatrix& m);

// Eigenvalues of iota(U) grouped into n quadruples (ascending); one
// representative (the quadruple mean) per group. Throws DegenerateSpectrum
// if the quadruple structure is violated beyond 1e-8 * ||iota(U)||_F.
std::vector<double> hh_eigenvalues(const HyperhermitianMatrix& u);

// Moore determinant: the signed product of the n quaternionic eigenvalues,
// so that moore_det(U)^4 = det(iota(U)).
double moore_det(const HyperhermitianMatrix& u);

bool is_positive_definite(const HyperhermitianMatrix& u, double margin);

// Inverse through iota; throws SingularMatrix below 1e-12 * ||iota(U)||_F.
HyperhermitianMatrix hh_inverse(const HyperhermitianMatrix& u);

// Re(tr(A*B)) = tr(iota(A)*iota(B)) / 4.
double re_trace_product(const HyperhermitianMatrix& a,
                        const HyperhermitianMatrix& b);

}  // namespace qma
