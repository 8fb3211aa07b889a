#pragma once

#include <cstddef>
#include <vector>

namespace qma {

// Small dense row-major real matrix. Everything in this project is at most
// 12x12 (iota images for n <= 3), so no blocking or sparsity.
class RealMatrix {
 public:
  RealMatrix() = default;
  explicit RealMatrix(int dim) : dim_(dim), a_(std::size_t(dim) * dim, 0.0) {}

  static RealMatrix identity(int dim);

  int dim() const { return dim_; }
  double& operator()(int i, int j) { return a_[std::size_t(i) * dim_ + j]; }
  double operator()(int i, int j) const {
    return a_[std::size_t(i) * dim_ + j];
  }
  const std::vector<double>& data() const { return a_; }
  std::vector<double>& data() { return a_; }

  RealMatrix transpose() const;
  RealMatrix operator+(const RealMatrix& o) const;
  RealMatrix operator-(const RealMatrix& o) const;
  RealMatrix operator*(const RealMatrix& o) const;
  RealMatrix operator*(double s) const;
  RealMatrix& operator+=(const RealMatrix& o);

  double frobenius_norm() const;
  double max_abs() const;

 private:
  int dim_ = 0;
  std::vector<double> a_;
};

// Eigenvalues of a symmetric matrix by cyclic Jacobi with a fixed sweep
// order. Deterministic: repeated runs are bit-identical.
std::vector<double> symmetric_eigenvalues(RealMatrix a);

double min_symmetric_eigenvalue(const RealMatrix& a);

// LU with partial pivoting; determinant and linear solve for the real
// oracle determinant and for inversion through iota.
double lu_determinant(RealMatrix a);
RealMatrix lu_inverse(const RealMatrix& a);

}  // namespace qma
