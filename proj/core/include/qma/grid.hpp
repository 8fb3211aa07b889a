#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

#include "qma/hyperhermitian.hpp"

namespace qma {

// Uniform periodic grid on the torus [0,1)^{4n}, N points per axis,
// spacing h = 1/N. Axis order follows the coordinate convention
// (x^1_0..x^n_0, x^1_1..x^n_1, x^1_2..x^n_2, x^1_3..x^n_3): the axis of
// component i of quaternionic coordinate r is i*n + r. Values are stored
// row-major with axis 0 slowest.
struct GridShape {
  int n = 1;
  int N = 8;

  int axes() const { return 4 * n; }
  double h() const { return 1.0 / N; }
  std::size_t npoints() const {
    std::size_t p = 1;
    for (int a = 0; a < axes(); ++a) p *= std::size_t(N);
    return p;
  }
  std::size_t stride(int axis) const {
    std::size_t s = 1;
    for (int a = axis + 1; a < axes(); ++a) s *= std::size_t(N);
    return s;
  }
  int axis_index(int comp, int r) const { return comp * n + r; }
  bool operator==(const GridShape& o) const { return n == o.n && N == o.N; }
};

class PeriodicScalarField {
 public:
  PeriodicScalarField() = default;
  explicit PeriodicScalarField(GridShape shape)
      : shape_(shape), v_(shape.npoints(), 0.0) {}

  static PeriodicScalarField from_function(
      GridShape shape, const std::function<double(const std::vector<double>&)>& f);

  const GridShape& shape() const { return shape_; }
  std::size_t size() const { return v_.size(); }
  double* data() { return v_.data(); }
  const double* data() const { return v_.data(); }
  double& operator[](std::size_t i) { return v_[i]; }
  double operator[](std::size_t i) const { return v_[i]; }

 private:
  GridShape shape_;
  std::vector<double> v_;
};

enum class DerivMode { FD4, Spectral };

// Periodic derivative along one axis. FD4 uses the central stencils
//   f' ~ (-f_{+2} + 8 f_{+1} - 8 f_{-1} + f_{-2}) / (12 h)
//   f'' ~ (-f_{+2} + 16 f_{+1} - 30 f + 16 f_{-1} - f_{-2}) / (12 h^2);
// Spectral differentiates through the discrete Fourier transform.
// Throws GridTooSmall for N < 5 in FD4 mode.
void apply_partial(const PeriodicScalarField& in, int axis, int order,
                   DerivMode mode, PeriodicScalarField& out);
PeriodicScalarField partial(const PeriodicScalarField& in, int axis, int order,
                            DerivMode mode = DerivMode::FD4);

// out += scale * d^order(in)/dx_axis^order
void accumulate_partial(const PeriodicScalarField& in, int axis, int order,
                        DerivMode mode, double scale, PeriodicScalarField& out);

// Deterministic pairwise-tree mean with total volume normalized to 1.
double mean(const PeriodicScalarField& f);
double weighted_integral(const PeriodicScalarField& f,
                         const PeriodicScalarField& weight);
double field_max(const PeriodicScalarField& f);
double field_min(const PeriodicScalarField& f);
double osc(const PeriodicScalarField& f);

// Pointwise quaternionic Hessian field Hess_H stored channelwise:
// one real channel per diagonal entry, then (w,x,y,z) channels for each
// off-diagonal r < s. Entries satisfy iota(H) = 4 p(Hess_R) exactly.
struct HyperhermitianField {
  GridShape shape;
  std::vector<std::vector<double>> ch;

  static int channel_count(int n) { return n + 2 * n * (n - 1); }
  int diag_channel(int r) const { return r; }
  int offdiag_channel(int r, int s, int comp) const;
  HyperhermitianMatrix at(std::size_t point) const;
};

// Scratch buffers reused across repeated Hessian evaluations.
struct HessianWorkspace {
  std::vector<PeriodicScalarField> first;  // one per axis
  PeriodicScalarField tmp;
};

// Hess_H via iota^{-1}(4 p(Hess_R)) with symmetrized mixed partials.
// For n = 1 the single channel is the four-dimensional Laplacian.
HyperhermitianField quat_hessian(const PeriodicScalarField& f,
                                 DerivMode mode = DerivMode::FD4,
                                 HessianWorkspace* ws = nullptr);

// (kappa/n) * sum of all 4n pure second derivatives.
PeriodicScalarField quat_laplacian(const PeriodicScalarField& f, double kappa,
                                   DerivMode mode = DerivMode::FD4);

// Full real Hessian field; symmetric by construction (mixed partials are
// the average of both application orders). Meant for tests and small grids.
std::vector<RealMatrix> real_hessian(const PeriodicScalarField& f,
                                     DerivMode mode = DerivMode::FD4);

// Per-point real Hessian by stencil gather; identical arithmetic to
// real_hessian but without materializing the field.
RealMatrix real_hessian_at(const PeriodicScalarField& f,
                           const std::vector<int>& index,
                           DerivMode mode = DerivMode::FD4);

std::vector<int> unflatten(const GridShape& shape, std::size_t point);
std::size_t flatten(const GridShape& shape, const std::vector<int>& index);

}  // namespace qma
