#include "qma/grid.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <string>

#include "qma/errors.hpp"
#include "qma/reduce.hpp"

namespace qma {

PeriodicScalarField PeriodicScalarField::from_function(
    GridShape shape, const std::function<double(const std::vector<double>&)>& f) {
  PeriodicScalarField out(shape);
  const int axes = shape.axes();
  const double h = shape.h();
  std::vector<int> idx(axes, 0);
  std::vector<double> x(axes, 0.0);
  for (std::size_t p = 0; p < out.size(); ++p) {
    for (int a = 0; a < axes; ++a) x[a] = idx[a] * h;
    out[p] = f(x);
    for (int a = axes - 1; a >= 0; --a) {
      if (++idx[a] < shape.N) break;
      idx[a] = 0;
    }
  }
  return out;
}

namespace {

struct LineLayout {
  std::size_t stride;
  std::size_t block;   // N * stride
  std::size_t nouter;  // npoints / block
};

LineLayout line_layout(const GridShape& shape, int axis) {
  LineLayout l;
  l.stride = shape.stride(axis);
  l.block = std::size_t(shape.N) * l.stride;
  l.nouter = shape.npoints() / l.block;
  return l;
}

void apply_fd4(const PeriodicScalarField& in, int axis, int order,
               double scale, PeriodicScalarField& out, bool accumulate) {
  const GridShape& shape = in.shape();
  const int N = shape.N;
  if (N < 5) throw GridTooSmall("FD4 needs N >= 5, got N = " + std::to_string(N));
  const LineLayout l = line_layout(shape, axis);
  const double h = shape.h();
  const double c1 = scale / (12.0 * h);
  const double c2 = scale / (12.0 * h * h);
  const double* src = in.data();
  double* dst = out.data();

  for (std::size_t q = 0; q < l.nouter; ++q) {
    const std::size_t base = q * l.block;
    for (int c = 0; c < N; ++c) {
      const std::size_t om2 = std::size_t((c - 2 + N) % N) * l.stride;
      const std::size_t om1 = std::size_t((c - 1 + N) % N) * l.stride;
      const std::size_t oc = std::size_t(c) * l.stride;
      const std::size_t op1 = std::size_t((c + 1) % N) * l.stride;
      const std::size_t op2 = std::size_t((c + 2) % N) * l.stride;
      const double* pm2 = src + base + om2;
      const double* pm1 = src + base + om1;
      const double* pc = src + base + oc;
      const double* pp1 = src + base + op1;
      const double* pp2 = src + base + op2;
      double* po = dst + base + oc;
      if (order == 1) {
        for (std::size_t r = 0; r < l.stride; ++r) {
          const double v = (pm2[r] - pp2[r] + 8.0 * (pp1[r] - pm1[r])) * c1;
          po[r] = accumulate ? po[r] + v : v;
        }
      } else {
        for (std::size_t r = 0; r < l.stride; ++r) {
          const double v =
              (16.0 * (pp1[r] + pm1[r]) - (pp2[r] + pm2[r]) - 30.0 * pc[r]) * c2;
          po[r] = accumulate ? po[r] + v : v;
        }
      }
    }
  }
}

void apply_spectral(const PeriodicScalarField& in, int axis, int order,
                    double scale, PeriodicScalarField& out, bool accumulate) {
  const GridShape& shape = in.shape();
  const int N = shape.N;
  const LineLayout l = line_layout(shape, axis);
  const double* src = in.data();
  double* dst = out.data();

  // twiddle table e^{-2 pi i m / N}
  std::vector<std::complex<double>> w(N);
  for (int m = 0; m < N; ++m) {
    const double ang = -2.0 * M_PI * m / N;
    w[m] = {std::cos(ang), std::sin(ang)};
  }
  // derivative multiplier per mode
  std::vector<std::complex<double>> mult(N);
  for (int k = 0; k < N; ++k) {
    int kk = (k <= N / 2) ? k : k - N;
    if (order == 1 && N % 2 == 0 && k == N / 2) kk = 0;  // Nyquist
    const double omega = 2.0 * M_PI * kk;
    mult[k] = (order == 1) ? std::complex<double>(0.0, omega)
                           : std::complex<double>(-omega * omega, 0.0);
  }

  std::vector<double> buf(N);
  std::vector<std::complex<double>> spec(N);
  for (std::size_t q = 0; q < l.nouter; ++q) {
    const std::size_t base = q * l.block;
    for (std::size_t r = 0; r < l.stride; ++r) {
      for (int c = 0; c < N; ++c) buf[c] = src[base + std::size_t(c) * l.stride + r];
      // remove the zero mode up front: it never contributes to derivatives
      // and its leakage would otherwise pollute constants
      double line_mean = 0.0;
      for (int c = 0; c < N; ++c) line_mean += buf[c];
      line_mean /= N;
      for (int c = 0; c < N; ++c) buf[c] -= line_mean;
      for (int k = 0; k < N; ++k) {
        std::complex<double> s{0.0, 0.0};
        for (int c = 0; c < N; ++c) s += buf[c] * w[(std::size_t(c) * k) % N];
        spec[k] = s * mult[k];
      }
      for (int c = 0; c < N; ++c) {
        std::complex<double> s{0.0, 0.0};
        for (int k = 0; k < N; ++k)
          s += spec[k] * std::conj(w[(std::size_t(c) * k) % N]);
        const double v = scale * s.real() / N;
        double& o = dst[base + std::size_t(c) * l.stride + r];
        o = accumulate ? o + v : v;
      }
    }
  }
}

}  // namespace

void apply_partial(const PeriodicScalarField& in, int axis, int order,
                   DerivMode mode, PeriodicScalarField& out) {
  if (mode == DerivMode::FD4)
    apply_fd4(in, axis, order, 1.0, out, false);
  else
    apply_spectral(in, axis, order, 1.0, out, false);
}

PeriodicScalarField partial(const PeriodicScalarField& in, int axis, int order,
                            DerivMode mode) {
  PeriodicScalarField out(in.shape());
  apply_partial(in, axis, order, mode, out);
  return out;
}

void accumulate_partial(const PeriodicScalarField& in, int axis, int order,
                        DerivMode mode, double scale, PeriodicScalarField& out) {
  if (mode == DerivMode::FD4)
    apply_fd4(in, axis, order, scale, out, true);
  else
    apply_spectral(in, axis, order, scale, out, true);
}

double mean(const PeriodicScalarField& f) {
  return pairwise_sum(f.data(), f.size()) / double(f.size());
}

double weighted_integral(const PeriodicScalarField& f,
                         const PeriodicScalarField& weight) {
  const double* a = f.data();
  const double* b = weight.data();
  const double s =
      pairwise_sum(f.size(), [a, b](std::size_t i) { return a[i] * b[i]; });
  return s / double(f.size());
}

double field_max(const PeriodicScalarField& f) {
  double m = f[0];
  for (std::size_t i = 1; i < f.size(); ++i) m = std::max(m, f[i]);
  return m;
}

double field_min(const PeriodicScalarField& f) {
  double m = f[0];
  for (std::size_t i = 1; i < f.size(); ++i) m = std::min(m, f[i]);
  return m;
}

double osc(const PeriodicScalarField& f) { return field_max(f) - field_min(f); }

int HyperhermitianField::offdiag_channel(int r, int s, int comp) const {
  const int n = shape.n;
  const int pair = r * n - r * (r + 1) / 2 + (s - r - 1);
  return n + 4 * pair + comp;
}

HyperhermitianMatrix HyperhermitianField::at(std::size_t point) const {
  const int n = shape.n;
  QuatMatrix m(n);
  for (int r = 0; r < n; ++r) m(r, r) = Quaternion::real(ch[diag_channel(r)][point]);
  for (int r = 0; r < n; ++r)
    for (int s = r + 1; s < n; ++s) {
      const Quaternion q(ch[offdiag_channel(r, s, 0)][point],
                         ch[offdiag_channel(r, s, 1)][point],
                         ch[offdiag_channel(r, s, 2)][point],
                         ch[offdiag_channel(r, s, 3)][point]);
      m(r, s) = q;
      m(s, r) = q.conj();
    }
  return HyperhermitianMatrix::unchecked(std::move(m));
}

namespace {

// Index pairs (i, j) and signs assembling each quaternion component of
// (Hess_H)_{rs} from the mixed partials d_{x^r_i} d_{x^s_j}; this is
// iota^{-1}(4 p(Hess_R)) written out blockwise.
struct HessTap {
  int i, j, sign;
};
constexpr HessTap kHessTab[4][4] = {
    {{0, 0, 1}, {1, 1, 1}, {2, 2, 1}, {3, 3, 1}},    // w
    {{0, 1, 1}, {1, 0, -1}, {2, 3, -1}, {3, 2, 1}},  // x
    {{0, 2, 1}, {1, 3, 1}, {2, 0, -1}, {3, 1, -1}},  // y
    {{0, 3, 1}, {1, 2, -1}, {2, 1, 1}, {3, 0, -1}},  // z
};

}  // namespace

HyperhermitianField quat_hessian(const PeriodicScalarField& f, DerivMode mode,
                                 HessianWorkspace* ws) {
  const GridShape shape = f.shape();
  const int n = shape.n;
  HyperhermitianField out;
  out.shape = shape;
  out.ch.assign(HyperhermitianField::channel_count(n),
                std::vector<double>(shape.npoints(), 0.0));

  // diagonal entries: sum of the four pure second derivatives
  {
    PeriodicScalarField acc(shape);
    for (int r = 0; r < n; ++r) {
      std::fill(acc.data(), acc.data() + acc.size(), 0.0);
      for (int i = 0; i < 4; ++i)
        accumulate_partial(f, shape.axis_index(i, r), 2, mode, 1.0, acc);
      out.ch[out.diag_channel(r)].assign(acc.data(), acc.data() + acc.size());
    }
  }
  if (n == 1) return out;

  // first derivatives, one field per axis
  HessianWorkspace local;
  HessianWorkspace& w = ws ? *ws : local;
  if (int(w.first.size()) != shape.axes() ||
      !(w.first[0].shape() == shape)) {
    w.first.assign(shape.axes(), PeriodicScalarField(shape));
    w.tmp = PeriodicScalarField(shape);
  }
  for (int a = 0; a < shape.axes(); ++a) apply_partial(f, a, 1, mode, w.first[a]);

  // off-diagonal entries from symmetrized mixed partials
  for (int r = 0; r < n; ++r)
    for (int s = r + 1; s < n; ++s)
      for (int comp = 0; comp < 4; ++comp) {
        PeriodicScalarField acc(shape);
        for (const HessTap& tap : kHessTab[comp]) {
          const int a = shape.axis_index(tap.i, r);
          const int b = shape.axis_index(tap.j, s);
          const double sc = 0.5 * tap.sign;
          accumulate_partial(w.first[a], b, 1, mode, sc, acc);
          accumulate_partial(w.first[b], a, 1, mode, sc, acc);
        }
        out.ch[out.offdiag_channel(r, s, comp)].assign(acc.data(),
                                                       acc.data() + acc.size());
      }
  return out;
}

PeriodicScalarField quat_laplacian(const PeriodicScalarField& f, double kappa,
                                   DerivMode mode) {
  const GridShape shape = f.shape();
  PeriodicScalarField out(shape);
  const double scale = kappa / shape.n;
  for (int a = 0; a < shape.axes(); ++a)
    accumulate_partial(f, a, 2, mode, scale, out);
  return out;
}

std::vector<RealMatrix> real_hessian(const PeriodicScalarField& f,
                                     DerivMode mode) {
  const GridShape shape = f.shape();
  const int axes = shape.axes();
  std::vector<RealMatrix> out(shape.npoints(), RealMatrix(axes));

  std::vector<PeriodicScalarField> first(axes, PeriodicScalarField(shape));
  for (int a = 0; a < axes; ++a) apply_partial(f, a, 1, mode, first[a]);

  PeriodicScalarField entry(shape);
  PeriodicScalarField tmp(shape);
  for (int a = 0; a < axes; ++a)
    for (int b = a; b < axes; ++b) {
      if (a == b) {
        apply_partial(f, a, 2, mode, entry);
      } else {
        apply_partial(first[a], b, 1, mode, entry);
        apply_partial(first[b], a, 1, mode, tmp);
        for (std::size_t p = 0; p < entry.size(); ++p)
          entry[p] = 0.5 * (entry[p] + tmp[p]);
      }
      for (std::size_t p = 0; p < entry.size(); ++p) {
        out[p](a, b) = entry[p];
        out[p](b, a) = entry[p];
      }
    }
  return out;
}

namespace {

double fd4_gather_1(const PeriodicScalarField& f, std::vector<int> idx,
                    int axis);

double fd4_value(const PeriodicScalarField& f, const std::vector<int>& idx) {
  return f[flatten(f.shape(), idx)];
}

double fd4_gather_1(const PeriodicScalarField& f, std::vector<int> idx,
                    int axis) {
  const int N = f.shape().N;
  const int c = idx[axis];
  auto at = [&](int shift) {
    idx[axis] = ((c + shift) % N + N) % N;
    return fd4_value(f, idx);
  };
  const double h = f.shape().h();
  return (at(-2) - at(2) + 8.0 * (at(1) - at(-1))) / (12.0 * h);
}

double fd4_gather_2(const PeriodicScalarField& f, std::vector<int> idx,
                    int axis) {
  const int N = f.shape().N;
  const int c = idx[axis];
  auto at = [&](int shift) {
    idx[axis] = ((c + shift) % N + N) % N;
    return fd4_value(f, idx);
  };
  const double h = f.shape().h();
  return (16.0 * (at(1) + at(-1)) - (at(2) + at(-2)) - 30.0 * at(0)) /
         (12.0 * h * h);
}

// D_a(D_b f) at one point: outer stencil along a over inner gathers along b.
double fd4_gather_mixed(const PeriodicScalarField& f, std::vector<int> idx,
                        int outer_axis, int inner_axis) {
  const int N = f.shape().N;
  const int c = idx[outer_axis];
  auto at = [&](int shift) {
    std::vector<int> p = idx;
    p[outer_axis] = ((c + shift) % N + N) % N;
    return fd4_gather_1(f, p, inner_axis);
  };
  const double h = f.shape().h();
  return (at(-2) - at(2) + 8.0 * (at(1) - at(-1))) / (12.0 * h);
}

}  // namespace

RealMatrix real_hessian_at(const PeriodicScalarField& f,
                           const std::vector<int>& index, DerivMode mode) {
  if (mode != DerivMode::FD4)
    throw Error("real_hessian_at supports FD4 only");
  const int axes = f.shape().axes();
  RealMatrix out(axes);
  for (int a = 0; a < axes; ++a)
    for (int b = a; b < axes; ++b) {
      double v;
      if (a == b) {
        v = fd4_gather_2(f, index, a);
      } else {
        v = 0.5 * (fd4_gather_mixed(f, index, b, a) +
                   fd4_gather_mixed(f, index, a, b));
      }
      out(a, b) = v;
      out(b, a) = v;
    }
  return out;
}

std::vector<int> unflatten(const GridShape& shape, std::size_t point) {
  const int axes = shape.axes();
  std::vector<int> idx(axes);
  for (int a = axes - 1; a >= 0; --a) {
    idx[a] = int(point % shape.N);
    point /= shape.N;
  }
  return idx;
}

std::size_t flatten(const GridShape& shape, const std::vector<int>& index) {
  std::size_t p = 0;
  for (int a = 0; a < shape.axes(); ++a) p = p * shape.N + index[a];
  return p;
}

}  // namespace qma
