#include "qma/oracle.hpp"

#include <cmath>
#include <string>

#include "qma/errors.hpp"
#include "qma/smallmat.hpp"

namespace qma {

namespace {

double entrywise_distance(const HyperhermitianMatrix& a,
                          const HyperhermitianMatrix& b) {
  return (a - b).quat().max_entry_norm();
}

}  // namespace

HyperhermitianMatrix random_hyperhermitian(Rng& rng, int n, double scale) {
  QuatMatrix m(n);
  for (int r = 0; r < n; ++r) {
    m(r, r) = Quaternion::real(rng.uniform(-scale, scale));
    for (int s = r + 1; s < n; ++s) {
      const Quaternion q(rng.uniform(-scale, scale), rng.uniform(-scale, scale),
                         rng.uniform(-scale, scale), rng.uniform(-scale, scale));
      m(r, s) = q;
      m(s, r) = q.conj();
    }
  }
  return HyperhermitianMatrix::unchecked(std::move(m));
}

HyperhermitianMatrix random_posdef_hyperhermitian(Rng& rng, int n) {
  QuatMatrix r(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      r(i, j) = Quaternion(rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0),
                           rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0));
  QuatMatrix g = r.conj_transpose() * r;
  for (int i = 0; i < n; ++i) g(i, i) += Quaternion::real(0.3);
  return HyperhermitianMatrix::unchecked(std::move(g));
}

FormuleResiduals verify_formule(const HyperhermitianMatrix& g,
                                const HyperhermitianMatrix& h, double kappa) {
  if (!is_positive_definite(g, 0.0))
    throw SingularG("verify_formule: G is not positive definite");
  const int n = g.n();

  const PolyForm omega = matrix_to_form(g, kappa);
  const PolyForm psi = hessian_form(h);

  const std::vector<double> origin(4 * n, 0.0);
  const Complex top0 = top_coeff(wedge_pow(omega, n), origin);
  const Complex top1 = top_coeff(wedge_pow(omega + psi, n), origin);
  const Complex ratio = top1 / top0;

  const double det_ratio =
      moore_det(g + h * kappa) / moore_det(g);
  FormuleResiduals out;
  out.wedge_ratio = std::abs(ratio - Complex(det_ratio, 0.0));

  const Complex lin =
      double(n) * top_coeff(psi.wedge(wedge_pow(omega, n - 1)), origin) / top0;
  const double trace = kappa * re_trace_product(hh_inverse(g), h);
  out.linearized = std::abs(lin - Complex(trace, 0.0));
  return out;
}

double verify_lucio(const HyperhermitianMatrix& g,
                    const std::vector<Complex>& alpha,
                    const std::vector<Complex>& beta, double kappa) {
  if (!is_positive_definite(g, 0.0))
    throw SingularG("verify_lucio: G is not positive definite");
  const int n = g.n();
  const FrameTables& t = FrameTables::get(n);

  PolyForm af(n), bf(n);
  for (int c = 0; c < t.nz; ++c) {
    if (alpha[c] != Complex{0.0, 0.0})
      af = af + PolyForm::frame_covector(n, c) * alpha[c];
    if (beta[c] != Complex{0.0, 0.0})
      bf = bf + PolyForm::frame_covector(n, c) * beta[c];
  }

  const PolyForm omega = matrix_to_form(g, kappa);
  const std::vector<double> origin(4 * n, 0.0);
  const Complex top0 = top_coeff(wedge_pow(omega, n), origin);
  const Complex lhs =
      top_coeff(af.wedge(J_act(bf.conj_form())).wedge(wedge_pow(omega, n - 1)),
                origin) /
      top0;

  // g(alpha, conj beta) through the inverse of the real metric iota(G)
  const RealMatrix ginv = lu_inverse(iota(g.quat()));
  std::vector<Complex> a_real(t.axes, 0.0), b_real(t.axes, 0.0);
  for (int c = 0; c < t.nz; ++c)
    for (int a = 0; a < t.axes; ++a) {
      a_real[a] += alpha[c] * t.frame[c][a];
      b_real[a] += beta[c] * t.frame[c][a];
    }
  Complex pairing{0.0, 0.0};
  for (int a = 0; a < t.axes; ++a)
    for (int b = 0; b < t.axes; ++b)
      pairing += ginv(a, b) * a_real[a] * std::conj(b_real[b]);

  const Complex rhs = -pairing / double(2 * n);
  return std::abs(lhs - rhs);
}

HyperhermitianPolyMatrix::HyperhermitianPolyMatrix(int n, int nvars)
    : n_(n), nvars_(nvars), e_(std::size_t(n) * n) {
  for (auto& q : e_)
    q = {Poly(nvars), Poly(nvars), Poly(nvars), Poly(nvars)};
}

void HyperhermitianPolyMatrix::set_entry(int r, int s,
                                         const std::array<Poly, 4>& q) {
  if (r == s) {
    for (int c = 1; c < 4; ++c)
      if (!q[c].empty())
        throw Error("diagonal entries of a hyperhermitian matrix are real");
    e_[std::size_t(r) * n_ + r] = q;
    return;
  }
  e_[std::size_t(r) * n_ + s] = q;
  e_[std::size_t(s) * n_ + r] = {q[0], q[1] * Complex(-1.0),
                                 q[2] * Complex(-1.0), q[3] * Complex(-1.0)};
}

HyperhermitianMatrix HyperhermitianPolyMatrix::evaluate(
    const std::vector<double>& x) const {
  QuatMatrix m(n_);
  for (int r = 0; r < n_; ++r)
    for (int s = 0; s < n_; ++s) {
      const auto& q = e_[std::size_t(r) * n_ + s];
      m(r, s) = Quaternion(q[0].eval(x).real(), q[1].eval(x).real(),
                           q[2].eval(x).real(), q[3].eval(x).real());
    }
  return HyperhermitianMatrix::unchecked(std::move(m));
}

namespace {

// iota applied entrywise to a polynomial hyperhermitian matrix
std::vector<Poly> iota_poly(const HyperhermitianPolyMatrix& u) {
  const int n = u.n();
  const int m = 4 * n;
  const IotaPattern& pat = iota_pattern();
  std::vector<Poly> out(std::size_t(m) * m, Poly(u.nvars()));
  for (int r = 0; r < n; ++r)
    for (int s = 0; s < n; ++s) {
      const auto& q = u.entry(r, s);
      for (int bi = 0; bi < 4; ++bi)
        for (int bj = 0; bj < 4; ++bj)
          out[std::size_t(bi * n + r) * m + (bj * n + s)] =
              q[pat.comp[bi][bj]] * Complex(double(pat.sign[bi][bj]));
    }
  return out;
}

RealMatrix eval_poly_matrix(const std::vector<Poly>& a, int m,
                            const std::vector<double>& x) {
  RealMatrix out(m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      out(i, j) = a[std::size_t(i) * m + j].eval(x).real();
  return out;
}

double trace_product(const RealMatrix& a, const RealMatrix& b) {
  double tr = 0.0;
  for (int i = 0; i < a.dim(); ++i)
    for (int j = 0; j < a.dim(); ++j) tr += a(i, j) * b(j, i);
  return tr;
}

// right side of the log-determinant Laplacian identity at a diagonal point
double delta_logdet_rhs(const HyperhermitianPolyMatrix& u,
                        const std::vector<double>& p, double kappa) {
  const int n = u.n();
  const int axes = 4 * n;
  const double scale = 1.0 + u.evaluate(p).quat().max_entry_norm();
  std::vector<double> diag(n);
  for (int r = 0; r < n; ++r) {
    for (int s = 0; s < n; ++s) {
      if (r == s) continue;
      Quaternion q(u.entry(r, s)[0].eval(p).real(),
                   u.entry(r, s)[1].eval(p).real(),
                   u.entry(r, s)[2].eval(p).real(),
                   u.entry(r, s)[3].eval(p).real());
      if (q.norm() > 1e-12 * scale)
        throw NotDiagonalAtP("U(p) has off-diagonal entry of norm " +
                             std::to_string(q.norm()));
    }
    diag[r] = u.entry(r, r)[0].eval(p).real();
    if (diag[r] <= 0.0)
      throw NotPositive("U(p) has non-positive diagonal entry " +
                        std::to_string(diag[r]));
  }

  double term1 = 0.0;
  for (int a = 0; a < axes; ++a)
    for (int s = 0; s < n; ++s)
      for (int t = 0; t < n; ++t) {
        const auto& q = u.entry(s, t);
        double n2 = 0.0;
        for (int c = 0; c < 4; ++c) {
          const double d = q[c].diff(a).eval(p).real();
          n2 += d * d;
        }
        term1 += n2 / (diag[s] * diag[t]);
      }
  term1 *= -kappa / n;

  double term2 = 0.0;
  for (int s = 0; s < n; ++s) {
    double lap = 0.0;
    for (int a = 0; a < axes; ++a)
      lap += u.entry(s, s)[0].diff(a).diff(a).eval(p).real();
    term2 += (kappa / n) * lap / diag[s];
  }
  return term1 + term2;
}

}  // namespace

double verify_delta_logdet(const HyperhermitianPolyMatrix& u,
                           const std::vector<double>& p, double kappa) {
  const int n = u.n();
  const int m = 4 * n;
  const std::vector<Poly> a = iota_poly(u);

  const RealMatrix a0 = eval_poly_matrix(a, m, p);
  const RealMatrix a0inv = lu_inverse(a0);

  // Delta log det(U) = (kappa/n) sum_a (1/4) d^2_a log det iota(U)
  double lhs = 0.0;
  std::vector<Poly> da(std::size_t(m) * m, Poly(u.nvars()));
  for (int axis = 0; axis < m; ++axis) {
    RealMatrix d1(m), d2(m);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) {
        const Poly& pij = a[std::size_t(i) * m + j];
        d1(i, j) = pij.diff(axis).eval(p).real();
        d2(i, j) = pij.diff(axis).diff(axis).eval(p).real();
      }
    const RealMatrix s = a0inv * d1;
    lhs += 0.25 * (trace_product(a0inv, d2) - trace_product(s, s));
  }
  lhs *= kappa / n;

  return std::fabs(lhs - delta_logdet_rhs(u, p, kappa));
}

double verify_delta_logdet_fd(const HyperhermitianPolyMatrix& u,
                              const std::vector<double>& p, double kappa) {
  const int n = u.n();
  const int axes = 4 * n;
  auto logdet = [&](const std::vector<double>& x) {
    return std::log(moore_det(u.evaluate(x)));
  };
  const double f0 = logdet(p);

  double lap = 0.0;
  for (int a = 0; a < axes; ++a) {
    double d[3];
    double h = 1e-2;
    for (int k = 0; k < 3; ++k, h *= 0.5) {
      std::vector<double> xp = p, xm = p;
      xp[a] += h;
      xm[a] -= h;
      d[k] = (logdet(xp) - 2.0 * f0 + logdet(xm)) / (h * h);
    }
    const double r1a = (4.0 * d[1] - d[0]) / 3.0;
    const double r1b = (4.0 * d[2] - d[1]) / 3.0;
    lap += (16.0 * r1b - r1a) / 15.0;
  }
  const double lhs = kappa / n * lap;
  return std::fabs(lhs - delta_logdet_rhs(u, p, kappa));
}

HyperhermitianPolyMatrix random_jet(Rng& rng, int n, bool quadratic) {
  const int axes = 4 * n;
  HyperhermitianPolyMatrix u(n, axes);
  const double lin_scale = 0.15 / axes;
  for (int r = 0; r < n; ++r)
    for (int s = r; s < n; ++s) {
      std::array<Poly, 4> q = {Poly(axes), Poly(axes), Poly(axes), Poly(axes)};
      const int ncomp = (r == s) ? 1 : 4;
      if (r == s) q[0] = Poly::constant(axes, 1.0 + rng.uniform(0.0, 1.0));
      for (int c = 0; c < ncomp; ++c)
        for (int a = 0; a < axes; ++a) {
          q[c] += Poly::variable(axes, a) * rng.uniform(-lin_scale, lin_scale);
          if (quadratic) {
            const Poly x = Poly::variable(axes, a);
            q[c] += x * x * rng.uniform(-lin_scale, lin_scale);
          }
        }
      u.set_entry(r, s, q);
    }
  return u;
}

CalibrationReport calibrate_kappa() {
  CalibrationReport rep;
  Rng rng(0x51aabbccddee0137ull);

  // route 1: direct metric/Hessian ratio on |q|^2 at n = 1
  Poly u1(4);
  for (int a = 0; a < 4; ++a) {
    const Poly x = Poly::variable(4, a);
    u1 += x * x;
  }
  const HyperhermitianMatrix g1 =
      metric_from_form(dd_J(1, u1), std::vector<double>(4, 0.0));
  const double kappa1 = g1(0, 0).w / 8.0;
  if (!(kappa1 > 0.0)) throw CalibrationMismatch("kappa route 1 not positive");

  // universality: same construction at n = 2
  Poly u2(8);
  for (int a = 0; a < 8; ++a) {
    const Poly x = Poly::variable(8, a);
    u2 += x * x;
  }
  const HyperhermitianMatrix g2 =
      metric_from_form(dd_J(2, u2), std::vector<double>(8, 0.0));
  double fond_n2 = 0.0;
  for (int r = 0; r < 2; ++r)
    for (int s = 0; s < 2; ++s) {
      const Quaternion want =
          (r == s) ? Quaternion::real(8.0 * kappa1) : Quaternion();
      fond_n2 = std::max(fond_n2, (g2(r, s) - want).norm());
    }
  const double kappa_n2 = g2(0, 0).w / 8.0;
  rep.residuals["fond_n2_crosscheck"] = fond_n2;
  rep.residuals["kappa_universality"] = std::fabs(kappa_n2 - kappa1);

  // route 2: linearized wedge ratio against kappa Re tr(G^{-1} H) on 20
  // random positive quadratics
  double route_spread = 0.0;
  double fond_random = 0.0;
  double roundtrip = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const int n = (trial % 2) + 1;
    const std::vector<double> origin(4 * n, 0.0);
    const HyperhermitianMatrix gr = random_posdef_hyperhermitian(rng, n);
    const PolyForm omega = hessian_form(gr);  // kappa-free construction
    const HyperhermitianMatrix gm = metric_from_form(omega, origin);
    fond_random =
        std::max(fond_random, entrywise_distance(gm, gr * kappa1));

    const HyperhermitianMatrix h = random_hyperhermitian(rng, n, 1.0);
    const PolyForm psi = hessian_form(h);
    const Complex top0 = top_coeff(wedge_pow(omega, n), origin);
    const Complex lin =
        double(n) * top_coeff(psi.wedge(wedge_pow(omega, n - 1)), origin) / top0;
    const double denom = re_trace_product(hh_inverse(gm), h);
    const double kappa2 = lin.real() / denom;
    route_spread = std::max(route_spread, std::fabs(kappa2 - kappa1));
    route_spread = std::max(route_spread, std::fabs(lin.imag()));

    roundtrip = std::max(
        roundtrip, entrywise_distance(
                       metric_from_form(matrix_to_form(gr, kappa1), origin), gr));
  }
  rep.residuals["fond_two_routes"] = route_spread;
  rep.residuals["fond_random_quadratics"] = fond_random;
  rep.residuals["metric_roundtrip"] = roundtrip;

  // c_grad from |del psi|^2 via the wedge quotient of Eq-style pairing
  double c_grad = 0.0;
  double c_spread = 0.0;
  double c_imag = 0.0;
  bool first = true;
  for (int trial = 0; trial < 12; ++trial) {
    const int n = (trial % 2) + 1;
    const int axes = 4 * n;
    const std::vector<double> origin(axes, 0.0);
    const HyperhermitianMatrix gr = random_posdef_hyperhermitian(rng, n);
    const PolyForm omega = hessian_form(gr);
    const HyperhermitianMatrix gm = metric_from_form(omega, origin);

    Poly psi(axes);
    std::vector<double> grad(axes);
    for (int a = 0; a < axes; ++a) {
      grad[a] = rng.uniform(-1.0, 1.0);
      psi += Poly::variable(axes, a) * grad[a];
    }
    const PolyForm dpsi = d_split(PolyForm::function(n, psi)).first;
    const Complex top0 = top_coeff(wedge_pow(omega, n), origin);
    const Complex wedgeval =
        top_coeff(dpsi.wedge(J_act(dpsi.conj_form())).wedge(wedge_pow(omega, n - 1)),
                  origin) /
        top0;
    const Complex norm2 = -double(2 * n) * wedgeval;

    const RealMatrix ginv = lu_inverse(iota(gm.quat()));
    double quad = 0.0;
    for (int a = 0; a < axes; ++a)
      for (int b = 0; b < axes; ++b) quad += ginv(a, b) * grad[a] * grad[b];

    const double c = norm2.real() / quad;
    c_imag = std::max(c_imag, std::fabs(norm2.imag()));
    if (first) {
      c_grad = c;
      first = false;
    } else {
      c_spread = std::max(c_spread, std::fabs(c - c_grad));
    }
  }
  rep.residuals["c_grad_spread"] = c_spread;
  rep.residuals["c_grad_imag"] = c_imag;

  rep.kappa = kappa1;
  rep.c_grad = c_grad;

  if (route_spread > 1e-9)
    throw CalibrationMismatch("kappa routes disagree by " +
                              std::to_string(route_spread));
  return rep;
}

}  // namespace qma
