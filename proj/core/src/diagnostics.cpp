#include "qma/diagnostics.hpp"

#include <cmath>
#include <cstdio>

#include "qma/errors.hpp"
#include "qma/reduce.hpp"

namespace qma {

double compute_b(const PeriodicScalarField& F) {
  const double* f = F.data();
  const double s =
      pairwise_sum(F.size(), [f](std::size_t i) { return std::exp(f[i]); });
  return double(F.size()) / s;
}

PeriodicScalarField volume_density(const PeriodicScalarField& phi,
                                   const FlowParams& params,
                                   const PeriodicScalarField& F) {
  return evaluate_rhs(phi, params, F).density;
}

double energy_f(const PeriodicScalarField& phi, const DiagContext& ctx) {
  const RhsEval ev = evaluate_rhs(phi, ctx.params, ctx.F);
  return weighted_integral(ev.phi_t, ev.density);
}

namespace {

// grad(psi)^T iota(G_phi)^{-1} grad(psi) against the evolving volume, with
// G_phi = Id + kappa * Hess_H(phi) read off the Hessian channels.
PeriodicScalarField gradient_quadratic_form(const PeriodicScalarField& psi,
                                            const PeriodicScalarField& phi,
                                            const FlowParams& params) {
  const GridShape shape = phi.shape();
  const int n = shape.n;
  const int axes = shape.axes();
  const double kappa = params.kappa;

  std::vector<PeriodicScalarField> grad(axes, PeriodicScalarField(shape));
  for (int a = 0; a < axes; ++a)
    apply_partial(psi, a, 1, params.deriv, grad[a]);

  const HyperhermitianField hess = quat_hessian(phi, params.deriv);
  PeriodicScalarField out(shape);

  if (n == 1) {
    const double* lap = hess.ch[0].data();
    for (std::size_t p = 0; p < out.size(); ++p) {
      double g2 = 0.0;
      for (int a = 0; a < axes; ++a) g2 += grad[a][p] * grad[a][p];
      out[p] = g2 / (1.0 + kappa * lap[p]);
    }
    return out;
  }

  const double* h11 = hess.ch[hess.diag_channel(0)].data();
  const double* h22 = hess.ch[hess.diag_channel(1)].data();
  const double* qw = hess.ch[hess.offdiag_channel(0, 1, 0)].data();
  const double* qx = hess.ch[hess.offdiag_channel(0, 1, 1)].data();
  const double* qy = hess.ch[hess.offdiag_channel(0, 1, 2)].data();
  const double* qz = hess.ch[hess.offdiag_channel(0, 1, 3)].data();
  QuatMatrix m(2);
  for (std::size_t p = 0; p < out.size(); ++p) {
    const double a = 1.0 + kappa * h11[p];
    const double b = 1.0 + kappa * h22[p];
    const Quaternion q(kappa * qw[p], kappa * qx[p], kappa * qy[p],
                       kappa * qz[p]);
    const double det = a * b - q.norm2();
    // inverse of [[a, q], [conj q, b]] is [[b, -q], [-conj q, a]] / det
    m(0, 0) = Quaternion::real(b / det);
    m(1, 1) = Quaternion::real(a / det);
    m(0, 1) = q * (-1.0 / det);
    m(1, 0) = m(0, 1).conj();
    const RealMatrix im = iota(m);
    double acc = 0.0;
    for (int i = 0; i < 8; ++i) {
      const double vi = grad[i][p];
      if (vi == 0.0) continue;
      for (int j = 0; j < 8; ++j) acc += vi * im(i, j) * grad[j][p];
    }
    out[p] = acc;
  }
  return out;
}

}  // namespace

double dissipation_D(const PeriodicScalarField& phi, const DiagContext& ctx) {
  const RhsEval ev = evaluate_rhs(phi, ctx.params, ctx.F);
  const PeriodicScalarField qf =
      gradient_quadratic_form(ev.phi_t, phi, ctx.params);
  return 0.5 * ctx.c_grad * weighted_integral(qf, ev.density);
}

double mabuchi_M(const PeriodicScalarField& phi, const DiagContext& ctx) {
  const RhsEval ev = evaluate_rhs(phi, ctx.params, ctx.F);
  const double* d = ev.density.data();
  const double s = pairwise_sum(
      ev.density.size(), [d](std::size_t i) { return std::log(d[i]) * d[i]; });
  return s / double(ev.density.size());
}

double elliptic_residual(const PeriodicScalarField& phi,
                         const DiagContext& ctx) {
  const RhsEval ev = evaluate_rhs(phi, ctx.params, ctx.F);
  double worst = 0.0;
  for (std::size_t p = 0; p < ev.density.size(); ++p)
    worst = std::max(worst,
                     std::fabs(ev.density[p] - ctx.b * std::exp(ctx.F[p])));
  return worst;
}

DiagnosticsRecord bound_monitors(const FlowState& state,
                                 const DiagContext& ctx) {
  const RhsEval ev = evaluate_rhs(state.phi, ctx.params, ctx.F);
  return make_record(state, ev, ctx);
}

DiagnosticsRecord make_record(const FlowState& state, const RhsEval& eval,
                              const DiagContext& ctx) {
  const FlowParams& params = ctx.params;
  const int n = params.shape.n;
  const double kappa = params.kappa;

  DiagnosticsRecord rec;
  rec.step = state.step;
  rec.t = state.t;
  rec.dt = state.dt;
  rec.max_phi_t = eval.max_phi_t;
  rec.min_phi_t = eval.min_phi_t;
  rec.osc_phi = osc(state.phi);
  rec.max_lap = (kappa / n) * field_max(eval.trace);

  double maxq = -std::numeric_limits<double>::infinity();
  for (std::size_t p = 0; p < eval.trace.size(); ++p) {
    const double tr_g = n + kappa * eval.trace[p];  // trace of Id + kappa H
    const double q = 2.0 * std::sqrt(kappa / n * tr_g) - state.phi[p];
    maxq = std::max(maxq, q);
  }
  rec.maxQ = maxq;

  rec.f = weighted_integral(eval.phi_t, eval.density);
  const PeriodicScalarField qf =
      gradient_quadratic_form(eval.phi_t, state.phi, params);
  rec.D = 0.5 * ctx.c_grad * weighted_integral(qf, eval.density);

  const double* d = eval.density.data();
  rec.M = pairwise_sum(eval.density.size(),
                       [d](std::size_t i) { return std::log(d[i]) * d[i]; }) /
          double(eval.density.size());

  double worst = 0.0;
  for (std::size_t p = 0; p < eval.density.size(); ++p)
    worst = std::max(worst,
                     std::fabs(eval.density[p] - ctx.b * std::exp(ctx.F[p])));
  rec.residual = worst;
  rec.b = ctx.b;
  rec.f_fd = 0.0;
  return rec;
}

namespace {

// derivative at tau of the parabola through (t0,f0),(t1,f1),(t2,f2)
double lagrange_deriv(double t0, double t1, double t2, double f0, double f1,
                      double f2, double tau) {
  return f0 * (2.0 * tau - t1 - t2) / ((t0 - t1) * (t0 - t2)) +
         f1 * (2.0 * tau - t0 - t2) / ((t1 - t0) * (t1 - t2)) +
         f2 * (2.0 * tau - t0 - t1) / ((t2 - t0) * (t2 - t1));
}

}  // namespace

void fill_f_fd(std::vector<DiagnosticsRecord>& records) {
  const std::size_t n = records.size();
  if (n == 0) return;
  if (n == 1) {
    records[0].f_fd = 0.0;
    return;
  }
  if (n == 2) {
    const double s =
        (records[1].f - records[0].f) / (records[1].t - records[0].t);
    records[0].f_fd = s;
    records[1].f_fd = s;
    return;
  }
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t i = k;
    if (k == 0) i = 1;
    if (k == n - 1) i = n - 2;
    const DiagnosticsRecord& a = records[i - 1];
    const DiagnosticsRecord& b = records[i];
    const DiagnosticsRecord& c = records[i + 1];
    records[k].f_fd =
        lagrange_deriv(a.t, b.t, c.t, a.f, b.f, c.f, records[k].t);
  }
}

std::string format_g17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string diagnostics_csv(std::vector<DiagnosticsRecord> records) {
  fill_f_fd(records);
  std::string out =
      "step,t,dt,max_phi_t,min_phi_t,osc_phi,max_lap,maxQ,f,D,f_fd,M,residual,"
      "b\n";
  for (const DiagnosticsRecord& r : records) {
    out += std::to_string(r.step);
    const double cols[] = {r.t,    r.dt, r.max_phi_t, r.min_phi_t, r.osc_phi,
                           r.max_lap, r.maxQ, r.f,      r.D,        r.f_fd,
                           r.M,    r.residual, r.b};
    for (double v : cols) {
      out += ',';
      out += format_g17(v);
    }
    out += '\n';
  }
  return out;
}

}  // namespace qma
