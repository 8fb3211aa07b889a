#include "qma/flow.hpp"

#include <algorithm>
#include <cmath>

#include "qma/errors.hpp"

namespace qma {

PeriodicScalarField normalize(const PeriodicScalarField& phi) {
  const double m = mean(phi);
  PeriodicScalarField out = phi;
  for (std::size_t p = 0; p < out.size(); ++p) out[p] -= m;
  return out;
}

RhsEval evaluate_rhs(const PeriodicScalarField& phi, const FlowParams& params,
                     const PeriodicScalarField& F, HessianWorkspace* ws) {
  const GridShape shape = phi.shape();
  const int n = shape.n;
  const double kappa = params.kappa;
  const HyperhermitianField hess = quat_hessian(phi, params.deriv, ws);

  RhsEval ev;
  ev.phi_t = PeriodicScalarField(shape);
  ev.density = PeriodicScalarField(shape);
  ev.trace = PeriodicScalarField(shape);
  const std::size_t npts = shape.npoints();

  double min_eig = std::numeric_limits<double>::infinity();
  std::size_t argmin = 0;

  if (n == 1) {
    const double* lap = hess.ch[0].data();
    double* density = ev.density.data();
    double* trace = ev.trace.data();
    for (std::size_t p = 0; p < npts; ++p) {
      const double d = 1.0 + kappa * lap[p];
      density[p] = d;
      trace[p] = lap[p];
      if (d < min_eig) {
        min_eig = d;
        argmin = p;
      }
    }
  } else {
    const double* h11 = hess.ch[hess.diag_channel(0)].data();
    const double* h22 = hess.ch[hess.diag_channel(1)].data();
    const double* qw = hess.ch[hess.offdiag_channel(0, 1, 0)].data();
    const double* qx = hess.ch[hess.offdiag_channel(0, 1, 1)].data();
    const double* qy = hess.ch[hess.offdiag_channel(0, 1, 2)].data();
    const double* qz = hess.ch[hess.offdiag_channel(0, 1, 3)].data();
    double* density = ev.density.data();
    double* trace = ev.trace.data();
    for (std::size_t p = 0; p < npts; ++p) {
      const double a = 1.0 + kappa * h11[p];
      const double b = 1.0 + kappa * h22[p];
      const double q2 = kappa * kappa *
                        (qw[p] * qw[p] + qx[p] * qx[p] + qy[p] * qy[p] +
                         qz[p] * qz[p]);
      density[p] = a * b - q2;
      trace[p] = h11[p] + h22[p];
      const double disc = std::sqrt((a - b) * (a - b) + 4.0 * q2);
      const double lmin = 0.5 * ((a + b) - disc);
      if (lmin < min_eig) {
        min_eig = lmin;
        argmin = p;
      }
    }
  }

  ev.min_eig = min_eig;
  ev.argmin = argmin;
  if (min_eig <= params.eps_pos) throw PositivityLost(argmin, min_eig);

  const double* density = ev.density.data();
  const double* f = F.data();
  double* phi_t = ev.phi_t.data();
  double maxr = -std::numeric_limits<double>::infinity();
  double minr = std::numeric_limits<double>::infinity();
  for (std::size_t p = 0; p < npts; ++p) {
    const double v = std::log(density[p]) - f[p];
    phi_t[p] = v;
    maxr = std::max(maxr, v);
    minr = std::min(minr, v);
  }
  ev.max_phi_t = maxr;
  ev.min_phi_t = minr;
  return ev;
}

FlowEngine::FlowEngine(FlowParams params, PeriodicScalarField F)
    : params_(params), F_(std::move(F)) {
  state_ = initial_state(params_);
}

FlowState FlowEngine::initial_state(const FlowParams& params) {
  FlowState s;
  s.phi = PeriodicScalarField(params.shape);  // phi(x, 0) = 0
  s.t = 0.0;
  s.step = 0;
  s.dt = params.dt0();
  s.accept_streak = 0;
  return s;
}

const RhsEval& FlowEngine::current() {
  if (!cur_valid_) {
    cur_ = evaluate_rhs(state_.phi, params_, F_, &ws_);
    cur_valid_ = true;
  }
  return cur_;
}

void FlowEngine::set_state(FlowState s) {
  state_ = std::move(s);
  cur_valid_ = false;
}

namespace {

PeriodicScalarField axpy(const PeriodicScalarField& x, double a,
                         const PeriodicScalarField& y) {
  PeriodicScalarField out = x;
  for (std::size_t p = 0; p < out.size(); ++p) out[p] += a * y[p];
  return out;
}

}  // namespace

void FlowEngine::advance() {
  current();
  std::size_t fail_point = 0;
  double fail_eig = 0.0;
  for (int halving = 0; halving <= 20; ++halving) {
    const double dt = state_.dt;
    try {
      PeriodicScalarField next(params_.shape);
      if (params_.stepper == Stepper::Heun) {
        const PeriodicScalarField stage = axpy(state_.phi, dt, cur_.phi_t);
        const RhsEval e2 = evaluate_rhs(stage, params_, F_, &ws_);
        next = state_.phi;
        for (std::size_t p = 0; p < next.size(); ++p)
          next[p] += 0.5 * dt * (cur_.phi_t[p] + e2.phi_t[p]);
      } else {
        const RhsEval e2 = evaluate_rhs(axpy(state_.phi, 0.5 * dt, cur_.phi_t),
                                        params_, F_, &ws_);
        const RhsEval e3 = evaluate_rhs(axpy(state_.phi, 0.5 * dt, e2.phi_t),
                                        params_, F_, &ws_);
        const RhsEval e4 =
            evaluate_rhs(axpy(state_.phi, dt, e3.phi_t), params_, F_, &ws_);
        next = state_.phi;
        for (std::size_t p = 0; p < next.size(); ++p)
          next[p] += dt / 6.0 *
                     (cur_.phi_t[p] + 2.0 * e2.phi_t[p] + 2.0 * e3.phi_t[p] +
                      e4.phi_t[p]);
      }
      // accepted states must satisfy the positivity invariant themselves
      RhsEval enew = evaluate_rhs(next, params_, F_, &ws_);
      state_.phi = std::move(next);
      state_.t += dt;
      state_.step += 1;
      state_.accept_streak += 1;
      if (state_.accept_streak >= 10) {
        state_.dt = std::min(1.2 * state_.dt, params_.dt0());
        state_.accept_streak = 0;
      }
      cur_ = std::move(enew);
      cur_valid_ = true;
      return;
    } catch (const PositivityLost& e) {
      fail_point = e.point;
      fail_eig = e.min_eigenvalue;
      state_.dt *= 0.5;
      state_.accept_streak = 0;
    }
  }
  throw StepFailure(fail_point, fail_eig);
}

double FlowEngine::step_f() {
  return weighted_integral(cur_.phi_t, cur_.density);
}

RunReport FlowEngine::run(const RunHooks& hooks, std::vector<StepTrace>* traces,
                          bool record_initial) {
  RunReport rep;
  current();

  auto flow_identity_defect = [&]() {
    double worst = 0.0;
    for (std::size_t p = 0; p < cur_.density.size(); ++p)
      worst = std::max(worst,
                       std::fabs(cur_.density[p] - std::exp(F_[p] + cur_.phi_t[p])));
    return worst;
  };
  // a resumed state comes from a snapshot, which is always written right
  // after a record of the same step
  std::int64_t last_recorded = record_initial ? -1 : state_.step;
  auto emit_record = [&]() {
    rep.worst_flow_identity =
        std::max(rep.worst_flow_identity, flow_identity_defect());
    if (hooks.on_record) hooks.on_record(state_, cur_);
    last_recorded = state_.step;
  };
  auto emit_trace = [&]() {
    if (!traces) return;
    StepTrace tr;
    tr.step = state_.step;
    tr.t = state_.t;
    tr.dt = state_.dt;
    tr.max_rhs = cur_.max_phi_t;
    tr.min_rhs = cur_.min_phi_t;
    tr.osc_rhs = cur_.max_phi_t - cur_.min_phi_t;
    tr.f = step_f();
    tr.max_lap =
        (params_.kappa / params_.shape.n) * field_max(cur_.trace);
    traces->push_back(tr);
  };

  if (record_initial) {
    emit_trace();
    if (state_.step % params_.cadence == 0) {
      emit_record();
      if (hooks.on_snapshot) hooks.on_snapshot(state_, false);
    }
  }
  if (hooks.should_halt && hooks.should_halt(state_)) {
    rep.halted = true;
    rep.steps = state_.step;
    rep.final_osc_phi_t = cur_.max_phi_t - cur_.min_phi_t;
    return rep;
  }

  double prev_max = cur_.max_phi_t;
  double prev_min = cur_.min_phi_t;
  double prev_f = step_f();
  rep.min_eig_seen = std::min(rep.min_eig_seen, cur_.min_eig);

  while (true) {
    const double oscv = cur_.max_phi_t - cur_.min_phi_t;
    if (oscv < params_.tol_conv) {
      rep.converged = true;
      break;
    }
    if (state_.step >= params_.max_steps) break;

    const double dt_before = state_.dt;
    advance();
    if (state_.dt < dt_before) rep.halvings += 1;

    const double f_now = step_f();
    rep.worst_max_principle =
        std::max(rep.worst_max_principle,
                 (cur_.max_phi_t - prev_max) / (1.0 + std::fabs(prev_max)));
    rep.worst_min_principle =
        std::max(rep.worst_min_principle,
                 (prev_min - cur_.min_phi_t) / (1.0 + std::fabs(prev_min)));
    rep.worst_f_increase = std::max(
        rep.worst_f_increase, (f_now - prev_f) / (1.0 + std::fabs(prev_f)));
    prev_max = cur_.max_phi_t;
    prev_min = cur_.min_phi_t;
    prev_f = f_now;
    rep.min_eig_seen = std::min(rep.min_eig_seen, cur_.min_eig);

    emit_trace();
    if (state_.step % params_.cadence == 0) {
      emit_record();
      if (hooks.on_snapshot) hooks.on_snapshot(state_, false);
    }
    if (hooks.should_halt && hooks.should_halt(state_)) {
      rep.halted = true;
      rep.steps = state_.step;
      rep.final_osc_phi_t = cur_.max_phi_t - cur_.min_phi_t;
      return rep;
    }
  }

  if (last_recorded != state_.step) emit_record();
  if (hooks.on_snapshot) hooks.on_snapshot(state_, true);
  rep.steps = state_.step;
  rep.final_osc_phi_t = cur_.max_phi_t - cur_.min_phi_t;
  return rep;
}

}  // namespace qma
