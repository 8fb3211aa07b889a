#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <vector>

#include "qma/grid.hpp"

namespace qma {

enum class Stepper { Heun, RK4 };

struct FlowParams {
  GridShape shape;
  double kappa = 0.25;
  double sigma = 0.2;      // dt0 safety factor
  double eps_pos = 1e-6;   // positivity margin
  double tol_conv = 1e-8;  // convergence: osc(phi_t) below this
  std::int64_t max_steps = 100000;
  std::int64_t cadence = 25;
  Stepper stepper = Stepper::Heun;
  DerivMode deriv = DerivMode::FD4;
  double dt0_override = 0.0;

  // parabolic CFL heuristic for the linearization kappa*Laplacian at phi = 0
  double dt0() const {
    if (dt0_override > 0.0) return dt0_override;
    const double h = shape.h();
    return sigma * h * h / (4.0 * shape.n * kappa);
  }
};

struct FlowState {
  PeriodicScalarField phi;
  double t = 0.0;
  std::int64_t step = 0;
  double dt = 0.0;
  std::int64_t accept_streak = 0;
};

// rhs evaluation at one state: phi_t = log moore_det(Id + kappa Hess phi) - F
// together with the density and Hessian trace monitors.
struct RhsEval {
  PeriodicScalarField phi_t;
  PeriodicScalarField density;  // moore_det(Id + kappa Hess phi)
  PeriodicScalarField trace;    // sum_r (Hess phi)_rr
  double min_eig = 0.0;
  std::size_t argmin = 0;
  double max_phi_t = 0.0;
  double min_phi_t = 0.0;
};

struct StepTrace {
  std::int64_t step;
  double t, dt;
  double max_rhs, min_rhs, osc_rhs;
  double f;
  double max_lap;
};

struct RunReport {
  bool converged = false;
  bool halted = false;  // stopped by should_halt (simulated interruption)
  std::int64_t steps = 0;
  double final_osc_phi_t = 0.0;
  // worst per-step increase of max(phi_t) / decrease of min(phi_t),
  // normalized by 1 + |previous value|
  double worst_max_principle = -std::numeric_limits<double>::infinity();
  double worst_min_principle = -std::numeric_limits<double>::infinity();
  double worst_f_increase = -std::numeric_limits<double>::infinity();
  // max over records of max_M |density - e^{F + phi_t}|
  double worst_flow_identity = 0.0;
  double min_eig_seen = std::numeric_limits<double>::infinity();
  int halvings = 0;
};

PeriodicScalarField normalize(const PeriodicScalarField& phi);

// Pure rhs evaluation; throws PositivityLost when the minimum eigenvalue of
// Id + kappa*Hess_H(phi) at any grid point drops to eps_pos or below.
RhsEval evaluate_rhs(const PeriodicScalarField& phi, const FlowParams& params,
                     const PeriodicScalarField& F,
                     HessianWorkspace* ws = nullptr);

class FlowEngine {
 public:
  FlowEngine(FlowParams params, PeriodicScalarField F);

  static FlowState initial_state(const FlowParams& params);

  const FlowParams& params() const { return params_; }
  const PeriodicScalarField& forcing() const { return F_; }
  const FlowState& state() const { return state_; }
  const RhsEval& current();

  void set_state(FlowState s);

  // One accepted step; halves dt on PositivityLost in any stage (at most 20
  // times) and throws StepFailure when that budget is exhausted.
  void advance();

  struct RunHooks {
    std::function<void(const FlowState&, const RhsEval&)> on_record;
    std::function<void(const FlowState&, bool final)> on_snapshot;
    // Returning true aborts the loop like a process kill: no terminal
    // record or snapshot is written. Determinism tests resume from the last
    // cadence snapshot afterwards.
    std::function<bool(const FlowState&)> should_halt;
  };

  // Iterates until osc(phi_t) < tol_conv or max_steps accepted steps.
  // Records fire at steps divisible by cadence plus the terminal step;
  // record_initial = false suppresses the record/snapshot of the state the
  // run starts from (resume).
  RunReport run(const RunHooks& hooks, std::vector<StepTrace>* traces = nullptr,
                bool record_initial = true);

 private:
  double step_f();

  FlowParams params_;
  PeriodicScalarField F_;
  FlowState state_;
  RhsEval cur_;
  bool cur_valid_ = false;
  HessianWorkspace ws_;
};

}  // namespace qma
