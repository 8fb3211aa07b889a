#include <cmath>
#include <vector>

#include "doctest.h"
#include "qma/diagnostics.hpp"
#include "qma/errors.hpp"
#include "qma/flow.hpp"

using namespace qma;

namespace {

const double kKappa = 0.25;  // pinned by the calibration tests

PeriodicScalarField cosine_mode(GridShape shape, int axis, double amp) {
  return PeriodicScalarField::from_function(
      shape, [axis, amp](const std::vector<double>& x) {
        return amp * std::cos(2.0 * M_PI * x[axis]);
      });
}

FlowParams small_params(double tol = 1e-7) {
  FlowParams p;
  p.shape = GridShape{1, 8};
  p.kappa = kKappa;
  p.tol_conv = tol;
  p.max_steps = 50000;
  p.cadence = 10;
  return p;
}

}  // namespace

TEST_CASE("rhs at phi = 0 equals -F") {
  const FlowParams params = small_params();
  const PeriodicScalarField F = cosine_mode(params.shape, 0, 0.3);
  const RhsEval ev = evaluate_rhs(PeriodicScalarField(params.shape), params, F);
  double worst = 0.0;
  for (std::size_t p = 0; p < F.size(); ++p)
    worst = std::max(worst, std::fabs(ev.phi_t[p] + F[p]));
  CHECK(worst <= 1e-13);
  CHECK(ev.min_eig == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("rhs for a small sine perturbation matches the scalar reduction") {
  const FlowParams params = small_params();
  const GridShape shape{1, 16};
  FlowParams p16 = params;
  p16.shape = shape;
  const double eps = 0.01;
  const double w = 2.0 * M_PI;
  const PeriodicScalarField phi = PeriodicScalarField::from_function(
      shape, [&](const std::vector<double>& x) { return eps * std::sin(w * x[0]); });
  const PeriodicScalarField F(shape);
  const RhsEval ev = evaluate_rhs(phi, p16, F);
  // phi_t = log(1 + kappa * Delta phi) with Delta the FD4 Laplacian; compare
  // to the analytic Laplacian within the FD4 truncation bound
  const double bound =
      2.0 * kKappa * eps * std::pow(w, 6) * std::pow(shape.h(), 4) / 90.0;
  double worst = 0.0;
  for (std::size_t p = 0; p < phi.size(); ++p) {
    const std::vector<int> idx = unflatten(shape, p);
    const double s = std::sin(w * idx[0] * shape.h());
    const double expected = std::log(1.0 - kKappa * w * w * eps * s);
    worst = std::max(worst, std::fabs(ev.phi_t[p] - expected));
  }
  CHECK(worst <= bound);
}

TEST_CASE("rhs throws PositivityLost with the offending point") {
  const FlowParams params = small_params();
  // 1 + kappa * Delta phi dips negative for a large cosine
  const PeriodicScalarField phi = cosine_mode(params.shape, 0, 0.2);
  try {
    evaluate_rhs(phi, params, PeriodicScalarField(params.shape));
    FAIL("expected PositivityLost");
  } catch (const PositivityLost& e) {
    CHECK(e.min_eigenvalue <= params.eps_pos);
    CHECK(e.point < params.shape.npoints());
  }
}

TEST_CASE("F = 0 is stationary and converges at step 0") {
  const FlowParams params = small_params();
  FlowEngine engine(params, PeriodicScalarField(params.shape));
  const RunReport rep = engine.run({});
  CHECK(rep.converged);
  CHECK(rep.steps == 0);
  CHECK(engine.state().t == 0.0);
  CHECK(osc(engine.state().phi) == 0.0);
}

TEST_CASE("one Heun step from zero is -dt F to second order") {
  FlowParams params = small_params();
  const PeriodicScalarField F = cosine_mode(params.shape, 0, 0.3);
  FlowEngine engine(params, F);
  engine.current();
  engine.advance();
  const FlowState& st = engine.state();
  CHECK(st.step == 1);
  const double dt = params.dt0();
  CHECK(st.t == doctest::Approx(dt));
  // max |rhs change| over the step ~ kappa * max|Delta F| * dt
  const double lapF = 0.3 * 4.0 * M_PI * M_PI;
  const double bound = dt * dt * kKappa * lapF;
  double worst = 0.0;
  for (std::size_t p = 0; p < F.size(); ++p)
    worst = std::max(worst, std::fabs(st.phi[p] + dt * F[p]));
  CHECK(worst <= bound);
}

TEST_CASE("oversized dt triggers halving and still advances") {
  FlowParams params = small_params();
  params.dt0_override = 50.0;  // far beyond the stability limit
  const PeriodicScalarField F = cosine_mode(params.shape, 0, 0.15);
  FlowEngine engine(params, F);
  engine.advance();
  CHECK(engine.state().step == 1);
  CHECK(engine.state().dt < 50.0);
  // halvings reset the streak; the accepted attempt then counts as one
  CHECK(engine.state().accept_streak == 1);
}

TEST_CASE("StepFailure reports the offending point after 20 halvings") {
  FlowParams params = small_params();
  // phi = 0 sits exactly on the margin, so every halved stage still exits
  // the allowed cone
  params.eps_pos = 1.0 - 1e-12;
  const PeriodicScalarField F = cosine_mode(params.shape, 0, 0.2);
  FlowEngine engine(params, F);
  try {
    engine.advance();
    FAIL("expected StepFailure");
  } catch (const StepFailure& e) {
    CHECK(e.point < params.shape.npoints());
    CHECK(e.min_eigenvalue <= params.eps_pos);
  }
}

TEST_CASE("run converges and satisfies the monitors (small main run)") {
  FlowParams params = small_params(1e-8);
  const PeriodicScalarField F = cosine_mode(params.shape, 0, 0.3);
  FlowEngine engine(params, F);
  std::vector<StepTrace> traces;
  const RunReport rep = engine.run({}, &traces);
  CHECK(rep.converged);
  CHECK(rep.steps > 10);
  CHECK(rep.worst_max_principle <= 1e-7);
  CHECK(rep.worst_min_principle <= 1e-7);
  CHECK(rep.worst_f_increase <= 1e-8);
  CHECK(rep.worst_flow_identity <= 1e-10);
  CHECK(rep.min_eig_seen > params.eps_pos);
  CHECK(rep.final_osc_phi_t < params.tol_conv);

  // phi_t tends to the constant log b
  const double b = compute_b(F);
  const RhsEval ev = evaluate_rhs(engine.state().phi, params, F);
  double worst = 0.0;
  for (std::size_t p = 0; p < F.size(); ++p)
    worst = std::max(worst, std::fabs(ev.phi_t[p] - std::log(b)));
  CHECK(worst <= 1e-6);

  CHECK(traces.size() == std::size_t(rep.steps) + 1);
}

TEST_CASE("RK4 reaches the same stationary limit as Heun") {
  FlowParams params = small_params(1e-9);
  const PeriodicScalarField F = cosine_mode(params.shape, 0, 0.3);
  FlowEngine heun(params, F);
  heun.run({});
  FlowParams p4 = params;
  p4.stepper = Stepper::RK4;
  FlowEngine rk4(p4, F);
  rk4.run({});
  const PeriodicScalarField a = normalize(heun.state().phi);
  const PeriodicScalarField b = normalize(rk4.state().phi);
  double worst = 0.0;
  for (std::size_t p = 0; p < a.size(); ++p)
    worst = std::max(worst, std::fabs(a[p] - b[p]));
  CHECK(worst <= 1e-7);
}

TEST_CASE("spectral mode agrees with FD4 up to truncation") {
  FlowParams params = small_params(1e-9);
  const PeriodicScalarField F = cosine_mode(params.shape, 0, 0.3);
  FlowEngine fd(params, F);
  fd.run({});
  FlowParams ps = params;
  ps.deriv = DerivMode::Spectral;
  FlowEngine sp(ps, F);
  sp.run({});
  const PeriodicScalarField a = normalize(fd.state().phi);
  const PeriodicScalarField b = normalize(sp.state().phi);
  double worst = 0.0;
  for (std::size_t p = 0; p < a.size(); ++p)
    worst = std::max(worst, std::fabs(a[p] - b[p]));
  // FD4 truncation at N = 8 dominates the difference
  const double bound = 0.3 * std::pow(2.0 * M_PI / 8.0, 4) / 30.0;
  CHECK(worst <= bound);
  CHECK(worst >= 1e-9);
}

TEST_CASE("normalize") {
  const GridShape shape{1, 8};
  PeriodicScalarField c(shape);
  for (std::size_t p = 0; p < c.size(); ++p) c[p] = 4.2;
  const PeriodicScalarField z = normalize(c);
  CHECK(field_max(z) <= 1e-14);
  CHECK(field_min(z) >= -1e-14);

  const PeriodicScalarField f = PeriodicScalarField::from_function(
      shape, [](const std::vector<double>& x) {
        return std::sin(2.0 * M_PI * x[0]) + 0.7;
      });
  const PeriodicScalarField nf = normalize(f);
  CHECK(std::fabs(mean(nf)) <= 1e-13);
  const PeriodicScalarField nnf = normalize(nf);
  double worst = 0.0;
  for (std::size_t p = 0; p < nf.size(); ++p)
    worst = std::max(worst, std::fabs(nf[p] - nnf[p]));
  CHECK(worst <= 1e-15);
}

TEST_CASE("n = 2 short flow maintains positivity and the monitors") {
  FlowParams params;
  params.shape = GridShape{2, 5};
  params.kappa = kKappa;
  params.tol_conv = 1e-8;
  params.max_steps = 15;
  params.cadence = 5;
  const PeriodicScalarField F = PeriodicScalarField::from_function(
      params.shape, [](const std::vector<double>& x) {
        return 0.1 * (std::cos(2.0 * M_PI * x[0]) + std::cos(2.0 * M_PI * x[1]));
      });
  FlowEngine engine(params, F);
  std::vector<StepTrace> traces;
  const RunReport rep = engine.run({}, &traces);
  CHECK_FALSE(rep.converged);  // budget-limited on purpose
  CHECK(rep.steps == 15);
  CHECK(rep.worst_max_principle <= 1e-7);
  CHECK(rep.worst_f_increase <= 1e-8);
  CHECK(rep.worst_flow_identity <= 1e-10);
  CHECK(rep.min_eig_seen > params.eps_pos);
}

TEST_CASE("n = 2 pointwise density and eigenvalue match the matrix routes") {
  FlowParams params;
  params.shape = GridShape{2, 5};
  params.kappa = kKappa;
  const PeriodicScalarField F = PeriodicScalarField::from_function(
      params.shape, [](const std::vector<double>& x) {
        return 0.08 * (std::cos(2.0 * M_PI * x[0]) +
                       std::cos(2.0 * M_PI * (x[1] + x[4])));
      });
  FlowEngine engine(params, F);
  for (int i = 0; i < 5; ++i) engine.advance();
  const PeriodicScalarField& phi = engine.state().phi;
  const RhsEval ev = evaluate_rhs(phi, params, F);
  const HyperhermitianField hess = quat_hessian(phi);

  double worst_det = 0.0;
  double worst_eig = 0.0;
  for (std::size_t p = 0; p < phi.size(); p += 28571) {
    const HyperhermitianMatrix u =
        HyperhermitianMatrix::identity(2) + hess.at(p) * kKappa;
    worst_det = std::max(worst_det, std::fabs(ev.density[p] - moore_det(u)));
    // closed-form min eigenvalue against the iota-spectrum route
    const std::vector<double> lam = hh_eigenvalues(u);
    const double a = u(0, 0).w, b = u(1, 1).w;
    const double disc =
        std::sqrt((a - b) * (a - b) + 4.0 * u(0, 1).norm2());
    worst_eig = std::max(worst_eig,
                         std::fabs(lam.front() - 0.5 * ((a + b) - disc)));
  }
  CHECK(worst_det <= 1e-12);
  CHECK(worst_eig <= 1e-12);
}

TEST_CASE("oscillation of phi is stable under grid refinement") {
  auto run_osc = [](int N) {
    FlowParams params;
    params.shape = GridShape{1, N};
    params.kappa = kKappa;
    params.tol_conv = 1e-8;
    params.max_steps = 100000;
    const PeriodicScalarField F = cosine_mode(params.shape, 0, 0.3);
    FlowEngine engine(params, F);
    engine.run({});
    return osc(engine.state().phi);
  };
  const double o8 = run_osc(8);
  const double o16 = run_osc(16);
  CHECK(o8 > 0.0);
  CHECK(std::fabs(o16 - o8) <= 0.05 * o8);
}

TEST_CASE("running Laplacian bound: late maxima stay under twice the early one") {
  FlowParams params = small_params(1e-8);
  const PeriodicScalarField F = cosine_mode(params.shape, 0, 0.3);
  FlowEngine engine(params, F);
  std::vector<StepTrace> traces;
  engine.run({}, &traces);
  REQUIRE(traces.size() > 20);
  const std::size_t head = std::max<std::size_t>(1, traces.size() / 10);
  double early = -1e300, all = -1e300;
  for (std::size_t i = 0; i < traces.size(); ++i) {
    if (i < head) early = std::max(early, traces[i].max_lap);
    all = std::max(all, traces[i].max_lap);
  }
  CHECK(all <= 2.0 * std::max(early, 1e-12));
}

TEST_CASE("b recovered from the converged density matches compute_b") {
  FlowParams params = small_params(1e-8);
  const PeriodicScalarField F = cosine_mode(params.shape, 0, 0.3);
  FlowEngine engine(params, F);
  engine.run({});
  const RhsEval ev = evaluate_rhs(engine.state().phi, params, F);
  PeriodicScalarField logrho_minus_F(params.shape);
  for (std::size_t p = 0; p < F.size(); ++p)
    logrho_minus_F[p] = std::log(ev.density[p]) - F[p];
  const double b_rec = std::exp(mean(logrho_minus_F));
  CHECK(std::fabs(b_rec - compute_b(F)) <= 1e-6);
}
