#include "qma/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>

#include "qma/errors.hpp"
#include "qma/forms.hpp"
#include "qma/oracle.hpp"
#include "qma/rng.hpp"

namespace qma::cli {

namespace fs = std::filesystem;

namespace {

std::string step_stem(std::int64_t step) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%09lld", (long long)step);
  return buf;
}

int run_engine_and_write(FlowEngine& engine, const RunConfig& cfg,
                         double kappa, double c_grad,
                         std::vector<DiagnosticsRecord> records,
                         bool record_initial, std::ostream& log,
                         RunOutputs* out, std::int64_t halt_after_step = -1) {
  const fs::path out_dir = cfg.out_dir;
  fs::create_directories(out_dir / "snapshots");

  DiagContext ctx{engine.params(), engine.forcing(),
                  compute_b(engine.forcing()), c_grad};
  std::string last_manifest;

  FlowEngine::RunHooks hooks;
  hooks.on_record = [&](const FlowState& st, const RhsEval& ev) {
    records.push_back(make_record(st, ev, ctx));
  };
  hooks.on_snapshot = [&](const FlowState& st, bool) {
    const std::string stem = step_stem(st.step);
    const fs::path phi_path = out_dir / "snapshots" / ("phi_" + stem + ".f64");
    const fs::path rec_path =
        out_dir / "snapshots" / ("records_" + stem + ".csv");
    const fs::path man_path =
        out_dir / "snapshots" / ("manifest_" + stem + ".json");
    write_field_snapshot(phi_path.string(), st.phi);
    write_text_file(rec_path.string(), records_csv(records));
    Manifest man;
    man.step = st.step;
    man.t = st.t;
    man.dt = st.dt;
    man.accept_streak = st.accept_streak;
    man.config = cfg;
    man.config_hash = config_hash_hex(cfg);
    man.kappa = kappa;
    man.c_grad = c_grad;
    man.phi_file = "phi_" + stem + ".f64";
    man.records_file = "records_" + stem + ".csv";
    write_manifest(man_path.string(), man);
    last_manifest = man_path.string();
  };

  if (halt_after_step >= 0)
    hooks.should_halt = [halt_after_step](const FlowState& st) {
      return st.step >= halt_after_step;
    };

  std::vector<StepTrace> traces;
  RunReport report;
  try {
    report = engine.run(hooks, &traces, record_initial);
  } catch (const StepFailure& e) {
    log << "step failure: " << e.what() << "\n";
    return 3;
  }
  if (report.halted) {
    log << "halted at step " << report.steps << " (simulated interruption)\n";
    if (out) {
      out->report = report;
      out->records = std::move(records);
      out->traces = std::move(traces);
      out->last_manifest_path = last_manifest;
      out->kappa = kappa;
      out->c_grad = c_grad;
      out->b = ctx.b;
    }
    return 1;
  }

  const fs::path diag_path = out_dir / "diagnostics.csv";
  write_text_file(diag_path.string(), diagnostics_csv(records));
  const fs::path final_phi = out_dir / "final_phi.f64";
  write_field_snapshot(final_phi.string(), engine.state().phi);

  Summary summary;
  summary.converged = report.converged;
  summary.steps = report.steps;
  summary.final_residual = records.empty() ? 0.0 : records.back().residual;
  summary.b = ctx.b;
  summary.f_final = records.empty() ? 0.0 : records.back().f;
  const fs::path summary_path = out_dir / "summary.json";
  write_summary(summary_path.string(), summary);

  log << (report.converged ? "converged" : "not converged") << " after "
      << report.steps << " steps, residual "
      << format_g17(summary.final_residual) << "\n";

  if (out) {
    out->report = report;
    out->records = std::move(records);
    out->traces = std::move(traces);
    out->final_phi = engine.state().phi;
    out->diagnostics_path = diag_path.string();
    out->summary_path = summary_path.string();
    out->final_phi_path = final_phi.string();
    out->last_manifest_path = last_manifest;
    out->b = ctx.b;
    out->kappa = kappa;
    out->c_grad = c_grad;
  }
  return (report.converged && summary.final_residual <= cfg.residual_tol) ? 0
                                                                          : 1;
}

}  // namespace

int cmd_calibrate(const std::string& out_path, std::ostream& log) {
  CalibrationReport rep;
  try {
    rep = calibrate_kappa();
  } catch (const CalibrationMismatch& e) {
    log << "calibration mismatch: " << e.what() << "\n";
    return 2;
  }
  bool ok = true;
  for (const auto& [name, value] : rep.residuals) {
    log << "calibration residual " << name << " = " << format_g17(value)
        << "\n";
    if (value > 1e-9) ok = false;
  }
  log << "kappa = " << format_g17(rep.kappa)
      << ", c_grad = " << format_g17(rep.c_grad) << "\n";
  write_calibration(out_path, rep);
  if (!ok) {
    log << "calibration residuals exceed 1e-9\n";
    return 2;
  }
  return 0;
}

int cmd_run(const RunConfig& cfg, std::ostream& log, RunOutputs* out,
            std::int64_t halt_after_step) {
  try {
    const CalibrationReport calib = read_calibration(cfg.calibration_path);
    const FlowParams params = flow_params_from_config(cfg, calib.kappa);
    FlowEngine engine(params, build_forcing(cfg));
    return run_engine_and_write(engine, cfg, calib.kappa, calib.c_grad, {},
                                true, log, out, halt_after_step);
  } catch (const StepFailure& e) {
    log << "step failure: " << e.what() << "\n";
    return 3;
  } catch (const Error& e) {
    log << "error: " << e.what() << "\n";
    return 1;
  }
}

int cmd_resume(const std::string& manifest_path, std::ostream& log,
               RunOutputs* out) {
  Manifest man;
  std::vector<DiagnosticsRecord> records;
  FlowState state;
  try {
    man = read_manifest(manifest_path);
    if (config_hash_hex(man.config) != man.config_hash)
      throw ConfigHashMismatch("manifest config hash does not match");
    const fs::path dir = fs::path(manifest_path).parent_path();
    state.phi = read_field_snapshot((dir / man.phi_file).string());
    records = parse_records_csv(
        read_text_file((dir / man.records_file).string()));
    if (!(state.phi.shape() == GridShape{man.config.n, man.config.N}))
      throw Error("snapshot shape does not match the manifest config");
  } catch (const Error& e) {
    log << "resume mismatch: " << e.what() << "\n";
    return 4;
  }
  state.t = man.t;
  state.step = man.step;
  state.dt = man.dt;
  state.accept_streak = man.accept_streak;

  try {
    const FlowParams params = flow_params_from_config(man.config, man.kappa);
    FlowEngine engine(params, build_forcing(man.config));
    engine.set_state(std::move(state));
    return run_engine_and_write(engine, man.config, man.kappa, man.c_grad,
                                std::move(records), false, log, out);
  } catch (const StepFailure& e) {
    log << "step failure: " << e.what() << "\n";
    return 3;
  } catch (const Error& e) {
    log << "error: " << e.what() << "\n";
    return 1;
  }
}

// ---------------------------------------------------------------------------
// verify suites
// ---------------------------------------------------------------------------

namespace {

struct SuiteRow {
  std::string name;
  double residual;
  double threshold;
};

Quaternion random_quat(Rng& rng, double scale) {
  return {rng.uniform(-scale, scale), rng.uniform(-scale, scale),
          rng.uniform(-scale, scale), rng.uniform(-scale, scale)};
}

QuatMatrix random_quat_matrix(Rng& rng, int n, double scale) {
  QuatMatrix m(n);
  for (int r = 0; r < n; ++r)
    for (int s = 0; s < n; ++s) m(r, s) = random_quat(rng, scale);
  return m;
}

RealMatrix random_symmetric(Rng& rng, int dim, double scale) {
  RealMatrix m(dim);
  for (int i = 0; i < dim; ++i)
    for (int j = i; j < dim; ++j) {
      const double v = rng.uniform(-scale, scale);
      m(i, j) = v;
      m(j, i) = v;
    }
  return m;
}

double suite_quat_associativity(Rng& rng) {
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const Quaternion a = random_quat(rng, 1.0);
    const Quaternion b = random_quat(rng, 1.0);
    const Quaternion c = random_quat(rng, 1.0);
    const Quaternion d = (a * b) * c - a * (b * c);
    worst = std::max(worst, d.norm() / (a.norm() * b.norm() * c.norm() + 1e-300));
  }
  return worst;
}

double suite_quat_conj(Rng& rng) {
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const Quaternion a = random_quat(rng, 1.0);
    const Quaternion b = random_quat(rng, 1.0);
    worst = std::max(worst, ((a * b).conj() - b.conj() * a.conj()).norm());
    worst = std::max(worst, std::fabs((a * b).norm() - a.norm() * b.norm()) /
                                (a.norm() * b.norm() + 1e-300));
  }
  return worst;
}

double suite_iota_homomorphism(Rng& rng) {
  double worst = 0.0;
  for (int n = 1; n <= 3; ++n)
    for (int i = 0; i < 60; ++i) {
      const QuatMatrix m = random_quat_matrix(rng, n, 1.0);
      const QuatMatrix k = random_quat_matrix(rng, n, 1.0);
      const RealMatrix lhs = iota(m * k);
      const RealMatrix rhs = iota(m) * iota(k);
      worst = std::max(worst, (lhs - rhs).frobenius_norm() /
                                  (iota(m).frobenius_norm() *
                                   iota(k).frobenius_norm()));
    }
  return worst;
}

double suite_iota_transpose(Rng& rng) {
  double worst = 0.0;
  for (int n = 1; n <= 3; ++n)
    for (int i = 0; i < 40; ++i) {
      const QuatMatrix m = random_quat_matrix(rng, n, 1.0);
      const RealMatrix lhs = iota(m.conj_transpose());
      const RealMatrix rhs = iota(m).transpose();
      worst = std::max(worst,
                       (lhs - rhs).max_abs() / (1.0 + iota(m).max_abs()));
    }
  return worst;
}

double suite_iota_commutant(Rng& rng) {
  double worst = 0.0;
  for (int n = 1; n <= 3; ++n) {
    const StructureMatrices s = structure_matrices(n);
    for (int i = 0; i < 40; ++i) {
      const HyperhermitianMatrix u = random_hyperhermitian(rng, n, 1.0);
      const RealMatrix iu = iota(u.quat());
      const double scale = iu.frobenius_norm() + 1e-300;
      worst = std::max(worst, (iu - iu.transpose()).max_abs() / scale);
      worst = std::max(worst, (s.I0 * iu * s.I0 + iu).max_abs() / scale);
      worst = std::max(worst, (s.J0 * iu * s.J0 + iu).max_abs() / scale);
      worst = std::max(worst, (s.K0 * iu * s.K0 + iu).max_abs() / scale);
    }
  }
  return worst;
}

double suite_p_projector(Rng& rng) {
  double worst = 0.0;
  for (int n = 1; n <= 3; ++n)
    for (int i = 0; i < 40; ++i) {
      RealMatrix m(4 * n);
      for (int a = 0; a < 4 * n; ++a)
        for (int b = 0; b < 4 * n; ++b) m(a, b) = rng.uniform(-1.0, 1.0);
      const double scale = m.frobenius_norm() + 1e-300;
      const RealMatrix pm = p_project(m);
      worst = std::max(worst, (p_project(pm) - pm).max_abs() / scale);

      RealMatrix k(4 * n);
      for (int a = 0; a < 4 * n; ++a)
        for (int b = 0; b < 4 * n; ++b) k(a, b) = rng.uniform(-1.0, 1.0);
      double inner1 = 0.0, inner2 = 0.0;
      const RealMatrix pk = p_project(k);
      for (int a = 0; a < 4 * n; ++a)
        for (int b = 0; b < 4 * n; ++b) {
          inner1 += pm(a, b) * k(a, b);
          inner2 += m(a, b) * pk(a, b);
        }
      worst = std::max(worst, std::fabs(inner1 - inner2) /
                                  (scale * k.frobenius_norm()));

      const HyperhermitianMatrix u = random_hyperhermitian(rng, n, 1.0);
      const RealMatrix iu = iota(u.quat());
      worst = std::max(worst, (p_project(iu) - iu).max_abs() /
                                  (iu.frobenius_norm() + 1e-300));
    }
  return worst;
}

double suite_p_positivity(Rng& rng) {
  double worst = 0.0;
  for (int n = 1; n <= 3; ++n)
    for (int i = 0; i < 30; ++i) {
      const RealMatrix b = random_symmetric(rng, 4 * n, 1.0);
      const RealMatrix m = b.transpose() * b;  // symmetric psd
      const double scale = m.frobenius_norm() + 1e-300;
      const std::vector<double> ev = symmetric_eigenvalues(p_project(m));
      worst = std::max(worst, std::max(0.0, -ev.front()) / scale);
      const std::vector<double> evm = symmetric_eigenvalues(m);
      worst = std::max(worst, std::max(0.0, ev.back() - evm.back()) / scale);
    }
  return worst;
}

double suite_moore_quartic(Rng& rng) {
  double worst = 0.0;
  for (int n = 1; n <= 3; ++n)
    for (int i = 0; i < 1000; ++i) {
      const HyperhermitianMatrix u = random_hyperhermitian(rng, n, 1.0);
      const double md = moore_det(u);
      const double det = lu_determinant(iota(u.quat()));
      worst = std::max(worst, std::fabs(md * md * md * md - det) /
                                  (1.0 + std::fabs(det)));
    }
  return worst;
}

double suite_moore_diag(Rng& rng) {
  double worst = 0.0;
  for (int n = 1; n <= 3; ++n)
    for (int i = 0; i < 50; ++i) {
      std::vector<double> d(n);
      double prod = 1.0;
      for (int r = 0; r < n; ++r) {
        d[r] = rng.uniform(-2.0, 2.0);
        prod *= d[r];
      }
      worst = std::max(
          worst, std::fabs(moore_det(HyperhermitianMatrix::diagonal(d)) - prod));
    }
  return worst;
}

double suite_moore_monotone(Rng& rng) {
  double worst = 0.0;
  for (int n = 1; n <= 3; ++n)
    for (int i = 0; i < 60; ++i) {
      const HyperhermitianMatrix u = random_posdef_hyperhermitian(rng, n);
      const QuatMatrix r = random_quat_matrix(rng, n, 0.7);
      const HyperhermitianMatrix w =
          HyperhermitianMatrix::unchecked(r.conj_transpose() * r);
      const double du = moore_det(u);
      const double dv = moore_det(u + w);
      worst = std::max(worst, std::max(0.0, du - dv) / (1.0 + std::fabs(du)));
    }
  // commuting diagonal pairs
  for (int i = 0; i < 60; ++i) {
    const int n = 1 + (i % 3);
    std::vector<double> lo(n), hi(n);
    for (int r = 0; r < n; ++r) {
      lo[r] = rng.uniform(0.1, 1.0);
      hi[r] = lo[r] + rng.uniform(0.0, 1.0);
    }
    const double du = moore_det(HyperhermitianMatrix::diagonal(lo));
    const double dv = moore_det(HyperhermitianMatrix::diagonal(hi));
    worst = std::max(worst, std::max(0.0, du - dv) / (1.0 + std::fabs(du)));
  }
  return worst;
}

double suite_eigen_quadruples(Rng& rng) {
  double worst = 0.0;
  for (int n = 1; n <= 3; ++n)
    for (int i = 0; i < 100; ++i) {
      const HyperhermitianMatrix u = random_hyperhermitian(rng, n, 1.0);
      const std::vector<double> all = symmetric_eigenvalues(iota(u.quat()));
      for (int g = 0; g < n; ++g) {
        const double spread = all[4 * g + 3] - all[4 * g];
        const double mean4 = 0.25 * (all[4 * g] + all[4 * g + 1] +
                                     all[4 * g + 2] + all[4 * g + 3]);
        worst = std::max(worst, spread / (1.0 + std::fabs(mean4)));
      }
    }
  return worst;
}

double suite_hh_inverse(Rng& rng) {
  double worst = 0.0;
  for (int n = 1; n <= 3; ++n)
    for (int i = 0; i < 60; ++i) {
      const HyperhermitianMatrix u = random_posdef_hyperhermitian(rng, n);
      const HyperhermitianMatrix inv = hh_inverse(u);
      const RealMatrix prod = iota((u.quat() * inv.quat()));
      worst = std::max(worst,
                       (prod - RealMatrix::identity(4 * n)).frobenius_norm());
    }
  return worst;
}

double suite_re_trace(Rng& rng) {
  double worst = 0.0;
  for (int n = 1; n <= 3; ++n)
    for (int i = 0; i < 60; ++i) {
      const HyperhermitianMatrix a = random_hyperhermitian(rng, n, 1.0);
      const HyperhermitianMatrix b = random_hyperhermitian(rng, n, 1.0);
      const RealMatrix prod = iota(a.quat()) * iota(b.quat());
      double tr = 0.0;
      for (int k = 0; k < 4 * n; ++k) tr += prod(k, k);
      worst = std::max(worst, std::fabs(re_trace_product(a, b) - 0.25 * tr));
    }
  return worst;
}

Poly random_poly(Rng& rng, int nvars, int degree, int terms) {
  Poly p(nvars);
  for (int t = 0; t < terms; ++t) {
    Poly mono = Poly::constant(nvars, rng.uniform(-1.0, 1.0));
    int budget = rng.index(degree + 1);
    for (int d = 0; d < budget; ++d)
      mono = mono * Poly::variable(nvars, rng.index(nvars));
    p += mono;
  }
  return p;
}

double suite_d_squared(Rng& rng) {
  double worst = 0.0;
  for (int n = 1; n <= 2; ++n)
    for (int i = 0; i < 25; ++i) {
      const Poly u = random_poly(rng, 4 * n, 3, 6);
      PolyForm f = PolyForm::function(n, u);
      if (i % 2 == 1) f = f.wedge(PolyForm::frame_covector(n, rng.index(4 * n)));
      auto [d1p, d1q] = d_split(f);
      const PolyForm d1 = d1p + d1q;
      auto [d2p, d2q] = d_split(d1);
      worst = std::max(worst, (d2p + d2q).max_abs_coeff());
    }
  return worst;
}

double suite_ddj_anticommute(Rng& rng) {
  double worst = 0.0;
  for (int i = 0; i < 50; ++i) {
    const int n = 1 + (i % 2);
    const Poly u = random_poly(rng, 4 * n, 3, 6);
    const PolyForm f = PolyForm::function(n, u);
    const PolyForm lhs = d_split(partial_J(f)).first;
    const PolyForm rhs = partial_J(d_split(f).first);
    worst = std::max(worst, (lhs + rhs).max_abs_coeff());
  }
  return worst;
}

double suite_ddj_qreal(Rng& rng) {
  double worst = 0.0;
  for (int i = 0; i < 20; ++i) {
    const int n = 1 + (i % 2);
    Poly u = random_poly(rng, 4 * n, 4, 6);
    u = (u + u.conj()) * Complex(0.5);  // real polynomial
    const PolyForm om = dd_J(n, u);
    worst = std::max(worst, (J_act(om) - om.conj_form()).max_abs_coeff());
  }
  return worst;
}

double suite_metric_roundtrip(Rng& rng, double kappa) {
  double worst = 0.0;
  for (int i = 0; i < 40; ++i) {
    const int n = 1 + (i % 2);
    const HyperhermitianMatrix g = random_posdef_hyperhermitian(rng, n);
    const HyperhermitianMatrix back = metric_from_form(
        matrix_to_form(g, kappa), std::vector<double>(4 * n, 0.0));
    worst = std::max(worst, (back - g).quat().max_entry_norm());
  }
  return worst;
}

double suite_kappa_stored(double kappa_stored) {
  Poly u1(4);
  for (int a = 0; a < 4; ++a) {
    const Poly x = Poly::variable(4, a);
    u1 += x * x;
  }
  const HyperhermitianMatrix g1 =
      metric_from_form(dd_J(1, u1), std::vector<double>(4, 0.0));
  return std::fabs(g1(0, 0).w / 8.0 - kappa_stored);
}

void suite_formule(Rng& rng, double kappa, double& worst_wedge,
                   double& worst_lin) {
  worst_wedge = 0.0;
  worst_lin = 0.0;
  for (int n = 1; n <= 2; ++n)
    for (int i = 0; i < 100; ++i) {
      const HyperhermitianMatrix g = random_posdef_hyperhermitian(rng, n);
      const HyperhermitianMatrix h = random_hyperhermitian(rng, n, 0.8);
      const FormuleResiduals r = verify_formule(g, h, kappa);
      worst_wedge = std::max(worst_wedge, r.wedge_ratio);
      worst_lin = std::max(worst_lin, r.linearized);
    }
}

double suite_lucio(Rng& rng, double kappa) {
  double worst = 0.0;
  for (int n = 1; n <= 2; ++n)
    for (int i = 0; i < 100; ++i) {
      const HyperhermitianMatrix g = random_posdef_hyperhermitian(rng, n);
      std::vector<Complex> alpha(2 * n), beta(2 * n);
      for (int c = 0; c < 2 * n; ++c) {
        alpha[c] = Complex(rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0));
        beta[c] = Complex(rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0));
      }
      worst = std::max(worst, verify_lucio(g, alpha, beta, kappa));
    }
  return worst;
}

void suite_deltalogdet(Rng& rng, double kappa, double& worst_sym,
                       double& worst_fd) {
  worst_sym = 0.0;
  worst_fd = 0.0;
  for (int i = 0; i < 20; ++i) {
    const int n = 1 + (i % 2);
    const HyperhermitianPolyMatrix u = random_jet(rng, n, i % 4 < 2);
    const std::vector<double> p(4 * n, 0.0);
    worst_sym = std::max(worst_sym, verify_delta_logdet(u, p, kappa));
    worst_fd = std::max(worst_fd, verify_delta_logdet_fd(u, p, kappa));
  }
}

double suite_hessian_consistency() {
  double worst = 0.0;
  // n = 1, N = 8
  {
    const GridShape shape{1, 8};
    const PeriodicScalarField f = PeriodicScalarField::from_function(
        shape, [](const std::vector<double>& x) {
          return std::sin(2.0 * M_PI * x[0]) * std::sin(2.0 * M_PI * x[1]) +
                 0.3 * std::cos(2.0 * M_PI * x[2]) +
                 0.2 * std::cos(2.0 * M_PI * (x[0] + x[3]));
        });
    const HyperhermitianField hess = quat_hessian(f);
    for (std::size_t p = 0; p < f.size(); p += 97) {
      const RealMatrix hr = real_hessian_at(f, unflatten(shape, p));
      const RealMatrix want = p_project(hr) * 4.0;
      const RealMatrix got = iota(hess.at(p).quat());
      worst = std::max(worst, (want - got).max_abs());
    }
  }
  // n = 2, N = 5
  {
    const GridShape shape{2, 5};
    const PeriodicScalarField f = PeriodicScalarField::from_function(
        shape, [](const std::vector<double>& x) {
          return std::sin(2.0 * M_PI * x[0]) * std::sin(2.0 * M_PI * x[1]) +
                 0.4 * std::cos(2.0 * M_PI * x[2]) * std::sin(2.0 * M_PI * x[5]) +
                 0.2 * std::cos(2.0 * M_PI * (x[3] + x[6])) +
                 0.1 * std::sin(2.0 * M_PI * (x[4] + x[7]));
        });
    const HyperhermitianField hess = quat_hessian(f);
    for (std::size_t p = 0; p < f.size(); p += 40009) {
      const RealMatrix hr = real_hessian_at(f, unflatten(shape, p));
      const RealMatrix want = p_project(hr) * 4.0;
      const RealMatrix got = iota(hess.at(p).quat());
      worst = std::max(worst, (want - got).max_abs());
    }
  }
  return worst;
}

double suite_scalar_reduction() {
  const GridShape shape{1, 12};
  const PeriodicScalarField f = PeriodicScalarField::from_function(
      shape, [](const std::vector<double>& x) {
        return std::sin(2.0 * M_PI * x[0]) * std::cos(2.0 * M_PI * x[3]) +
               0.5 * std::cos(2.0 * M_PI * x[1]) +
               0.25 * std::sin(2.0 * M_PI * (x[2] + x[1]));
      });
  const HyperhermitianField hess = quat_hessian(f);
  PeriodicScalarField lap(shape);
  for (int a = 0; a < 4; ++a)
    accumulate_partial(f, a, 2, DerivMode::FD4, 1.0, lap);
  double worst = 0.0;
  for (std::size_t p = 0; p < f.size(); ++p)
    worst = std::max(worst, std::fabs(hess.ch[0][p] - lap[p]));
  return worst;
}

}  // namespace

int cmd_verify(const RunConfig& cfg, std::ostream& log) {
  CalibrationReport calib;
  try {
    calib = read_calibration(cfg.calibration_path);
  } catch (const Error& e) {
    log << "error: " << e.what() << "\n";
    return 1;
  }

  Rng rng(cfg.seed);
  std::vector<SuiteRow> rows;
  rows.push_back({"quat_associativity", suite_quat_associativity(rng), 1e-14});
  rows.push_back({"quat_conj_and_norm", suite_quat_conj(rng), 1e-14});
  rows.push_back({"iota_homomorphism", suite_iota_homomorphism(rng), 1e-12});
  rows.push_back({"iota_conj_transpose", suite_iota_transpose(rng), 1e-13});
  rows.push_back({"iota_commutant", suite_iota_commutant(rng), 1e-13});
  rows.push_back({"p_projector", suite_p_projector(rng), 1e-13});
  rows.push_back({"p_positivity", suite_p_positivity(rng), 1e-13});
  rows.push_back({"moore_quartic", suite_moore_quartic(rng), 1e-9});
  rows.push_back({"moore_diag", suite_moore_diag(rng), 1e-12});
  rows.push_back({"moore_monotone", suite_moore_monotone(rng), 1e-12});
  rows.push_back({"eigen_quadruples", suite_eigen_quadruples(rng), 1e-10});
  rows.push_back({"hh_inverse", suite_hh_inverse(rng), 1e-10});
  rows.push_back({"re_trace_quarter", suite_re_trace(rng), 1e-12});
  rows.push_back({"d_squared_zero", suite_d_squared(rng), 1e-12});
  rows.push_back({"ddj_anticommute", suite_ddj_anticommute(rng), 1e-12});
  rows.push_back({"ddj_q_real", suite_ddj_qreal(rng), 1e-10});
  rows.push_back(
      {"metric_roundtrip", suite_metric_roundtrip(rng, calib.kappa), 1e-10});
  rows.push_back({"kappa_stored", suite_kappa_stored(calib.kappa), 1e-10});
  double fw = 0.0, fl = 0.0;
  suite_formule(rng, calib.kappa, fw, fl);
  rows.push_back({"formule_wedge_ratio", fw, 1e-9});
  rows.push_back({"formule_linearized", fl, 1e-9});
  rows.push_back({"lucio_pairing", suite_lucio(rng, calib.kappa), 1e-10});
  double ds = 0.0, dfd = 0.0;
  suite_deltalogdet(rng, calib.kappa, ds, dfd);
  rows.push_back({"deltalogdet_symbolic", ds, 1e-8});
  rows.push_back({"deltalogdet_fd", dfd, 1e-6});
  rows.push_back({"hessian_p_consistency", suite_hessian_consistency(), 1e-10});
  rows.push_back({"scalar_reduction_n1", suite_scalar_reduction(), 1e-12});

  bool all_ok = true;
  char buf[160];
  log << "identity                          max residual   threshold  status\n";
  for (const SuiteRow& row : rows) {
    const bool ok = row.residual <= row.threshold;
    all_ok = all_ok && ok;
    std::snprintf(buf, sizeof(buf), "%-32s %12.3e %11.0e  %s\n",
                  row.name.c_str(), row.residual, row.threshold,
                  ok ? "pass" : "FAIL");
    log << buf;
  }
  return all_ok ? 0 : 1;
}

}  // namespace qma::cli
