// Acceptance suite: one pass/fail line per criterion (A1..A11).
// Run with no arguments for all criteria, or name a subset: ./acceptance A7 A10

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "qma/cli.hpp"
#include "qma/diagnostics.hpp"
#include "qma/errors.hpp"
#include "qma/flow.hpp"
#include "qma/forms.hpp"
#include "qma/grid.hpp"
#include "qma/io.hpp"
#include "qma/oracle.hpp"
#include "qma/rng.hpp"
#include "qma/smallmat.hpp"

using namespace qma;
namespace fs = std::filesystem;

namespace {

struct Criterion {
  bool pass = true;
  std::string detail;

  void gate(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      if (!detail.empty()) detail += "; ";
      detail += "FAILED: " + what;
    }
  }
  void note(const std::string& what) {
    if (!detail.empty()) detail += "; ";
    detail += what;
  }
};

double now_seconds() {
  using clock = std::chrono::steady_clock;
  static const clock::time_point start = clock::now();
  return std::chrono::duration<double>(clock::now() - start).count();
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.3g", v);
  return buf;
}

fs::path work_dir() {
  static const fs::path dir = [] {
    fs::path d = fs::temp_directory_path() / "qmaflow_acceptance";
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

const std::string& calibration_path() {
  static const std::string path = [] {
    const std::string p = (work_dir() / "calibration.json").string();
    std::ostringstream sink;
    if (qma::cli::cmd_calibrate(p, sink) != 0)
      throw Error("acceptance setup: calibration failed");
    return p;
  }();
  return path;
}

double bessel_i0(double x) {
  double term = 1.0, sum = 1.0;
  for (int k = 1; k < 40; ++k) {
    term *= (x / 2.0) * (x / 2.0) / (double(k) * k);
    sum += term;
  }
  return sum;
}

RunConfig a7_config(const std::string& out_dir) {
  RunConfig cfg;
  cfg.n = 1;
  cfg.N = 16;
  cfg.F_modes = {{{1, 0, 0, 0}, 0.5}};
  cfg.sigma = 0.2;
  cfg.eps_pos = 1e-6;
  cfg.tol_conv = 1e-8;
  cfg.max_steps = 20000;
  cfg.cadence = 25;
  cfg.out_dir = out_dir;
  cfg.calibration_path = calibration_path();
  return cfg;
}

struct A7Data {
  qma::cli::RunOutputs out;
  int exit_code = -1;
};

const A7Data& a7_data() {
  static const A7Data data = [] {
    A7Data d;
    std::ostringstream sink;
    d.exit_code = qma::cli::cmd_run(a7_config((work_dir() / "a7").string()),
                                    sink, &d.out);
    return d;
  }();
  return data;
}

struct A9Data {
  qma::cli::RunOutputs out;
  int exit_code = -1;
  bool step_failure = false;
  double seconds = 0.0;
};

const A9Data& a9_data() {
  static const A9Data data = [] {
    A9Data d;
    RunConfig cfg;
    cfg.n = 2;
    cfg.N = 6;
    cfg.F_modes = {{{1, 0, 0, 0, 0, 0, 0, 0}, 0.1},
                   {{0, 1, 0, 0, 0, 0, 0, 0}, 0.1}};
    cfg.tol_conv = 1e-8;
    cfg.max_steps = 500;
    cfg.cadence = 50;
    cfg.out_dir = (work_dir() / "a9").string();
    cfg.calibration_path = calibration_path();
    std::ostringstream sink;
    const double t0 = now_seconds();
    d.exit_code = qma::cli::cmd_run(cfg, sink, &d.out);
    d.seconds = now_seconds() - t0;
    d.step_failure = d.exit_code == 3;
    return d;
  }();
  return data;
}

// ---------------------------------------------------------------------- A1
Criterion run_a1() {
  Criterion c;
  const double t0 = now_seconds();
  Rng rng(0xa1);
  double quartic = 0.0, hom = 0.0, idem = 0.0, posv = 0.0;
  for (int n = 1; n <= 3; ++n) {
    for (int i = 0; i < 1000; ++i) {
      const HyperhermitianMatrix u = random_hyperhermitian(rng, n, 1.0);
      const double md = moore_det(u);
      const double det = lu_determinant(iota(u.quat()));
      quartic = std::max(quartic, std::fabs(md * md * md * md - det) /
                                      (1.0 + std::fabs(det)));
    }
    for (int i = 0; i < 100; ++i) {
      QuatMatrix m(n), k(n);
      for (int r = 0; r < n; ++r)
        for (int s = 0; s < n; ++s) {
          m(r, s) = Quaternion(rng.uniform(-1, 1), rng.uniform(-1, 1),
                               rng.uniform(-1, 1), rng.uniform(-1, 1));
          k(r, s) = Quaternion(rng.uniform(-1, 1), rng.uniform(-1, 1),
                               rng.uniform(-1, 1), rng.uniform(-1, 1));
        }
      hom = std::max(hom, (iota(m * k) - iota(m) * iota(k)).frobenius_norm() /
                              (iota(m).frobenius_norm() *
                               iota(k).frobenius_norm()));
    }
    for (int i = 0; i < 100; ++i) {
      RealMatrix b(4 * n);
      for (int a = 0; a < 4 * n; ++a)
        for (int j = 0; j < 4 * n; ++j) b(a, j) = rng.uniform(-1, 1);
      const double scale = b.frobenius_norm();
      const RealMatrix pb = p_project(b);
      idem = std::max(idem, (p_project(pb) - pb).max_abs() / scale);
      const RealMatrix sym = b.transpose() * b;
      const std::vector<double> ev = symmetric_eigenvalues(p_project(sym));
      posv = std::max(posv, std::max(0.0, -ev.front()) / sym.frobenius_norm());
    }
  }
  const double secs = now_seconds() - t0;
  c.gate(quartic <= 1e-9, "moore quartic residual " + fmt(quartic));
  c.gate(hom <= 1e-12, "iota homomorphism residual " + fmt(hom));
  c.gate(idem <= 1e-14, "p idempotence residual " + fmt(idem));
  c.gate(posv <= 1e-14, "p positivity residual " + fmt(posv));
  c.gate(secs <= 30.0, "runtime " + fmt(secs) + "s > 30s");
  c.note("quartic " + fmt(quartic) + ", hom " + fmt(hom) + ", p " + fmt(idem) +
         "/" + fmt(posv) + ", " + fmt(secs) + "s");
  return c;
}

// ---------------------------------------------------------------------- A2
Criterion run_a2() {
  Criterion c;
  const double t0 = now_seconds();
  const CalibrationReport rep = calibrate_kappa();
  c.gate(rep.residuals.at("fond_two_routes") <= 1e-10,
         "kappa routes differ by " + fmt(rep.residuals.at("fond_two_routes")));
  c.gate(rep.residuals.at("kappa_universality") <= 1e-10,
         "kappa(n=1) vs kappa(n=2) " +
             fmt(rep.residuals.at("kappa_universality")));
  const std::string p1 = (work_dir() / "calib_a.json").string();
  const std::string p2 = (work_dir() / "calib_b.json").string();
  std::ostringstream sink;
  c.gate(qma::cli::cmd_calibrate(p1, sink) == 0, "first calibrate exit");
  c.gate(qma::cli::cmd_calibrate(p2, sink) == 0, "second calibrate exit");
  c.gate(read_text_file(p1) == read_text_file(p2),
         "calibration files are not byte-identical");
  const double secs = now_seconds() - t0;
  c.gate(secs <= 10.0, "runtime " + fmt(secs) + "s > 10s");
  c.note("kappa " + fmt(rep.kappa) + ", c_grad " + fmt(rep.c_grad) + ", " +
         fmt(secs) + "s");
  return c;
}

// ---------------------------------------------------------------------- A3
Criterion run_a3() {
  Criterion c;
  const double t0 = now_seconds();
  const double kappa = read_calibration(calibration_path()).kappa;
  Rng rng(0xa3);
  double w1 = 0.0, w2 = 0.0;
  for (int n = 1; n <= 2; ++n)
    for (int i = 0; i < 100; ++i) {
      const HyperhermitianMatrix g = random_posdef_hyperhermitian(rng, n);
      const HyperhermitianMatrix h = random_hyperhermitian(rng, n, 0.8);
      const FormuleResiduals r = verify_formule(g, h, kappa);
      w1 = std::max(w1, r.wedge_ratio);
      w2 = std::max(w2, r.linearized);
    }
  const double secs = now_seconds() - t0;
  c.gate(w1 <= 1e-9, "wedge-ratio residual " + fmt(w1));
  c.gate(w2 <= 1e-9, "linearized residual " + fmt(w2));
  c.gate(secs <= 60.0, "runtime " + fmt(secs) + "s > 60s");
  c.note("wedge " + fmt(w1) + ", linearized " + fmt(w2) + ", " + fmt(secs) +
         "s");
  return c;
}

// ---------------------------------------------------------------------- A4
Criterion run_a4() {
  Criterion c;
  const double kappa = read_calibration(calibration_path()).kappa;
  Rng rng(0xa4);
  double worst = 0.0;
  for (int n = 1; n <= 2; ++n)
    for (int i = 0; i < 100; ++i) {
      const HyperhermitianMatrix g = random_posdef_hyperhermitian(rng, n);
      std::vector<Complex> a(2 * n), b(2 * n);
      for (int k = 0; k < 2 * n; ++k) {
        a[k] = Complex(rng.uniform(-1, 1), rng.uniform(-1, 1));
        b[k] = Complex(rng.uniform(-1, 1), rng.uniform(-1, 1));
      }
      worst = std::max(worst, verify_lucio(g, a, b, kappa));
    }
  c.gate(worst <= 1e-10, "pairing residual " + fmt(worst));
  c.note("residual " + fmt(worst));
  return c;
}

// ---------------------------------------------------------------------- A5
Criterion run_a5() {
  Criterion c;
  const double kappa = read_calibration(calibration_path()).kappa;
  // constant case is exact
  HyperhermitianPolyMatrix cu(2, 8);
  cu.set_entry(0, 0, {Poly::constant(8, 1.5), Poly(8), Poly(8), Poly(8)});
  cu.set_entry(1, 1, {Poly::constant(8, 0.5), Poly(8), Poly(8), Poly(8)});
  cu.set_entry(0, 1, {Poly(8), Poly(8), Poly(8), Poly(8)});
  const double const_resid =
      verify_delta_logdet(cu, std::vector<double>(8, 0.0), kappa);
  c.gate(const_resid <= 1e-14, "constant case residual " + fmt(const_resid));

  Rng rng(0xa5);
  double sym = 0.0, fd = 0.0;
  for (int i = 0; i < 20; ++i) {
    const int n = 1 + i % 2;
    const HyperhermitianPolyMatrix u = random_jet(rng, n, i % 4 < 2);
    const std::vector<double> origin(4 * n, 0.0);
    sym = std::max(sym, verify_delta_logdet(u, origin, kappa));
    fd = std::max(fd, verify_delta_logdet_fd(u, origin, kappa));
  }
  c.gate(sym <= 1e-8, "symbolic residual " + fmt(sym));
  c.gate(fd <= 1e-6, "finite-difference residual " + fmt(fd));
  c.note("constant " + fmt(const_resid) + ", symbolic " + fmt(sym) + ", fd " +
         fmt(fd));
  return c;
}

// ---------------------------------------------------------------------- A6
Criterion run_a6() {
  Criterion c;
  using Fn = std::function<double(const std::vector<double>&)>;
  struct Field {
    GridShape shape;
    Fn fn;
  };
  const std::vector<Field> fields = {
      {{1, 16},
       [](const std::vector<double>& x) {
         return std::sin(2 * M_PI * x[0]) * std::sin(2 * M_PI * x[1]);
       }},
      {{1, 12},
       [](const std::vector<double>& x) {
         return std::cos(2 * M_PI * (x[0] + x[2])) +
                0.5 * std::sin(2 * M_PI * x[3]);
       }},
      {{1, 8},
       [](const std::vector<double>& x) {
         return std::exp(0.3 * std::cos(2 * M_PI * x[1])) *
                std::sin(2 * M_PI * x[2]);
       }},
      {{2, 6},
       [](const std::vector<double>& x) {
         return std::sin(2 * M_PI * x[0]) * std::sin(2 * M_PI * x[1]) +
                0.5 * std::cos(2 * M_PI * (x[3] + x[6]));
       }},
      {{2, 5},
       [](const std::vector<double>& x) {
         return std::cos(2 * M_PI * x[2]) * std::sin(2 * M_PI * x[5]) +
                0.3 * std::sin(2 * M_PI * (x[4] + x[7]));
       }},
  };
  double worst = 0.0;
  for (const Field& fl : fields) {
    const PeriodicScalarField f =
        PeriodicScalarField::from_function(fl.shape, fl.fn);
    const HyperhermitianField hess = quat_hessian(f);
    const std::size_t stride = std::max<std::size_t>(1, f.size() / 37);
    for (std::size_t p = 0; p < f.size(); p += stride) {
      const RealMatrix want =
          p_project(real_hessian_at(f, unflatten(fl.shape, p))) * 4.0;
      const RealMatrix got = iota(hess.at(p).quat());
      worst = std::max(worst, (want - got).max_abs());
    }
  }
  c.gate(worst <= 1e-10, "iota(Hess_H) vs 4p(Hess_R) residual " + fmt(worst));

  // n = 1 scalar reduction
  const GridShape shape{1, 16};
  const PeriodicScalarField f = PeriodicScalarField::from_function(
      shape, [](const std::vector<double>& x) {
        return std::sin(2 * M_PI * x[0]) * std::cos(2 * M_PI * x[3]) +
               0.25 * std::cos(2 * M_PI * x[2]);
      });
  const HyperhermitianField hess = quat_hessian(f);
  PeriodicScalarField lap(shape);
  for (int a = 0; a < 4; ++a)
    accumulate_partial(f, a, 2, DerivMode::FD4, 1.0, lap);
  double scal = 0.0;
  for (std::size_t p = 0; p < f.size(); ++p)
    scal = std::max(scal, std::fabs(hess.ch[0][p] - lap[p]));
  c.gate(scal <= 1e-12, "scalar reduction residual " + fmt(scal));
  c.note("projection " + fmt(worst) + ", scalar " + fmt(scal));
  return c;
}

// ---------------------------------------------------------------------- A7
Criterion run_a7() {
  Criterion c;
  const A7Data& d = a7_data();
  c.gate(d.exit_code == 0, "run exit code " + std::to_string(d.exit_code));
  const RunReport& rep = d.out.report;

  // (i) positivity throughout
  c.gate(rep.min_eig_seen > 1e-6,
         "min eigenvalue " + fmt(rep.min_eig_seen) + " not above eps_pos");
  // (ii) discrete maximum principle, per-step slack 1e-7
  c.gate(rep.worst_max_principle <= 1e-7,
         "max principle violation " + fmt(rep.worst_max_principle));
  c.gate(rep.worst_min_principle <= 1e-7,
         "min principle violation " + fmt(rep.worst_min_principle));
  // (iii) f nonincreasing, slack 1e-8
  c.gate(rep.worst_f_increase <= 1e-8,
         "f increase " + fmt(rep.worst_f_increase));
  // (iv) |f_fd + D| <= 5% at interior records
  std::vector<DiagnosticsRecord> recs = d.out.records;
  fill_f_fd(recs);
  double worst_diss = 0.0;
  for (std::size_t k = 1; k + 1 < recs.size(); ++k) {
    const double lhs = std::fabs(recs[k].f_fd + recs[k].D);
    const double bound = 0.05 * std::max(std::fabs(recs[k].f_fd), 1e-8);
    worst_diss = std::max(worst_diss, lhs / bound);
  }
  c.gate(worst_diss <= 1.0,
         "dissipation identity off by " + fmt(worst_diss) + "x the 5% budget");
  // (v) convergence
  c.gate(rep.converged && rep.final_osc_phi_t < 1e-8,
         "osc(phi_t) " + fmt(rep.final_osc_phi_t));
  // (vi) elliptic residual, phi_t -> log b, Bessel cross-check
  const DiagnosticsRecord& last = recs.back();
  c.gate(last.residual <= 1e-5, "elliptic residual " + fmt(last.residual));
  const double logb = std::log(d.out.b);
  const double drift = std::max(std::fabs(last.max_phi_t - logb),
                                std::fabs(last.min_phi_t - logb));
  c.gate(drift <= 1e-6, "phi_t - log b = " + fmt(drift));
  const double b_oracle = 1.0 / bessel_i0(0.5);
  c.gate(std::fabs(d.out.b - b_oracle) <= 1e-6,
         "b vs Bessel oracle " + fmt(std::fabs(d.out.b - b_oracle)));
  c.note("steps " + std::to_string(rep.steps) + ", residual " +
         fmt(last.residual) + ", |phi_t - log b| " + fmt(drift) +
         ", dissipation budget use " + fmt(worst_diss));
  return c;
}

// ---------------------------------------------------------------------- A8
Criterion run_a8() {
  Criterion c;
  const double kappa = read_calibration(calibration_path()).kappa;
  const double amp = 0.002;
  auto solve = [&](int N, double& err) {
    const GridShape shape{1, N};
    const PeriodicScalarField phistar = PeriodicScalarField::from_function(
        shape, [&](const std::vector<double>& x) {
          return amp * std::sin(2 * M_PI * x[0]);
        });
    const PeriodicScalarField F = PeriodicScalarField::from_function(
        shape, [&](const std::vector<double>& x) {
          const double lap = -4 * M_PI * M_PI * amp * std::sin(2 * M_PI * x[0]);
          return std::log(1.0 + kappa * lap);
        });
    const double b = compute_b(F);
    FlowParams params;
    params.shape = shape;
    params.kappa = kappa;
    params.tol_conv = 1e-9;  // transient floor well below the h^4 truncation
    params.max_steps = 100000;
    params.cadence = 1000;
    FlowEngine engine(params, F);
    const RunReport rep = engine.run({});
    if (!rep.converged) {
      err = std::numeric_limits<double>::infinity();
      return b;
    }
    const PeriodicScalarField tilde = normalize(engine.state().phi);
    const PeriodicScalarField tstar = normalize(phistar);
    err = 0.0;
    for (std::size_t p = 0; p < tilde.size(); ++p)
      err = std::max(err, std::fabs(tilde[p] - tstar[p]));
    return b;
  };
  double e16 = 0.0, e24 = 0.0;
  const double b16 = solve(16, e16);
  const double b24 = solve(24, e24);
  c.gate(std::fabs(b16 - 1.0) <= 1e-12, "b(N=16) = " + fmt(b16) + " != 1");
  c.gate(std::fabs(b24 - 1.0) <= 1e-12, "b(N=24) = " + fmt(b24) + " != 1");
  const double cbound = 0.06;
  c.gate(e16 <= cbound / (16.0 * 16.0 * 16.0 * 16.0),
         "error(N=16) " + fmt(e16) + " above C h^4");
  c.gate(e24 <= cbound / (24.0 * 24.0 * 24.0 * 24.0),
         "error(N=24) " + fmt(e24) + " above C h^4");
  const double ratio = e16 / e24;
  c.gate(ratio >= 2.2, "refinement ratio " + fmt(ratio) + " below 2.2");
  c.note("err16 " + fmt(e16) + ", err24 " + fmt(e24) + ", ratio " + fmt(ratio) +
         " (gate >= 2.2; fourth-order ideal 5.06)");
  return c;
}

// ---------------------------------------------------------------------- A9
Criterion run_a9() {
  Criterion c;
  const A9Data& d = a9_data();
  c.gate(!d.step_failure, "StepFailure raised");
  const RunReport& rep = d.out.report;
  c.gate(rep.steps == 500, "ran " + std::to_string(rep.steps) + " steps");
  c.gate(rep.min_eig_seen > 1e-6,
         "min eigenvalue " + fmt(rep.min_eig_seen) + " not above eps_pos");
  c.gate(rep.worst_f_increase <= 1e-8,
         "f increase " + fmt(rep.worst_f_increase));
  c.gate(rep.worst_max_principle <= 1e-7,
         "max principle violation " + fmt(rep.worst_max_principle));
  c.gate(rep.worst_min_principle <= 1e-7,
         "min principle violation " + fmt(rep.worst_min_principle));
  c.gate(d.seconds <= 900.0, "runtime " + fmt(d.seconds) + "s > 900s");
  c.note("500 steps, min eig " + fmt(rep.min_eig_seen) + ", " +
         fmt(d.seconds) + "s");
  return c;
}

// --------------------------------------------------------------------- A10
Criterion run_a10() {
  Criterion c;
  const double worst =
      std::max(a7_data().out.report.worst_flow_identity,
               a9_data().out.report.worst_flow_identity);
  c.gate(worst <= 1e-10, "flow identity defect " + fmt(worst));
  c.note("max |density - e^{F+phi_t}| = " + fmt(worst));
  return c;
}

// --------------------------------------------------------------------- A11
Criterion run_a11() {
  Criterion c;
  std::ostringstream sink;
  const std::string base_csv =
      read_text_file(a7_data().out.diagnostics_path);

  // rerun
  qma::cli::RunOutputs rerun;
  const int code =
      qma::cli::cmd_run(a7_config((work_dir() / "a7_rerun").string()), sink,
                        &rerun);
  c.gate(code == 0, "rerun exit code " + std::to_string(code));
  c.gate(read_text_file(rerun.diagnostics_path) == base_csv,
         "rerun diagnostics.csv differs");

  // interrupted at step 1000, resumed from the last cadence snapshot
  qma::cli::RunOutputs halted;
  const int hcode =
      qma::cli::cmd_run(a7_config((work_dir() / "a7_halted").string()), sink,
                        &halted, /*halt_after_step=*/1000);
  c.gate(hcode == 1, "halted exit code " + std::to_string(hcode));
  c.gate(!halted.last_manifest_path.empty(), "no snapshot manifest written");
  const int rcode = qma::cli::cmd_resume(halted.last_manifest_path, sink);
  c.gate(rcode == 0, "resume exit code " + std::to_string(rcode));
  const std::string resumed_csv = read_text_file(
      (work_dir() / "a7_halted" / "diagnostics.csv").string());
  c.gate(resumed_csv == base_csv, "resumed diagnostics.csv differs");
  c.note("rerun and interrupted+resumed diagnostics byte-identical");
  return c;
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<std::string, std::function<Criterion()>>> all = {
      {"A1", run_a1},  {"A2", run_a2},  {"A3", run_a3},  {"A4", run_a4},
      {"A5", run_a5},  {"A6", run_a6},  {"A7", run_a7},  {"A8", run_a8},
      {"A9", run_a9},  {"A10", run_a10}, {"A11", run_a11},
  };
  std::vector<std::string> selected;
  for (int i = 1; i < argc; ++i) selected.push_back(argv[i]);

  static const std::map<std::string, std::string> titles = {
      {"A1", "algebra suite (moore quartic, iota homomorphism, p projector)"},
      {"A2", "calibration routes agree and reproduce byte-exactly"},
      {"A3", "determinant/trace wedge identities on random pairs"},
      {"A4", "first-order pairing identity on random covectors"},
      {"A5", "log-determinant Laplacian identity on polynomial jets"},
      {"A6", "quaternionic Hessian consistency on analytic fields"},
      {"A7", "main flow run: monotone monitors and elliptic limit"},
      {"A8", "manufactured solution: fourth-order spatial accuracy"},
      {"A9", "n = 2 smoke run: positivity and monotonicity"},
      {"A10", "pointwise flow identity at recorded steps"},
      {"A11", "bitwise determinism: rerun and interrupted+resumed"},
  };

  int failures = 0;
  for (const auto& [name, fn] : all) {
    if (!selected.empty() &&
        std::find(selected.begin(), selected.end(), name) == selected.end())
      continue;
    Criterion c;
    try {
      c = fn();
    } catch (const std::exception& e) {
      c.pass = false;
      c.detail = std::string("exception: ") + e.what();
    }
    if (!c.pass) ++failures;
    std::printf("[%s] %-3s %s — %s\n", c.pass ? "PASS" : "FAIL", name.c_str(),
                titles.at(name).c_str(), c.detail.c_str());
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
