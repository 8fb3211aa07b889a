#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qma/diagnostics.hpp"
#include "qma/flow.hpp"
#include "qma/oracle.hpp"

namespace qma {

struct FMode {
  std::vector<long long> wave;  // integer wave vector, length 4n
  double amplitude = 0.0;
};

// Schema-validated run configuration; unknown keys are rejected.
struct RunConfig {
  int n = 1;
  int N = 16;
  std::vector<FMode> F_modes;
  double sigma = 0.2;
  double eps_pos = 1e-6;
  double tol_conv = 1e-8;
  std::int64_t max_steps = 100000;
  std::int64_t cadence = 25;
  std::string out_dir = "out";
  std::string calibration_path = "calibration.json";
  std::string stepper = "heun";
  std::string derivative_mode = "fd4";
  std::uint64_t seed = 20240801;
  double residual_tol = 1e-5;
};

RunConfig parse_run_config_text(const std::string& text);
RunConfig parse_run_config_file(const std::string& path);
std::string run_config_to_json(const RunConfig& cfg);  // canonical form
std::string config_hash_hex(const RunConfig& cfg);     // FNV-1a 64

// F(x) = sum of amplitude * cos(2 pi <wave, x>)
PeriodicScalarField build_forcing(const RunConfig& cfg);
FlowParams flow_params_from_config(const RunConfig& cfg, double kappa);

void write_calibration(const std::string& path, const CalibrationReport& rep);
CalibrationReport read_calibration(const std::string& path);

// Raw little-endian float64 values, row-major in the fixed axis order, plus
// a JSON sidecar (same path with .json extension).
void write_field_snapshot(const std::string& f64_path,
                          const PeriodicScalarField& field);
PeriodicScalarField read_field_snapshot(const std::string& f64_path);

// Matrix-valued fields serialize as flat little-endian float64 quadruples
// (w,x,y,z) per entry, row-major over matrix entries, point-major over the
// grid; same sidecar plus "kind": "hyperhermitian".
void write_hyperhermitian_snapshot(const std::string& f64_path,
                                   const HyperhermitianField& field);
HyperhermitianField read_hyperhermitian_snapshot(const std::string& f64_path);

// Record series without the derived f_fd column; 17 significant digits so
// values round-trip exactly.
std::string records_csv(const std::vector<DiagnosticsRecord>& records);
std::vector<DiagnosticsRecord> parse_records_csv(const std::string& text);

struct Manifest {
  std::int64_t step = 0;
  double t = 0.0;
  double dt = 0.0;
  std::int64_t accept_streak = 0;
  std::string config_hash;
  RunConfig config;
  double kappa = 0.0;
  double c_grad = 0.0;
  std::string phi_file;      // relative to the manifest directory
  std::string records_file;  // relative to the manifest directory
};

void write_manifest(const std::string& path, const Manifest& man);
Manifest read_manifest(const std::string& path);

struct Summary {
  bool converged = false;
  std::int64_t steps = 0;
  double final_residual = 0.0;
  double b = 0.0;
  double f_final = 0.0;
};

void write_summary(const std::string& path, const Summary& s);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

}  // namespace qma
