#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "qma/io.hpp"

namespace qma::cli {

// Outputs of a run for in-process callers (tests, acceptance).
struct RunOutputs {
  RunReport report;
  std::vector<DiagnosticsRecord> records;
  std::vector<StepTrace> traces;
  PeriodicScalarField final_phi;
  std::string diagnostics_path;
  std::string summary_path;
  std::string final_phi_path;
  std::string last_manifest_path;
  double b = 0.0;
  double kappa = 0.0;
  double c_grad = 0.0;
};

// Exit codes: 0 success, 1 verify failure, 2 calibration mismatch,
// 3 step failure, 4 resume mismatch.
int cmd_calibrate(const std::string& out_path, std::ostream& log);
int cmd_verify(const RunConfig& cfg, std::ostream& log);
// halt_after_step >= 0 aborts the loop at that step like a kill (no final
// outputs); used by the determinism tests, not exposed on the command line.
int cmd_run(const RunConfig& cfg, std::ostream& log, RunOutputs* out = nullptr,
            std::int64_t halt_after_step = -1);
int cmd_resume(const std::string& manifest_path, std::ostream& log,
               RunOutputs* out = nullptr);

}  // namespace qma::cli
