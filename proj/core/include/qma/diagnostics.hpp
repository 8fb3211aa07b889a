#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qma/flow.hpp"
#include "qma/grid.hpp"

namespace qma {

// One row of diagnostics.csv; column order is fixed:
// step,t,dt,max_phi_t,min_phi_t,osc_phi,max_lap,maxQ,f,D,f_fd,M,residual,b
struct DiagnosticsRecord {
  std::int64_t step = 0;
  double t = 0.0, dt = 0.0;
  double max_phi_t = 0.0, min_phi_t = 0.0;
  double osc_phi = 0.0;
  double max_lap = 0.0;
  double maxQ = 0.0;
  double f = 0.0;
  double D = 0.0;
  double f_fd = 0.0;
  double M = 0.0;
  double residual = 0.0;
  double b = 0.0;
};

struct DiagContext {
  FlowParams params;
  PeriodicScalarField F;
  double b = 1.0;
  double c_grad = 0.5;
};

// b = 1 / mean(e^F) under unit flat volume.
double compute_b(const PeriodicScalarField& F);

PeriodicScalarField volume_density(const PeriodicScalarField& phi,
                                   const FlowParams& params,
                                   const PeriodicScalarField& F);

// f = integral of phi_t against the evolving volume.
double energy_f(const PeriodicScalarField& phi, const DiagContext& ctx);

// D = (1/2) integral of c_grad * grad(phi_t)^T iota(G_phi)^{-1} grad(phi_t)
// against the evolving volume.
double dissipation_D(const PeriodicScalarField& phi, const DiagContext& ctx);

// M = integral of log(volume density) against the evolving volume (h = 0 on
// the flat torus).
double mabuchi_M(const PeriodicScalarField& phi, const DiagContext& ctx);

// max over the grid of |volume_density - b e^F|.
double elliptic_residual(const PeriodicScalarField& phi,
                         const DiagContext& ctx);

// max/min phi_t, osc(phi), max quaternionic Laplacian, max Q.
DiagnosticsRecord bound_monitors(const FlowState& state,
                                 const DiagContext& ctx);

// Full record from a state and its rhs evaluation; f_fd is filled later
// from the record series.
DiagnosticsRecord make_record(const FlowState& state, const RhsEval& eval,
                              const DiagContext& ctx);

// Centered 3-point derivative of f over the record times (one-sided
// second-order stencils at the ends).
void fill_f_fd(std::vector<DiagnosticsRecord>& records);

std::string format_g17(double v);
std::string diagnostics_csv(std::vector<DiagnosticsRecord> records);

}  // namespace qma
