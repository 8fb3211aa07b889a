#include <benchmark/benchmark.h>

#include <cmath>
#include <vector>

#include "qma/flow.hpp"
#include "qma/grid.hpp"
#include "qma/hyperhermitian.hpp"
#include "qma/oracle.hpp"
#include "qma/reduce.hpp"
#include "qma/rng.hpp"

using namespace qma;

namespace {

PeriodicScalarField test_field(GridShape shape) {
  return PeriodicScalarField::from_function(
      shape, [](const std::vector<double>& x) {
        double v = 0.0;
        for (std::size_t a = 0; a < x.size(); ++a)
          v += std::cos(2.0 * M_PI * (x[a] + 0.1 * a));
        return 0.05 * v;
      });
}

}  // namespace

static void StencilPassFD4(benchmark::State& state) {
  const GridShape shape{1, int(state.range(0))};
  const PeriodicScalarField f = test_field(shape);
  PeriodicScalarField out(shape);
  for (auto _ : state) {
    apply_partial(f, 0, 2, DerivMode::FD4, out);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * f.size());
}
BENCHMARK(StencilPassFD4)->Arg(16)->Arg(32);

static void QuatHessianN1(benchmark::State& state) {
  const GridShape shape{1, 16};
  const PeriodicScalarField f = test_field(shape);
  HessianWorkspace ws;
  for (auto _ : state) {
    const HyperhermitianField h = quat_hessian(f, DerivMode::FD4, &ws);
    benchmark::DoNotOptimize(h.ch[0].data());
  }
  state.SetItemsProcessed(state.iterations() * f.size());
}
BENCHMARK(QuatHessianN1);

static void QuatHessianN2(benchmark::State& state) {
  const GridShape shape{2, 5};
  const PeriodicScalarField f = test_field(shape);
  HessianWorkspace ws;
  for (auto _ : state) {
    const HyperhermitianField h = quat_hessian(f, DerivMode::FD4, &ws);
    benchmark::DoNotOptimize(h.ch[0].data());
  }
  state.SetItemsProcessed(state.iterations() * f.size());
}
BENCHMARK(QuatHessianN2)->Unit(benchmark::kMillisecond);

static void RhsEvalN1(benchmark::State& state) {
  FlowParams params;
  params.shape = GridShape{1, 16};
  params.kappa = 0.25;
  const PeriodicScalarField F = test_field(params.shape);
  const PeriodicScalarField phi(params.shape);
  HessianWorkspace ws;
  for (auto _ : state) {
    const RhsEval ev = evaluate_rhs(phi, params, F, &ws);
    benchmark::DoNotOptimize(ev.min_eig);
  }
  state.SetItemsProcessed(state.iterations() * F.size());
}
BENCHMARK(RhsEvalN1);

static void MooreDet(benchmark::State& state) {
  Rng rng(1);
  const HyperhermitianMatrix u =
      random_posdef_hyperhermitian(rng, int(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(moore_det(u));
  }
}
BENCHMARK(MooreDet)->Arg(1)->Arg(2)->Arg(3);

static void PairwiseSum(benchmark::State& state) {
  Rng rng(2);
  std::vector<double> v(std::size_t(state.range(0)));
  for (double& x : v) x = rng.uniform(-1, 1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(pairwise_sum(v.data(), v.size()));
  }
  state.SetItemsProcessed(state.iterations() * v.size());
}
BENCHMARK(PairwiseSum)->Arg(1 << 16)->Arg(1 << 20);

static void FormuleOracle(benchmark::State& state) {
  Rng rng(3);
  const HyperhermitianMatrix g = random_posdef_hyperhermitian(rng, 2);
  const HyperhermitianMatrix h = random_hyperhermitian(rng, 2, 0.5);
  for (auto _ : state) {
    const FormuleResiduals r = verify_formule(g, h, 0.25);
    benchmark::DoNotOptimize(r.wedge_ratio);
  }
}
BENCHMARK(FormuleOracle)->Unit(benchmark::kMicrosecond);

BENCHMARK_MAIN();
