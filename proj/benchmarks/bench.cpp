#include <cmath>

#include <benchmark/benchmark.h>

#include "blowup/analyzer.hpp"
#include "blowup/profile.hpp"
#include "blowup/simulator.hpp"
#include "blowup/specfun.hpp"
#include "blowup/spectrum.hpp"

using namespace blowup;

static void BM_TricomiU(benchmark::State& state) {
  double xi = 0.1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(specfun::tricomi_u(1.5, xi * xi / 4));
    xi = xi < 8.0 ? xi + 0.37 : 0.1;
  }
}
BENCHMARK(BM_TricomiU);

static void BM_StationaryProfile(benchmark::State& state) {
  const auto p = spectrum::Parameters::make(2.0, 2);
  profile::StationaryProfile f(p);
  double xi = 0.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(f(xi));
    xi = xi < 10.0 ? xi + 0.173 : 0.0;
  }
}
BENCHMARK(BM_StationaryProfile);

static void BM_SolveKappa(benchmark::State& state) {
  const auto p = spectrum::Parameters::make(2.0, 2);
  for (auto _ : state) benchmark::DoNotOptimize(spectrum::solve_kappa(p, 4, int(state.range(0))));
}
BENCHMARK(BM_SolveKappa)->Arg(32)->Arg(64);

static void BM_NuQ(benchmark::State& state) {
  const auto p = spectrum::Parameters::make(2.0, 2);
  for (auto _ : state) benchmark::DoNotOptimize(spectrum::nu_q(p));
}
BENCHMARK(BM_NuQ);

static void BM_SimulatorStep(benchmark::State& state) {
  simulator::SimConfig cfg;
  cfg.params = spectrum::Parameters::make(2.0, 2);
  cfg.dx_min = 1.0 / double(state.range(0));
  cfg.u0 = [](double r, double z) { return 2.0 * std::exp(-(r * r + z * z)); };
  simulator::Simulator sim(cfg);
  const double dt = sim.stable_dt();
  for (auto _ : state) sim.step(dt);
  const auto& mz = sim.mesh_z();
  state.SetItemsProcessed(state.iterations() * int64_t(mz.size()) * int64_t(mz.size()));
}
BENCHMARK(BM_SimulatorStep)->Arg(250)->Arg(1000);

static void BM_RescaleAndProject(benchmark::State& state) {
  const auto p = spectrum::Parameters::make(2.0, 2);
  profile::StationaryProfile phi0(p);
  const auto mode = spectrum::neutral_mode(p);
  const auto rule = quad::half_space_rule(2);
  const auto m = simulator::Mesh1D::geometric(2e-3, 1.05, 6.0);
  const double T = 0.05, tau = 1e-2;
  simulator::Snapshot snap;
  snap.t = T - tau;
  snap.u.resize(size_t(m.size()) * size_t(m.size()));
  for (int i = 0; i < m.size(); ++i)
    for (int j = 0; j < m.size(); ++j) {
      const double ys = (m.centers[i] * m.centers[i]) / tau;
      snap.u[size_t(i) * size_t(m.size()) + size_t(j)] =
          std::pow(tau, -p.m) * phi0(m.centers[j] / std::sqrt(tau)) * std::exp(-ys / 8);
    }
  for (auto _ : state) {
    const auto f = simulator::rescale_phi(snap, m, m, p, T);
    benchmark::DoNotOptimize(
        analyzer::project([&](double r, double z) { return f(r, z); }, phi0, mode, rule, f.y_max()));
  }
}
BENCHMARK(BM_RescaleAndProject);

BENCHMARK_MAIN();
