#include <benchmark/benchmark.h>

#include <numbers>

#include <ferronema/corrector.hpp>
#include <ferronema/effective.hpp>
#include <ferronema/energy.hpp>
#include <ferronema/magnetics.hpp>

using namespace ferronema;

namespace {

const Spheroid kRef = make_spheroid(0.8, 0.5);

VectorField twisted_layout(int n, const ParticleEnsemble* e) {
  return make_vector_field(make_grid(Box{}, n), [](const Vec3& x) { return Vec3(0.1 * x.x(), 0.0, 1.0); }, e);
}

void BM_SurfaceQuadrature(benchmark::State& state) {
  const Spheroid s = make_spheroid(2.0, 1.0, Vec3::Zero(), Rotation::about_axis(Vec3(1, 1, 0), 0.3));
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(anchoring_tensor(s, make_surface_quadrature(s, n, 2 * n)));
}
BENCHMARK(BM_SurfaceQuadrature)->Arg(16)->Arg(64);

void BM_AnchoringEigenvalues(benchmark::State& state) {
  const Spheroid s = make_spheroid(20.0, 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(anchoring_eigenvalues(s));
}
BENCHMARK(BM_AnchoringEigenvalues);

void BM_PairEnergy(benchmark::State& state) {
  const MagnetizedSpheroid a{make_spheroid(1.0, 0.5), 1.0};
  const MagnetizedSpheroid b{make_spheroid(1.0, 0.5, Vec3(3, 1, 2)), 1.0};
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(pair_interaction_energy(a, b, n));
}
BENCHMARK(BM_PairEnergy)->Arg(4)->Arg(8);

void BM_EnsemblePairs(benchmark::State& state) {
  const double eps = 1.0 / static_cast<double>(state.range(0));
  const ParticleEnsemble e = generate_periodic(eps, Box{}, ScalingParams{}, kRef, identity_field());
  for (auto _ : state) benchmark::DoNotOptimize(ensemble_pair_energies(e, assumption_moment_density(e), 4));
  state.counters["particles"] = static_cast<double>(e.size());
}
BENCHMARK(BM_EnsemblePairs)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond);

void BM_MicroEnergyGradient(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const ParticleEnsemble e = generate_periodic(0.25, Box{}, ScalingParams{}, kRef,
                                               twist_field(Vec3::UnitX(), Vec3::UnitX(), std::numbers::pi));
  const VectorField f = twisted_layout(n, &e);
  const EnergyModel model = EnergyModel::micro(f, e);
  std::vector<Vec3> grad;
  for (auto _ : state) benchmark::DoNotOptimize(model.evaluate(f.values, grad));
  state.counters["nodes"] = static_cast<double>(f.size());
}
BENCHMARK(BM_MicroEnergyGradient)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_HomogenizedEnergyGradient(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const VectorField f = twisted_layout(n, nullptr);
  const RotationField field = twist_field(Vec3::UnitX(), Vec3::UnitX(), std::numbers::pi);
  const AnchoringEigenvalues lam = anchoring_eigenvalues(kRef);
  const MatrixField A = closed_form_A(field, 1.0, lam.axial, lam.transverse, f.grid);
  const EffectiveMagnetization M = closed_form_M(field, 1.0, f.grid);
  const EnergyModel model = EnergyModel::homogenized(f, A, M, Vec3::Zero());
  std::vector<Vec3> grad;
  for (auto _ : state) benchmark::DoNotOptimize(model.evaluate(f.values, grad));
}
BENCHMARK(BM_HomogenizedEnergyGradient)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_SolveCell(benchmark::State& state) {
  CellProblem cp;
  cp.particle = make_spheroid(1.0, 1.0);
  cp.epsilon = 0.1;
  cp.kappa = 1.1;
  for (auto _ : state) benchmark::DoNotOptimize(solve_cell(cp));
}
BENCHMARK(BM_SolveCell)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
