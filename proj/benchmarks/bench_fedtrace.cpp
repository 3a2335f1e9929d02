#include <benchmark/benchmark.h>

#include "fedtrace/fedosov.hpp"
#include "fedtrace/invariants.hpp"
#include "fedtrace/models.hpp"
#include "fedtrace/trace.hpp"

using namespace fedtrace;

namespace {

void BM_TrigPolyProduct(benchmark::State& state) {
  RandomSource rng(1);
  const int modes = static_cast<int>(state.range(0));
  const TrigPoly a = rng.trig_poly(2, 3, modes);
  const TrigPoly b = rng.trig_poly(2, 3, modes);
  for (auto _ : state) benchmark::DoNotOptimize(a * b);
}
BENCHMARK(BM_TrigPolyProduct)->Arg(4)->Arg(16)->Arg(48);

void BM_MoyalFlat(benchmark::State& state) {
  RandomSource rng(2);
  const int N = static_cast<int>(state.range(0));
  const FedosovConnection<JetPoly> conn(build_flat<JetPoly>(1, {}), N);
  const JetPoly f = rng.jet_poly(2, 4, 4);
  const JetPoly g = rng.jet_poly(2, 4, 4);
  for (auto _ : state) benchmark::DoNotOptimize(conn.star(f, g));
}
BENCHMARK(BM_MoyalFlat)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);

void BM_TorusConnection(benchmark::State& state) {
  RandomSource rng(3);
  const auto geo = random_perturbed_torus(rng, 1, 2);
  const int N = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(FedosovConnection<TrigPoly>(geo, N).r());
}
BENCHMARK(BM_TorusConnection)->Arg(2)->Arg(3)->Unit(benchmark::kMillisecond);

void BM_TorusStar(benchmark::State& state) {
  RandomSource rng(4);
  const auto geo = random_perturbed_torus(rng, 1, 2);
  const FedosovConnection<TrigPoly> conn(geo, static_cast<int>(state.range(0)));
  const TrigPoly f = rng.trig_poly(2, 1, 2);
  const TrigPoly g = rng.trig_poly(2, 1, 2);
  for (auto _ : state) benchmark::DoNotOptimize(conn.star(f, g));
}
BENCHMARK(BM_TorusStar)->Arg(2)->Arg(3)->Unit(benchmark::kMillisecond);

void BM_TorusQuantize(benchmark::State& state) {
  RandomSource rng(5);
  const auto geo = random_perturbed_torus(rng, 1, 2);
  const FedosovConnection<TrigPoly> conn(geo, 3);
  Frequency k;
  k[0] = 1;
  k[1] = 1;
  const TrigPoly f = TrigPoly::cos_mode(k, Rational(1), 2) + TrigPoly::sin_mode(k, Rational(1, 2), 2);
  for (auto _ : state) benchmark::DoNotOptimize(conn.quantize(f));
}
BENCHMARK(BM_TorusQuantize)->Unit(benchmark::kMillisecond);

void BM_TraceProperty(benchmark::State& state) {
  RandomSource rng(6);
  const FedosovConnection<TrigPoly> conn(random_perturbed_torus(rng, 1, 2), 3);
  const TrigPoly f = rng.trig_poly(2, 1, 2);
  const TrigPoly h = rng.trig_poly(2, 1, 2);
  for (auto _ : state) benchmark::DoNotOptimize(verify_trace_property(conn, f, h));
}
BENCHMARK(BM_TraceProperty)->Unit(benchmark::kMillisecond);

void BM_TraceDensityTorus(benchmark::State& state) {
  RandomSource rng(7);
  const auto geo = random_perturbed_torus(rng, static_cast<int>(state.range(0)), 2);
  for (auto _ : state) benchmark::DoNotOptimize(trace_density(geo));
}
BENCHMARK(BM_TraceDensityTorus)->Arg(1)->Arg(2)->Unit(benchmark::kMillisecond);

void BM_KahlerInvariant(benchmark::State& state) {
  const KahlerModelS2 model(perturbed_profile(Rational(1, 10), Rational(1, 5)), Rational(1));
  for (auto _ : state) benchmark::DoNotOptimize(kahler_invariant(model));
}
BENCHMARK(BM_KahlerInvariant)->Unit(benchmark::kMillisecond);

void BM_VariationCheck(benchmark::State& state) {
  RandomSource rng(8);
  TorusPath path;
  path.T0 = random_symmetric_tensor(rng, 1, 2, 1);
  path.T1 = random_symmetric_tensor(rng, 1, 2, 2);
  path.omega0 = {random_closed_two_form(rng, 1)};
  path.beta = {{rng.trig_poly(2, 1, 2), rng.trig_poly(2, 1, 2)}};
  const TrigPoly F = rng.trig_poly(2, 1, 2) + trace_density(path.at(Rational(1))).rho2;
  for (auto _ : state) benchmark::DoNotOptimize(variation_check(path, F, Rational(0), Rational(1, 10000)));
}
BENCHMARK(BM_VariationCheck)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
