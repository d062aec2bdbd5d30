#include <sdfir/error_system.hpp>
#include <sdfir/hinf.hpp>
#include <sdfir/kyp_lmi.hpp>
#include <sdfir/lifting.hpp>
#include <sdfir/numerics.hpp>
#include <sdfir/synth.hpp>

#include <benchmark/benchmark.h>

#include <random>

using namespace sdfir;

namespace {

StateSpace tf(std::vector<double> num, std::vector<double> den) { return from_transfer_function(num, den); }

StateSpace random_discrete(int n, unsigned seed) {
  std::mt19937 rng(seed);
  std::normal_distribution<double> nd;
  Matrix a(n, n), b(n, 1), c(1, n);
  for (Index i = 0; i < a.size(); ++i) a.data()[i] = nd(rng);
  a *= 0.9 / spectral_radius(a);
  for (Index i = 0; i < n; ++i) {
    b(i, 0) = nd(rng);
    c(0, i) = nd(rng);
  }
  return StateSpace::discrete(a, b, c, Matrix::Zero(1, 1), 1.0);
}

DesignSpec tiny() { return DesignSpec{tf({1.0}, {1.0, 1.0}), tf({1.0}, {1.0, 2.0}), 1.0, 1, 1, 2, 2, {}}; }

}  // namespace

static void BM_Expm(benchmark::State& state) {
  const auto n = static_cast<Index>(state.range(0));
  std::mt19937 rng(1);
  std::normal_distribution<double> nd;
  Matrix a(n, n);
  for (Index i = 0; i < a.size(); ++i) a.data()[i] = nd(rng);
  for (auto _ : state) benchmark::DoNotOptimize(expm(a));
}
BENCHMARK(BM_Expm)->Arg(4)->Arg(16)->Arg(64);

static void BM_HinfNorm(benchmark::State& state) {
  const StateSpace g = random_discrete(static_cast<int>(state.range(0)), 2);
  for (auto _ : state) benchmark::DoNotOptimize(hinf_norm(g).value);
}
BENCHMARK(BM_HinfNorm)->Arg(4)->Arg(16)->Arg(64);

static void BM_KypNormBisect(benchmark::State& state) {
  const StateSpace g = random_discrete(static_cast<int>(state.range(0)), 3);
  for (auto _ : state) benchmark::DoNotOptimize(kyp_norm_bisect(g).value);
}
BENCHMARK(BM_KypNormBisect)->Arg(2)->Arg(5)->Unit(benchmark::kMillisecond);

static void BM_Lift(benchmark::State& state) {
  const StateSpace g = random_discrete(8, 4);
  for (auto _ : state) benchmark::DoNotOptimize(lift(g, static_cast<int>(state.range(0))));
}
BENCHMARK(BM_Lift)->Arg(2)->Arg(8);

static void BM_BuildErrorSystem(benchmark::State& state) {
  DesignSpec s = tiny();
  s.M = static_cast<int>(state.range(0));
  s.N = 6;
  for (auto _ : state) benchmark::DoNotOptimize(build_error_system(s));
}
BENCHMARK(BM_BuildErrorSystem)->Arg(8)->Arg(32);

static void BM_DesignTiny(benchmark::State& state) {
  const DesignSpec s = tiny();
  for (auto _ : state) benchmark::DoNotOptimize(design_fir(s).gamma);
}
BENCHMARK(BM_DesignTiny)->Unit(benchmark::kMillisecond);

static void BM_DesignTaps(benchmark::State& state) {
  DesignSpec s = tiny();
  s.M = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(design_fir(s).gamma);
}
BENCHMARK(BM_DesignTaps)->Arg(4)->Arg(8)->Arg(16)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
