#include "curriculum/gridworld.hpp"
#include "curriculum/learner.hpp"
#include "curriculum/noise.hpp"
#include "curriculum/progression.hpp"

#include <benchmark/benchmark.h>

#include <cmath>
#include <filesystem>
#include <memory>
#include <random>

namespace {

using namespace curriculum;

void BM_FrictionStep(benchmark::State& state) {
  FrictionParams params;
  params.mass = solve_mass(150.0);
  params.interval = static_cast<int>(state.range(0));
  auto fs = init_friction_state(params, 0.0, 42);
  double t = 0.0;
  for (auto _ : state) {
    t += 1.0;
    benchmark::DoNotOptimize(friction_step(fs, params, 0.1 * t + 15.0 * std::sin(t / 16.0)));
  }
}
BENCHMARK(BM_FrictionStep)->Arg(10)->Arg(100);

void BM_ExponentialProgress(benchmark::State& state) {
  const ExponentialParams params(100000, 0.1);
  std::int64_t t = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(exponential_progress(t, params));
    t = (t + 37) % 100000;
  }
}
BENCHMARK(BM_ExponentialProgress);

void BM_NoiseGenerate(benchmark::State& state) {
  std::mt19937_64 rng(7);
  for (auto _ : state) benchmark::DoNotOptimize(gen_noise(NoiseKind::local, 25, 0.08, rng));
}
BENCHMARK(BM_NoiseGenerate);

void BM_NoiseEvaluate(benchmark::State& state) {
  std::mt19937_64 rng(7);
  const auto f = gen_noise(NoiseKind::global, 4, 0.35, rng);
  double x = 0.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(f(x));
    x = x + 0.001 > 1.0 ? 0.0 : x + 0.001;
  }
}
BENCHMARK(BM_NoiseEvaluate);

void BM_GridWorldEpisode(benchmark::State& state) {
  const auto layout = std::make_shared<const GridWorldLayout>(GridWorldLayout::load(
      std::filesystem::path(CURRICULUM_DATA_DIR) / "gridworld_maze.txt"));
  GridWorld env(layout);
  QTable q;
  std::mt19937_64 rng(3);
  for (auto _ : state) {
    auto s = env.reset_at(layout->start());
    while (!env.done()) {
      const auto key = gridworld_key(*layout, s);
      const Action a = select_action(q, key, 0.2, rng);
      const auto tr = env.step(a);
      q_update(q, key, a, tr.reward, gridworld_key(*layout, tr.next_state), tr.done);
      s = tr.next_state;
    }
  }
}
BENCHMARK(BM_GridWorldEpisode);

} // namespace

BENCHMARK_MAIN();
