#include <algorithm>
#include <random>
#include <vector>

#include <benchmark/benchmark.h>

#include "sofpid/bench.hpp"
#include "sofpid/plant.hpp"
#include "sofpid/sofpid_controller.hpp"

namespace {

using sofpid::almmo::Vector;

std::vector<Vector> input_stream(int dim, std::size_t n) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  std::vector<Vector> xs;
  for (std::size_t i = 0; i < n; ++i) {
    Vector x(dim);
    for (int k = 0; k < dim; ++k) x[k] = d(rng);
    xs.push_back(std::move(x));
  }
  return xs;
}

// One learn_step with the rule count pinned at range(0).
void BM_LearnStep(benchmark::State& state) {
  const int rules = static_cast<int>(state.range(0));
  const int dim = static_cast<int>(state.range(1));
  auto model = sofpid::harness::make_pinned_model(dim, rules, 1);
  const auto xs = input_stream(dim, 4096);
  std::size_t i = 0;
  for (auto _ : state) {
    const Vector& x = xs[i++ & 4095];
    benchmark::DoNotOptimize(model.learn_step(x, x.sum()));
  }
  state.counters["rules"] = rules;
  state.SetComplexityN(rules);
}
BENCHMARK(BM_LearnStep)
    ->ArgsProduct({{2, 4, 8, 16, 32}, {3}})
    ->Complexity(benchmark::oN);
BENCHMARK(BM_LearnStep)->ArgsProduct({{8}, {1, 2, 3, 6, 12}});

void BM_Predict(benchmark::State& state) {
  const int rules = static_cast<int>(state.range(0));
  const auto model = sofpid::harness::make_pinned_model(3, rules, 1);
  const auto xs = input_stream(3, 4096);
  std::size_t i = 0;
  for (auto _ : state) benchmark::DoNotOptimize(model.predict(xs[i++ & 4095]));
}
BENCHMARK(BM_Predict)->RangeMultiplier(2)->Range(2, 32);

// Full controller step in the running phase: both models learn.
void BM_SofPidStep(benchmark::State& state) {
  sofpid::control::SofPidController ctl;
  double y = 3.0;
  for (int t = 0; t < 10; ++t) y -= 0.1 * ctl.step(1.0, y).u;
  const sofpid::control::SofPidController primed = ctl;
  std::mt19937_64 rng(3);
  std::normal_distribution<double> noise(0.0, 0.005);
  int k = 0;
  for (auto _ : state) {
    if (++k == 200) {
      state.PauseTiming();
      ctl = primed;
      y = 3.0;
      k = 0;
      state.ResumeTiming();
    }
    const double u = ctl.step(1.0, y + noise(rng)).u;
    y -= 0.1 * std::clamp(u, 0.0, 1.2);
    benchmark::DoNotOptimize(u);
  }
}
BENCHMARK(BM_SofPidStep);

void BM_PlantStep(benchmark::State& state) {
  const auto sc = sofpid::plant::find_scenario("s2");
  sofpid::plant::Rng rng(1);
  auto s = sofpid::plant::plant_reset(sc, rng);
  for (auto _ : state) {
    auto next = sofpid::plant::plant_step(s, 0.01, sc, rng);
    if (next.stopped) next = sofpid::plant::plant_reset(sc, rng);
    s = next;
    benchmark::DoNotOptimize(s.y);
  }
}
BENCHMARK(BM_PlantStep);

}  // namespace

BENCHMARK_MAIN();
