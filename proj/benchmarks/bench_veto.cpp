#include <benchmark/benchmark.h>

#include "veto/core.hpp"
#include "veto/distortion.hpp"
#include "veto/rules.hpp"
#include "veto/simplex.hpp"

namespace {

using namespace veto;

void BM_SimultaneousPluralityVeto(benchmark::State& state) {
  const Election e = random_election(static_cast<std::size_t>(state.range(0)), static_cast<std::size_t>(state.range(1)), 7);
  for (auto _ : state) benchmark::DoNotOptimize(simultaneous_plurality_veto(e));
}
BENCHMARK(BM_SimultaneousPluralityVeto)->Args({4, 100})->Args({8, 1000})->Args({16, 1000});

void BM_SerialVeto(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(1));
  const Election e = random_election(static_cast<std::size_t>(state.range(0)), n, 7);
  const WeightVector q = plurality_weights(e);
  const VetoOrder order{e.voters()};
  for (auto _ : state) benchmark::DoNotOptimize(serial_veto(e, q, order));
}
BENCHMARK(BM_SerialVeto)->Args({4, 100})->Args({8, 1000});

void BM_VetoCore(benchmark::State& state) {
  const Election e = random_election(static_cast<std::size_t>(state.range(0)), static_cast<std::size_t>(state.range(1)), 7);
  const WeightVector p = unit_voter_weights(e);
  const WeightVector q = uniform_candidate_weights(e, p.total());
  for (auto _ : state) benchmark::DoNotOptimize(veto_core(e, p, q));
}
BENCHMARK(BM_VetoCore)->Args({4, 1000})->Args({8, 200});

void BM_FindBlocking(benchmark::State& state) {
  const Election e = random_election(5, static_cast<std::size_t>(state.range(0)), 7);
  const WeightVector p = unit_voter_weights(e);
  const WeightVector q = plurality_weights(e);
  for (auto _ : state) {
    for (CandidateId c : e.candidates()) benchmark::DoNotOptimize(find_blocking(e, p, q, c));
  }
}
BENCHMARK(BM_FindBlocking)->Arg(8)->Arg(14);

void BM_Distortion(benchmark::State& state) {
  const auto k = static_cast<std::size_t>(state.range(0));
  const Election e = random_election(k, k, 7);
  const CandidateId w = simultaneous_plurality_veto(e).winners.winners.front();
  for (auto _ : state) benchmark::DoNotOptimize(distortion(e, w, k * k));
}
BENCHMARK(BM_Distortion)->Arg(3)->Arg(4)->Arg(5)->Unit(benchmark::kMillisecond);

void BM_SimplexDense(benchmark::State& state) {
  const auto k = static_cast<std::size_t>(state.range(0));
  LinearProgram lp;
  for (std::size_t i = 0; i < k; ++i) {
    std::vector<Rational> row(k);
    for (std::size_t j = 0; j < k; ++j) row[j] = Rational(static_cast<long>((i * 7 + j * 3) % 5 + 1));
    lp.A.push_back(row);
    lp.b.push_back(Rational(static_cast<long>(10 + i)));
    lp.c.push_back(Rational(static_cast<long>(i % 3 + 1)));
  }
  for (auto _ : state) benchmark::DoNotOptimize(solve_lp(lp));
}
BENCHMARK(BM_SimplexDense)->Arg(8)->Arg(16)->Arg(32);

}  // namespace

BENCHMARK_MAIN();
