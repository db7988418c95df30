// Serial reference vs OpenMP kernels. Run: ./build/bench/wft_bench
#include <benchmark/benchmark.h>

#include <cmath>
#include <random>

#include "wft/estimates.hpp"
#include "wft/kernels.hpp"
#include "wft/systems.hpp"

using namespace wft;

namespace {

PiecewiseConstant rough(std::size_t jumps) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> U(-1, 1);
  std::vector<double> br;
  std::vector<State> v{State::Zero(2)};
  for (std::size_t k = 0; k < jumps; ++k) {
    br.push_back(-10.0 + 20.0 * (k + 0.5 * (U(rng) + 1)) / jumps);
    State s(2);
    s << U(rng), U(rng);
    v.push_back(s);
  }
  v.back().setZero();
  return PiecewiseConstant::from(br, v);
}

void cell_args(benchmark::internal::Benchmark* b) {
  for (long N : {40, 160, 640}) b->Arg(N);
}

template <bool Omp>
void BM_cell_averages(benchmark::State& st) {
  const auto f = rough(20000);
  const long N = st.range(0);
  const auto m = static_cast<std::size_t>(2 * N * N);
  for (auto _ : st) {
    auto out = Omp ? kernels::cell_averages_omp(f, -N * N, N, m) : kernels::cell_averages_serial(f, -N * N, N, m);
    benchmark::DoNotOptimize(out.data());
  }
  st.SetItemsProcessed(st.iterations() * static_cast<long>(m));
}

template <bool Omp>
void BM_sample(benchmark::State& st) {
  const auto f = rough(20000);
  std::vector<double> xs(static_cast<std::size_t>(st.range(0)));
  for (std::size_t k = 0; k < xs.size(); ++k) xs[k] = -10.0 + 20.0 * static_cast<double>(k) / xs.size();
  for (auto _ : st) {
    auto out = Omp ? kernels::sample_omp(f, xs) : kernels::sample_serial(f, xs);
    benchmark::DoNotOptimize(out.data());
  }
  st.SetItemsProcessed(st.iterations() * st.range(0));
}

template <bool Omp>
void BM_interaction_sampling(benchmark::State& st) {
  IsothermalPSystem p;
  SampleOptions o;
  o.count = static_cast<std::size_t>(st.range(0));
  o.parallel = Omp;
  for (auto _ : st) benchmark::DoNotOptimize(sample_interior_interactions(p, o).data());
  st.SetItemsProcessed(st.iterations() * st.range(0));
}

}  // namespace

BENCHMARK(BM_cell_averages<false>)->Apply(cell_args)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_cell_averages<true>)->Apply(cell_args)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_sample<false>)->Arg(1 << 20)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_sample<true>)->Arg(1 << 20)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_interaction_sampling<false>)->Arg(1000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_interaction_sampling<true>)->Arg(1000)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
