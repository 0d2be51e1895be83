#include <benchmark/benchmark.h>

#include <random>

#include "rfront/kernels.hpp"
#include "rfront/synth.hpp"
#include "rfront/terms.hpp"

using namespace rfront;
using kernels::Vec2;

namespace {

std::vector<Vec2> cloud(std::size_t n) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<Vec2> pos(n);
  for (auto& p : pos) p = {u(rng), u(rng)};
  return pos;
}

const std::vector<RawRecord>& records() {
  static const auto recs = [] {
    auto cfg = three_front_config(5);
    for (auto& f : cfg.fronts) f.size *= 10;
    return generate_records(cfg).first;
  }();
  return recs;
}

const std::vector<Contingency>& tables() {
  static const auto t = [] {
    std::mt19937_64 rng(12);
    std::vector<Contingency> out(200000);
    for (auto& c : out)
      c = {static_cast<std::int64_t>(1 + rng() % 100), static_cast<std::int64_t>(rng() % 1000),
           static_cast<std::int64_t>(rng() % 10000), static_cast<std::int64_t>(rng() % 100000)};
    return out;
  }();
  return t;
}

template <auto Kernel>
void BM_repulsion(benchmark::State& state) {
  const auto pos = cloud(static_cast<std::size_t>(state.range(0)));
  const double k = 1.0 / std::sqrt(double(pos.size()));
  std::vector<Vec2> disp(pos.size());
  for (auto _ : state) {
    Kernel(pos, k, disp);
    benchmark::DoNotOptimize(disp.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

template <auto Kernel>
void BM_keys(benchmark::State& state) {
  const auto& recs = records();
  for (auto _ : state) benchmark::DoNotOptimize(Kernel(recs));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(recs.size()));
}

template <auto Kernel>
void BM_llr(benchmark::State& state) {
  const auto& t = tables();
  std::vector<double> out(t.size());
  for (auto _ : state) {
    Kernel(t, out);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(t.size()));
}

}  // namespace

BENCHMARK(BM_repulsion<kernels::repulsion_serial>)->Name("repulsion/serial")->Arg(500)->Arg(2000);
BENCHMARK(BM_repulsion<kernels::repulsion_omp>)->Name("repulsion/omp")->Arg(500)->Arg(2000)->UseRealTime();
BENCHMARK(BM_repulsion<kernels::repulsion_grid_serial>)->Name("repulsion_grid/serial")->Arg(2000)->Arg(20000);
BENCHMARK(BM_repulsion<kernels::repulsion_grid_omp>)
    ->Name("repulsion_grid/omp")
    ->Arg(2000)
    ->Arg(20000)
    ->UseRealTime();
BENCHMARK(BM_keys<kernels::reference_keys_serial>)->Name("reference_keys/serial");
BENCHMARK(BM_keys<kernels::reference_keys_omp>)->Name("reference_keys/omp")->UseRealTime();
BENCHMARK(BM_llr<kernels::llr_serial>)->Name("llr/serial");
BENCHMARK(BM_llr<kernels::llr_omp>)->Name("llr/omp")->UseRealTime();

BENCHMARK_MAIN();
