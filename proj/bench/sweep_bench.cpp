// Serial reference vs OpenMP sweep over every region of a large random atlas.

#include <random>

#include <benchmark/benchmark.h>

#include "leaksim/kernels.hpp"
#include "random_atlas.hpp"

namespace {

using namespace leaksim;

struct Workload {
  kernels::EntryColumns columns;
  std::vector<kernels::BanMask> masks;
};

const Workload& workload(std::size_t entries) {
  static std::map<std::size_t, Workload> cache;
  auto [it, fresh] = cache.try_emplace(entries);
  if (!fresh) return it->second;
  std::mt19937_64 rng(entries);
  testing::RandomInstance inst;
  // Keep drawing until the instance is near the requested size.
  do {
    inst = testing::make_random_instance(rng, entries);
  } while (inst.atlas.entries.size() < entries / 2);
  auto& w = it->second;
  w.columns = kernels::make_columns(inst.atlas, inst.pog);
  for (std::size_t r = 0; r < w.columns.region_ids.size(); ++r) {
    kernels::BanMask m(w.columns.share.size(), 0);
    double rest = 0;
    for (std::size_t i = 0; i < m.size(); ++i) {
      m[i] = w.columns.region[i] == r;
      if (!m[i]) rest += w.columns.share[i];
    }
    if (rest > 0) w.masks.push_back(std::move(m));
  }
  return w;
}

void BM_SweepSerial(benchmark::State& state) {
  const auto& w = workload(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(kernels::sweep_totals_serial(w.columns, w.masks));
  }
  state.counters["bans"] = static_cast<double>(w.masks.size());
  state.counters["entries"] = static_cast<double>(w.columns.share.size());
}

void BM_SweepParallel(benchmark::State& state) {
  const auto& w = workload(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(kernels::sweep_totals_parallel(w.columns, w.masks));
  }
  state.counters["bans"] = static_cast<double>(w.masks.size());
  state.counters["entries"] = static_cast<double>(w.columns.share.size());
  state.counters["threads"] = kernels::max_threads();
}

BENCHMARK(BM_SweepSerial)->Arg(200)->Arg(2000)->Arg(20000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SweepParallel)->Arg(200)->Arg(2000)->Arg(20000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
