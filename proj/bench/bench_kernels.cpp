// OpenMP jump enumeration against the serial reference on the same inputs.
#include "bjump/jump.hpp"
#include "bjump/oracle.hpp"

#include <benchmark/benchmark.h>

using namespace bjump;

namespace {

JumpConfig config(int base) {
  JumpConfig cfg;
  cfg.base = base == 0 ? empty_set() : evens();
  cfg.budget = 2'000;
  return cfg;
}

template <JumpStageView (*Enumerate)(Variant, const JumpConfig&, const std::vector<Nat>&)>
void BM_enum(benchmark::State& state) {
  auto v = static_cast<Variant>(state.range(0));
  JumpConfig cfg = config(static_cast<int>(state.range(1)));
  auto domain = range_domain(static_cast<std::uint64_t>(state.range(2)));
  std::size_t members = 0;
  for (auto _ : state) {
    auto view = Enumerate(v, cfg, domain);
    members = view.members.size();
    benchmark::DoNotOptimize(members);
  }
  state.counters["members"] = static_cast<double>(members);
  state.SetItemsProcessed(state.iterations() * state.range(2));
}

void args(benchmark::internal::Benchmark* b) {
  for (int v : {static_cast<int>(Variant::B), static_cast<int>(Variant::B0)})
    for (int base : {0, 1})
      for (int n : {64, 256}) b->Args({v, base, n});
  b->ArgNames({"variant", "base", "points"})->Unit(benchmark::kMillisecond);
}

}  // namespace

BENCHMARK(BM_enum<enum_jump_serial>)->Name("enum_jump/serial")->Apply(args);
BENCHMARK(BM_enum<enum_jump>)->Name("enum_jump/openmp")->Apply(args);

BENCHMARK_MAIN();
