#include <benchmark/benchmark.h>

#include <cstdint>
#include <vector>

#include "ngls/dimension.hpp"
#include "ngls/expansion.hpp"
#include "ngls/ffi.hpp"
#include "ngls/measure.hpp"
#include "ngls/rng.hpp"

using namespace ngls;

namespace {

Family mixed_family() {
  std::vector<GlsSystem> systems;
  systems.push_back(GlsSystem::finite("B", {rat(1, 2), rat(1, 2)}));
  systems.push_back(GlsSystem::luroth("L"));
  systems.push_back(GlsSystem::geometric("G", rat(1, 3)));
  return Family(std::move(systems));
}

Family luroth_family() {
  std::vector<GlsSystem> systems;
  systems.push_back(GlsSystem::luroth("L"));
  return Family(std::move(systems));
}

std::vector<int64_t> sample_word(const Family& fam, int64_t depth) {
  Rng rng(17);
  OmegaSequence omega(fam, OmegaRule::periodic({0, 1, 2}));
  std::vector<int64_t> word;
  word.reserve(static_cast<size_t>(depth));
  for (int64_t i = 1; i <= depth; ++i) {
    const auto count = fam[omega.at(i)].digit_count();
    const int64_t hi = count ? *count : 6;
    word.push_back(1 + static_cast<int64_t>(rng.below(static_cast<uint64_t>(hi))));
  }
  return word;
}

void BM_FundamentalInterval(benchmark::State& state) {
  const Family fam = mixed_family();
  const int64_t depth = state.range(0);
  const std::vector<int64_t> word = sample_word(fam, depth);
  for (auto _ : state) {
    OmegaSequence omega(fam, OmegaRule::periodic({0, 1, 2}));
    const Ffi box = fundamental_interval(fam, omega, word);
    benchmark::DoNotOptimize(box.log_length);
  }
  state.SetItemsProcessed(state.iterations() * depth);
}

void BM_DigitScan(benchmark::State& state) {
  const Family fam = mixed_family();
  const int64_t depth = state.range(0);
  const Rat x = rat(618033988, 1000000001);
  for (auto _ : state) {
    OmegaSequence omega(fam, OmegaRule::periodic({0, 1, 2}));
    const Expansion e = digits_of(fam, omega, x, depth);
    benchmark::DoNotOptimize(e.word.data());
  }
  state.SetItemsProcessed(state.iterations() * depth);
}

void BM_WeavePrefix(benchmark::State& state) {
  const Family fam = mixed_family();
  const int64_t n = state.range(0);
  for (auto _ : state) {
    OmegaSequence omega(
        fam, OmegaRule::weave({rat(1, 2), rat(1, 3), rat(1, 6)}));
    int64_t acc = 0;
    for (int64_t k = 1; k <= n; ++k) acc += omega.at(k);
    benchmark::DoNotOptimize(acc);
  }
  state.SetItemsProcessed(state.iterations() * n);
}

void BM_CoverSum(benchmark::State& state) {
  const Family fam = mixed_family();
  const FrequencyVector alpha(
      fam, {head_law({rat(1, 4), rat(3, 4)}, rat(1, 3)),
            geometric_law(rat(1, 2), rat(1, 3)),
            geometric_law(rat(1, 2), rat(1, 3))});
  const int64_t n = state.range(0);
  for (auto _ : state) {
    OmegaSequence omega(fam, OmegaRule::periodic({0, 1, 2}));
    const double s = exact_cover_sum(fam, omega, n, alpha, 0.8, 3, 0.31);
    benchmark::DoNotOptimize(s);
  }
}

void BM_BetaWindow(benchmark::State& state) {
  const Family fam = luroth_family();
  const FrequencyVector alpha(fam, {geometric_law(rat(1, 2))});
  const int64_t horizon = state.range(0);
  for (auto _ : state) {
    const BetaResult b = beta(fam, alpha, horizon);
    benchmark::DoNotOptimize(b.value);
  }
}

void BM_SampleWord(benchmark::State& state) {
  const Family fam = luroth_family();
  const FrequencyVector alpha(fam, {geometric_law(rat(1, 2))});
  OmegaSequence omega(fam, OmegaRule::periodic({0}));
  FibreBernoulli mu(fam, alpha, omega);
  const int64_t depth = state.range(0);
  uint64_t seed = 0;
  for (auto _ : state) {
    const std::vector<int64_t> word = mu.sample(depth, ++seed);
    benchmark::DoNotOptimize(word.data());
  }
  state.SetItemsProcessed(state.iterations() * depth);
}

void BM_SamplePowerTail(benchmark::State& state) {
  std::vector<GlsSystem> systems;
  systems.push_back(GlsSystem::power("P", 3.0));
  const Family fam(std::move(systems));
  const FrequencyVector alpha(fam, {power_law(3.0)});
  OmegaSequence omega(fam, OmegaRule::periodic({0}));
  FibreBernoulli mu(fam, alpha, omega);
  const int64_t depth = state.range(0);
  uint64_t seed = 0;
  for (auto _ : state) {
    const std::vector<int64_t> word = mu.sample(depth, ++seed);
    benchmark::DoNotOptimize(word.data());
  }
  state.SetItemsProcessed(state.iterations() * depth);
}

BENCHMARK(BM_FundamentalInterval)->Arg(16)->Arg(64)->Arg(256);
BENCHMARK(BM_DigitScan)->Arg(16)->Arg(64);
BENCHMARK(BM_WeavePrefix)->Arg(1 << 14)->Arg(1 << 20);
BENCHMARK(BM_CoverSum)->Arg(4)->Arg(6)->Arg(8);
BENCHMARK(BM_BetaWindow)->Arg(64)->Arg(512);
BENCHMARK(BM_SampleWord)->Arg(1 << 10)->Arg(1 << 14);
BENCHMARK(BM_SamplePowerTail)->Arg(1 << 10);

}  // namespace

BENCHMARK_MAIN();
