// Serial reference vs OpenMP for the batch kernels.

#include <benchmark/benchmark.h>

#include <random>

#include "pdreg/kernels.hpp"
#include "pdreg/pda.hpp"

using namespace pdreg;

namespace {

// pX^n vs pX^m style pairs on a counter with a nontrivial bottom.
const char* kCounter =
    "pda\ncontrols: p q\nalphabet: a b c\nstack: X A B\ninit: p X\n"
    "p X a -> p A X\np A a -> p A A\np A b -> q .\nq A b -> q .\nq X c -> p X\np B c -> p A B\n";

Pda counter() { return parse_pda(kCounter).pda; }

std::vector<std::pair<Config, Config>> counter_pairs(const Pda& pda, std::size_t n) {
  std::vector<std::pair<Config, Config>> out;
  const SymbolId X = *pda.find_symbol("X"), A = *pda.find_symbol("A");
  for (std::size_t i = 0; out.size() < n; ++i) {
    std::vector<SymbolId> l(i % 9 + 1, A), r(i % 7 + 2, A);
    l.push_back(X);
    r.push_back(X);
    out.emplace_back(Config{0, StackWord::finite(l)}, Config{static_cast<ControlId>(i % 2), StackWord::finite(r)});
  }
  return out;
}

std::vector<Config> counter_configs(const Pda& pda, std::size_t n) {
  std::vector<Config> out;
  const SymbolId X = *pda.find_symbol("X"), A = *pda.find_symbol("A"), B = *pda.find_symbol("B");
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<SymbolId> w(i % 11, A);
    w.push_back(i % 3 == 0 ? B : X);
    out.push_back(Config{static_cast<ControlId>(i % 2), StackWord::finite(w)});
  }
  return out;
}

FiniteLts random_lts(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<std::string> states;
  for (std::size_t s = 0; s < n; ++s) states.push_back("s" + std::to_string(s));
  std::vector<FiniteLts::Transition> trans;
  for (std::size_t s = 0; s < n; ++s)
    for (ActionId a = 0; a < 2; ++a)
      for (int k = 0; k < 2; ++k)
        trans.push_back({static_cast<FiniteState>(s), a, static_cast<FiniteState>(rng() % n)});
  std::sort(trans.begin(), trans.end());
  trans.erase(std::unique(trans.begin(), trans.end()), trans.end());
  return FiniteLts(states, {"a", "b"}, std::move(trans));
}

template <Exec E>
void BM_PairwiseEqlevels(benchmark::State& state) {
  const Pda pda = counter();
  const auto pairs = counter_pairs(pda, static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(pairwise_eqlevels(pda, pairs, 32, 256, E));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

template <Exec E>
void BM_PartitionBounded(benchmark::State& state) {
  const Pda pda = counter();
  const auto configs = counter_configs(pda, static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(partition_bounded(pda, configs, 6, E));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

template <Exec E>
void BM_EqlevelMatrix(benchmark::State& state) {
  const FiniteLts lts = random_lts(static_cast<std::size_t>(state.range(0)), 7);
  for (auto _ : state) benchmark::DoNotOptimize(eqlevel_matrix(lts, 16, E));
  state.SetItemsProcessed(state.iterations() * state.range(0) * state.range(0));
}

}  // namespace

BENCHMARK(BM_PairwiseEqlevels<Exec::Serial>)->Arg(64)->Arg(256)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_PairwiseEqlevels<Exec::Parallel>)->Arg(64)->Arg(256)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_PartitionBounded<Exec::Serial>)->Arg(128)->Arg(512)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_PartitionBounded<Exec::Parallel>)->Arg(128)->Arg(512)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_EqlevelMatrix<Exec::Serial>)->Arg(64)->Arg(200)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_EqlevelMatrix<Exec::Parallel>)->Arg(64)->Arg(200)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
