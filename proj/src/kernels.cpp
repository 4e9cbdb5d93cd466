#include "pdreg/kernels.hpp"

#include "pdreg/systems.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace pdreg {

bool parallel_available() {
#ifdef _OPENMP
  return true;
#else
  return false;
#endif
}

int max_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

std::vector<ConfigEqLevel> pairwise_eqlevels(const Pda& pda, const std::vector<std::pair<Config, Config>>& pairs,
                                             int cutoff, std::size_t omega_budget, Exec exec, bool with_strategy) {
  std::vector<ConfigEqLevel> out(pairs.size());
  if (exec == Exec::Serial || pairs.size() < 2) {
    EquivalenceEngine engine(pda);
    for (std::size_t i = 0; i < pairs.size(); ++i)
      out[i] = engine.eqlevel(pairs[i].first, pairs[i].second, cutoff, omega_budget, with_strategy);
    return out;
  }
  const auto n = static_cast<std::int64_t>(pairs.size());
#pragma omp parallel
  {
    EquivalenceEngine engine(pda);
#pragma omp for schedule(dynamic)
    for (std::int64_t i = 0; i < n; ++i)
      out[i] = engine.eqlevel(pairs[i].first, pairs[i].second, cutoff, omega_budget, with_strategy);
  }
  return out;
}

namespace {

std::vector<std::size_t> renumber(const std::vector<std::size_t>& first_member) {
  std::vector<std::size_t> out(first_member.size());
  std::vector<std::size_t> id(first_member.size(), static_cast<std::size_t>(-1));
  std::size_t next = 0;
  for (std::size_t i = 0; i < first_member.size(); ++i) {
    auto& slot = id[first_member[i]];
    if (slot == static_cast<std::size_t>(-1)) slot = next++;
    out[i] = slot;
  }
  return out;
}

}  // namespace

std::vector<std::size_t> partition_bounded(const Pda& pda, const std::vector<Config>& configs, int n, Exec exec) {
  const PdaSystem sys(pda);
  if (exec == Exec::Serial) {
    StratifiedGame<PdaSystem> game(sys);
    std::vector<std::size_t> reps;
    std::vector<std::size_t> out(configs.size());
    for (std::size_t i = 0; i < configs.size(); ++i) {
      std::size_t cls = reps.size();
      for (std::size_t r = 0; r < reps.size(); ++r) {
        if (game.bounded_bisim(configs[reps[r]], configs[i], n)) {
          cls = r;
          break;
        }
      }
      if (cls == reps.size()) reps.push_back(i);
      out[i] = cls;
    }
    return out;
  }
  // ~_n is an equivalence, so the least index related to i names its class.
  std::vector<std::size_t> first(configs.size());
  const auto count = static_cast<std::int64_t>(configs.size());
#pragma omp parallel
  {
    StratifiedGame<PdaSystem> game(sys);
#pragma omp for schedule(dynamic)
    for (std::int64_t i = 0; i < count; ++i) {
      std::size_t j = 0;
      while (j < static_cast<std::size_t>(i) && !game.bounded_bisim(configs[j], configs[i], n)) ++j;
      first[i] = j;
    }
  }
  return renumber(first);
}

std::vector<int> eqlevel_matrix(const FiniteLts& lts, int cutoff, Exec exec) {
  const FiniteSystem sys(lts);
  const std::size_t n = lts.num_states();
  std::vector<int> out(n * n, -1);
  auto fill_row = [&](StratifiedGame<FiniteSystem>& game, std::size_t s) {
    for (std::size_t t = 0; t < n; ++t) {
      const auto lvl = game.eqlevel(static_cast<FiniteState>(s), static_cast<FiniteState>(t), cutoff);
      out[s * n + t] = lvl.is_finite() ? lvl.value : -1;
    }
  };
  if (exec == Exec::Serial) {
    StratifiedGame<FiniteSystem> game(sys);
    for (std::size_t s = 0; s < n; ++s) fill_row(game, s);
    return out;
  }
  const auto rows = static_cast<std::int64_t>(n);
#pragma omp parallel
  {
    StratifiedGame<FiniteSystem> game(sys);
#pragma omp for schedule(dynamic)
    for (std::int64_t s = 0; s < rows; ++s) fill_row(game, static_cast<std::size_t>(s));
  }
  return out;
}

}  // namespace pdreg
