#pragma once

// Batch kernels with an OpenMP implementation and a serial reference. Each
// OpenMP thread runs its own game session; results do not depend on the
// schedule.

#include <cstddef>
#include <utility>
#include <vector>

#include "pdreg/equivalence.hpp"
#include "pdreg/lts.hpp"
#include "pdreg/pda.hpp"

namespace pdreg {

enum class Exec { Serial, Parallel };

bool parallel_available();
int max_threads();

/// eqlevel for every listed pair of configurations.
std::vector<ConfigEqLevel> pairwise_eqlevels(const Pda& pda, const std::vector<std::pair<Config, Config>>& pairs,
                                             int cutoff, std::size_t omega_budget, Exec exec,
                                             bool with_strategy = false);

/// Classes of `configs` under ~_n, numbered in order of first appearance.
std::vector<std::size_t> partition_bounded(const Pda& pda, const std::vector<Config>& configs, int n, Exec exec);

/// Row-major |S|x|S| matrix of eq-levels of a finite LTS; -1 stands for
/// AtLeast(cutoff).
std::vector<int> eqlevel_matrix(const FiniteLts& lts, int cutoff, Exec exec);

}  // namespace pdreg
