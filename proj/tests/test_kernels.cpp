#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "pdreg/kernels.hpp"
#include "support/testkit.hpp"

using namespace pdreg;

TEST_CASE("pairwise eq-levels match across execution modes") {
  std::mt19937_64 rng(81);
  for (int i = 0; i < 20; ++i) {
    const Pda pda = testkit::random_pda(rng);
    std::vector<std::pair<Config, Config>> pairs;
    for (int j = 0; j < 16; ++j)
      pairs.emplace_back(testkit::random_config(rng, pda, 4, true), testkit::random_config(rng, pda, 4, true));
    const auto s = pairwise_eqlevels(pda, pairs, 12, 128, Exec::Serial);
    const auto p = pairwise_eqlevels(pda, pairs, 12, 128, Exec::Parallel);
    REQUIRE(s.size() == p.size());
    for (std::size_t j = 0; j < s.size(); ++j) CHECK(s[j].level == p[j].level);
  }
}

TEST_CASE("bounded partitions match across execution modes") {
  std::mt19937_64 rng(82);
  for (int i = 0; i < 20; ++i) {
    const Pda pda = testkit::random_pda(rng);
    std::vector<Config> configs;
    for (int j = 0; j < 24; ++j) configs.push_back(testkit::random_config(rng, pda, 4, false));
    for (int n = 1; n <= 4; ++n) {
      const auto s = partition_bounded(pda, configs, n, Exec::Serial);
      CHECK(s == partition_bounded(pda, configs, n, Exec::Parallel));
      PdaSystem sys(pda);
      StratifiedGame<PdaSystem> game(sys);
      for (std::size_t a = 0; a < configs.size(); ++a)
        for (std::size_t b = 0; b < configs.size(); ++b)
          CHECK((s[a] == s[b]) == game.bounded_bisim(configs[a], configs[b], n));
    }
  }
}

TEST_CASE("eq-level matrices match across execution modes") {
  std::mt19937_64 rng(83);
  for (int i = 0; i < 20; ++i) {
    const FiniteLts lts = testkit::random_lts(rng, 8, 2);
    const auto s = eqlevel_matrix(lts, 10, Exec::Serial);
    CHECK(s == eqlevel_matrix(lts, 10, Exec::Parallel));
    testkit::NaiveFiniteGame oracle(lts);
    const std::size_t n = lts.num_states();
    for (FiniteState a = 0; a < n; ++a)
      for (FiniteState b = 0; b < n; ++b) {
        int expect = -1;
        for (int k = 1; k <= 10; ++k)
          if (!oracle.bisim(a, b, k)) {
            expect = k - 1;
            break;
          }
        CHECK(s[a * n + b] == expect);
      }
  }
}
