#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "pdreg/equivalence.hpp"
#include "support/testkit.hpp"

using namespace pdreg;

namespace {

// X and Y behave alike (a-loop, b pops); Z is stuck.
const char* kTwins =
    "pda\ncontrols: p\nalphabet: a b\nstack: X Y Z\ninit: p X Z\n"
    "p X a -> p X\np X b -> p .\np Y a -> p Y\np Y b -> p .\n";

// pX^ω loops on a forever; rA^ω runs a, a and then stops.
const char* kStopper =
    "pda\ncontrols: p r s t\nalphabet: a\nstack: X A\ninit: p X\n"
    "p X a -> p X\nr A a -> s .\ns A a -> t .\n";

}  // namespace

TEST_CASE("dead suffixes are pruned") {
  const auto file = testkit::load_pda("counter.pda");
  const Pda& pda = file.pda;
  const DeadSuffixPruner pruner(pda);
  auto lit = [&](const char* s) { return config_literal(pda, pruner.prune(parse_config(pda, s))); };
  CHECK(lit("p[A X A A]") == "p[A X]");
  CHECK(lit("p[A](X A)w") == "p[A X]");
  CHECK(lit("p[](A)w") == "p[](A)w");
  CHECK(lit("p[A A]") == "p[A A]");
  CHECK(lit("p[X X]") == "p[X]");
}

TEST_CASE("pruning preserves behaviour") {
  std::mt19937_64 rng(61);
  for (int i = 0; i < 40; ++i) {
    const Pda pda = testkit::random_pda(rng);
    const DeadSuffixPruner pruner(pda);
    testkit::BrutePdaGame oracle(pda);
    for (int j = 0; j < 10; ++j) {
      const Config c = testkit::random_config(rng, pda, 5, true);
      CHECK(oracle.eqlevel(testkit::to_oracle(c), testkit::to_oracle(pruner.prune(c)), 8) == -1);
    }
  }
}

TEST_CASE("eq-levels of the counter") {
  const auto file = testkit::load_pda("counter.pda");
  const Pda& pda = file.pda;
  auto lvl = [&](const char* a, const char* b) {
    return eqlevel_configs(pda, parse_config(pda, a), parse_config(pda, b)).level.to_string();
  };
  CHECK(lvl("p[X]", "p[A X]") == "Finite(0)");
  CHECK(lvl("p[A X]", "p[A A X]") == "Finite(1)");
  CHECK(lvl("p[A A X]", "p[A A A X]") == "Finite(2)");
  CHECK(lvl("p[A A A X]", "p[](A)w") == "Finite(3)");
  CHECK(lvl("p[A X]", "p[A X]") == "Omega");
  const auto r = eqlevel_configs(pda, parse_config(pda, "p[A A X]"), parse_config(pda, "p[A A A X]"));
  REQUIRE(r.strategy.has_value());
  CHECK(check_strategy(PdaSystem(pda), *r.strategy).ok);
}

TEST_CASE("omega needs a self-covering relation") {
  const auto file = parse_pda(kTwins);
  const Pda& pda = file.pda;
  const Config l = parse_config(pda, "p[X Z]"), r = parse_config(pda, "p[Y Z]");
  const auto res = eqlevel_configs(pda, l, r, 16, 64);
  CHECK(res.level.to_string() == "Omega");
  REQUIRE(res.certificate.has_value());
  CHECK(check_bisim_certificate(pda, *res.certificate, l, r).ok);
  CHECK_FALSE(check_bisim_certificate(pda, *res.certificate, l, parse_config(pda, "p[Z]")).ok);
  BisimCertificate bad{{{parse_config(pda, "p[X Z]"), parse_config(pda, "p[Y Z Z]")}}};
  CHECK_FALSE(check_bisim_certificate(pda, bad, l, parse_config(pda, "p[Y Z Z]")).ok);
  BisimCertificate empty;
  CHECK_FALSE(check_bisim_certificate(pda, empty, l, r).ok);

  const auto reg = testkit::load_pda("regular.pda");
  const auto rr = eqlevel_configs(reg.pda, parse_config(reg.pda, "p[X]"), parse_config(reg.pda, "p[X X]"));
  CHECK(rr.level.to_string() == "Omega");
}

TEST_CASE("omega falls back to AtLeast when the budget is tiny") {
  const auto file = parse_pda(kTwins);
  const Pda& pda = file.pda;
  EquivalenceEngine engine(pda);
  const auto res = engine.eqlevel(parse_config(pda, "p[X Z]"), parse_config(pda, "p[Y Z]"), 4, 0);
  CHECK(res.level == EqLevelResult::at_least(4));
  CHECK_FALSE(res.certificate.has_value());
}

TEST_CASE("omega certificates agree with the brute-force game") {
  std::mt19937_64 rng(62);
  for (int i = 0; i < 40; ++i) {
    const Pda pda = testkit::random_pda(rng);
    EquivalenceEngine engine(pda);
    testkit::BrutePdaGame oracle(pda);
    for (int j = 0; j < 8; ++j) {
      const Config a = testkit::random_config(rng, pda, 4, true), b = testkit::random_config(rng, pda, 4, true);
      const auto res = engine.eqlevel(a, b, 10, 256);
      const int expect = oracle.eqlevel(testkit::to_oracle(a), testkit::to_oracle(b), 10);
      if (res.level.is_finite()) {
        CHECK(res.level.value == expect);
      } else {
        CHECK(expect == -1);
      }
      if (res.certificate) CHECK(check_bisim_certificate(pda, *res.certificate, a, b).ok);
    }
  }
}

TEST_CASE("pda against finite systems") {
  const auto one = parse_lts(testkit::slurp(testkit::data_path("one-state.lts")));
  const auto reg = testkit::load_pda("regular.pda");
  const auto yes = bisim_pda_vs_finite(reg.pda, reg.init, one, 0);
  CHECK(yes.bisimilar);
  REQUIRE(yes.certificate.has_value());
  CHECK(check_finite_match_certificate(reg.pda, reg.init, one, 0, *yes.certificate).ok);
  auto tampered = *yes.certificate;
  tampered.matches.clear();
  CHECK_FALSE(check_finite_match_certificate(reg.pda, reg.init, one, 0, tampered).ok);
  tampered = *yes.certificate;
  tampered.reach = ConfigAutomaton::single(reg.pda, reg.init);
  CHECK_FALSE(check_finite_match_certificate(reg.pda, reg.init, one, 0, tampered).ok);

  const auto counter = testkit::load_pda("counter.pda");
  const auto no = bisim_pda_vs_finite(counter.pda, counter.init, one, 0);
  CHECK_FALSE(no.bisimilar);
  CHECK_FALSE(no.certificate.has_value());
  CHECK((no.strategy.has_value() || no.counterexample.has_value()));
  if (no.strategy) {
    const PdaFiniteUnion u{PdaSystem(counter.pda), FiniteSystem(one)};
    CHECK(check_strategy(u, *no.strategy).ok);
  }

  const auto cyc = testkit::load_pda("cycle.pda");
  const auto loops = parse_lts(testkit::slurp(testkit::data_path("loops.lts")));
  CHECK_FALSE(bisim_pda_vs_finite(cyc.pda, cyc.init, loops, 0).bisimilar);

  std::vector<std::string> names;
  for (int i = 0; i < 13; ++i) names.push_back("s" + std::to_string(i));
  const FiniteLts big(names, {"a"}, {});
  CHECK_THROWS_AS(bisim_pda_vs_finite(reg.pda, reg.init, big, 0), BudgetError);
}

TEST_CASE("pda against finite agrees with bounded play on random instances") {
  std::mt19937_64 rng(63);
  for (int i = 0; i < 40; ++i) {
    const Pda pda = testkit::random_pda(rng, {2, 2, 2, 5, 2});
    const FiniteLts lts = testkit::random_lts(rng, 3, pda.num_actions());
    if (lts.num_actions() != pda.num_actions()) continue;
    const Config c{0, StackWord::finite(testkit::random_word(rng, pda, 1, 2))};
    const auto res = bisim_pda_vs_finite(pda, c, lts, 0);
    if (res.bisimilar) {
      REQUIRE(res.certificate.has_value());
      CHECK(check_finite_match_certificate(pda, c, lts, 0, *res.certificate).ok);
      // Soundness on a finite horizon.
      const PdaFiniteUnion u{PdaSystem(pda), FiniteSystem(lts)};
      StratifiedGame<PdaFiniteUnion> game(u);
      CHECK(game.bounded_bisim(PdaFiniteUnion::left(c), PdaFiniteUnion::right(0), 10));
    }
  }
}

TEST_CASE("C with an empty target set is zero") {
  const auto file = testkit::load_pda("counter.pda");
  const auto v = compute_C(file.pda, 0, 1, {1}, ControlSet(1), 3);
  CHECK(v.value == 0);
  CHECK(v.exact);
  CHECK(v.pairs == 0);
}

TEST_CASE("C of the counter loop") {
  const auto file = testkit::load_pda("counter.pda");
  const auto v = compute_C(file.pda, 0, 1, {1}, ControlSet::singleton(1, 0), 1);
  CHECK(v.value == 0);
  CHECK(v.exact);
  CHECK(v.region_size == 1);
  CHECK(v.omega_pairs == 1);
}

TEST_CASE("C picks up a finite eq-level") {
  const auto file = parse_pda(kStopper);
  const Pda& pda = file.pda;
  const ControlId r = *pda.find_control("r");
  const SymbolId X = *pda.find_symbol("X"), A = *pda.find_symbol("A");
  const auto v = compute_C(pda, 0, X, {A}, ControlSet::singleton(4, r), 5);
  testkit::BrutePdaGame oracle(pda);
  const int expect = oracle.eqlevel({0, {X}, {A}}, {r, {}, {A}}, 20);
  CHECK(expect == 2);
  CHECK(v.value == static_cast<std::uint64_t>(expect));
  CHECK(v.exact);
  CHECK(v.region_size == 1);

  const auto capped = compute_C(pda, 0, X, {A}, ControlSet::singleton(4, r), 5, COptions{2, 16, 4096, false});
  CHECK_FALSE(capped.exact);
  CHECK(capped.at_least_pairs == 1);
}

TEST_CASE("C notices an incomplete region") {
  const auto file = testkit::load_pda("counter.pda");
  const Pda& pda = file.pda;
  const SymbolId X = *pda.find_symbol("X"), A = *pda.find_symbol("A");
  // pX(A)^ω pushes without bound, so a small region limit is hit.
  const auto v = compute_C(pda, 0, X, {A}, ControlSet::singleton(1, 0), 6, COptions{64, 512, 3, false});
  CHECK_FALSE(v.region_complete);
  CHECK_FALSE(v.exact);
}

TEST_CASE("common stack bottoms preserve eq-levels") {
  // Both sides play the same moves until the prefix is gone, so the level is
  // at least the worst level over the controls the prefix can empty into.
  std::mt19937_64 rng(64);
  for (int i = 0; i < 60; ++i) {
    const Pda pda = testkit::random_pda(rng);
    const auto table = compute_transformers(pda);
    testkit::BrutePdaGame oracle(pda);
    const ControlId q = std::uniform_int_distribution<ControlId>(0, pda.num_controls() - 1)(rng);
    const auto alpha = testkit::random_word(rng, pda, 1, 3);
    const auto g1 = testkit::random_word(rng, pda, 0, 3), g2 = testkit::random_word(rng, pda, 0, 3);
    const auto exits = apply_set_transformer(table, ControlSet::singleton(pda.num_controls(), q), alpha);
    const int cutoff = 8;
    int worst = cutoff;
    for (ControlId p = 0; p < pda.num_controls(); ++p) {
      if (!exits.contains(p)) continue;
      const int l = oracle.eqlevel({p, g1, {}}, {p, g2, {}}, cutoff);
      if (l >= 0) worst = std::min(worst, l);
    }
    std::vector<SymbolId> w1 = alpha, w2 = alpha;
    w1.insert(w1.end(), g1.begin(), g1.end());
    w2.insert(w2.end(), g2.begin(), g2.end());
    const int both = oracle.eqlevel({q, w1, {}}, {q, w2, {}}, cutoff);
    CHECK((both == -1 || both >= worst));
  }
}
