#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "pdreg/certificates.hpp"
#include "pdreg/regularity.hpp"
#include "support/testkit.hpp"

using namespace pdreg;

namespace {

LoopCandidate counter_candidate(const Pda& pda) {
  return candidate_from_json(pda, Json::parse(testkit::slurp(testkit::data_path("counter-candidate.json"))));
}

std::vector<SymbolId> repeat(const std::vector<SymbolId>& w, std::uint64_t n) {
  std::vector<SymbolId> out;
  for (std::uint64_t i = 0; i < n; ++i) out.insert(out.end(), w.begin(), w.end());
  return out;
}

Config pumped(const LoopCandidate& c, std::uint64_t i) {
  std::vector<SymbolId> s{c.x};
  const auto b = repeat(c.beta, i);
  s.insert(s.end(), b.begin(), b.end());
  s.insert(s.end(), c.gamma.begin(), c.gamma.end());
  return Config{c.q, StackWord::finite(s)};
}

Config limit(const LoopCandidate& c) { return Config{c.q, StackWord::periodic({c.x}, c.beta)}; }

AnalysisConfig small_budgets() {
  AnalysisConfig cfg;
  cfg.cutoff = 12;
  cfg.omega_budget = 64;
  cfg.truncation_max = 3;
  cfg.path_budget = 200;
  cfg.candidate_budget = 10;
  cfg.region_limit = 128;
  return cfg;
}

}  // namespace

TEST_CASE("analysis budgets are validated") {
  AnalysisConfig cfg;
  CHECK_NOTHROW(cfg.validate());
  cfg.truncation_max = 13;
  CHECK_THROWS_AS(cfg.validate(), InputError);
  cfg = {};
  cfg.path_budget = 0;
  CHECK_THROWS_AS(cfg.validate(), InputError);
}

TEST_CASE("candidates are replayed") {
  const auto file = testkit::load_pda("counter.pda");
  const Pda& pda = file.pda;
  const auto cand = counter_candidate(pda);
  CHECK_NOTHROW(validate_candidate(pda, file.init, cand));
  auto bad = cand;
  bad.prefix_rules = {2};
  CHECK_THROWS_AS(validate_candidate(pda, file.init, bad), InputError);
  bad = cand;
  bad.beta = {};
  CHECK_THROWS_AS(validate_candidate(pda, file.init, bad), InputError);
  bad = cand;
  bad.loop_rules = {2};
  CHECK_THROWS_AS(validate_candidate(pda, file.init, bad), InputError);
  bad = cand;
  bad.gamma = {1, 0};
  CHECK_THROWS_AS(validate_candidate(pda, file.init, bad), InputError);
  bad = cand;
  bad.prefix_rules = {9};
  CHECK_THROWS_AS(validate_candidate(pda, file.init, bad), InputError);
}

TEST_CASE("bound for the counter loop") {
  const auto file = testkit::load_pda("counter.pda");
  const auto b = compute_B(file.pda, 0, 1, {1});
  CHECK(b.b == 0);
  CHECK(b.ell == 1);
  CHECK(format_control_set(file.pda, b.L) == "{p}");
  CHECK(b.E == 1);
  CHECK(b.e_prime == 2);
  CHECK(b.C.exact);
  CHECK(b.B == 1 + b.C.value + 0 + 1);
  CHECK(b.B == 2);
}

TEST_CASE("bound for a two-control cycle") {
  const auto file = testkit::load_pda("cycle.pda");
  const Pda& pda = file.pda;
  const auto b = compute_B(pda, 0, *pda.find_symbol("A"), {*pda.find_symbol("A")});
  CHECK(b.b == 0);
  CHECK(b.ell == 2);
  CHECK(format_control_set(pda, b.L) == "{q}");
  CHECK(b.E == 1);
  CHECK(b.e_prime == 3);
  CHECK(b.C.exact);
  CHECK(b.B == 3 + b.C.value);
  CHECK(b.B == 3);
}

TEST_CASE("witness verification") {
  const auto file = testkit::load_pda("counter.pda");
  const Pda& pda = file.pda;
  const auto res = verify_witness(pda, file.init, counter_candidate(pda));
  CHECK(res.status == WitnessResult::Status::Verified);
  REQUIRE(res.witness.has_value());
  const Witness& w = *res.witness;
  CHECK(w.bound.B == 2);
  CHECK(w.level == 3);
  CHECK(w.certified);
  CHECK(w.corroborated());
  REQUIRE(w.corroboration.size() == 3);
  for (const auto& [i, lvl] : w.corroboration) {
    CHECK(lvl.is_finite());
    CHECK(static_cast<std::uint64_t>(lvl.value) >= i);
  }
  CHECK(check_witness(pda, file.init, w, AnalysisConfig{}).ok);
  auto forged = w;
  forged.level = 7;
  CHECK_FALSE(check_witness(pda, file.init, forged, AnalysisConfig{}).ok);
  forged = w;
  forged.bound.B = 1;
  CHECK_FALSE(check_witness(pda, file.init, forged, AnalysisConfig{}).ok);

  const auto reg = testkit::load_pda("regular.pda");
  LoopCandidate loop;
  loop.loop_rules = {0};
  loop.q = 0;
  loop.x = 0;
  loop.beta = {0};
  const auto refuted = verify_witness(reg.pda, reg.init, loop);
  CHECK(refuted.status == WitnessResult::Status::Refuted);
  CHECK(refuted.level == EqLevelResult::omega());
  REQUIRE(refuted.refutation.has_value());
}

TEST_CASE("distinct below B stays distinct above on the counter") {
  const auto file = testkit::load_pda("counter.pda");
  const Pda& pda = file.pda;
  const auto cand = counter_candidate(pda);
  const auto b = compute_B(pda, cand.q, cand.x, cand.beta);
  REQUIRE(b.C.exact);
  EquivalenceEngine engine(pda);
  bool below = true;
  for (std::uint64_t i = 0; i < b.B; ++i) below = below && engine.eqlevel(pumped(cand, i), limit(cand), 64, 256).level.is_finite();
  REQUIRE(below);
  for (std::uint64_t i = b.B; i <= b.B + 3; ++i)
    CHECK(engine.eqlevel(pumped(cand, i), limit(cand), 64, 256).level.is_finite());
}

TEST_CASE("stair search examples") {
  const auto counter = testkit::load_pda("counter.pda");
  StairSearch s(counter.pda, counter.init, 1000);
  const auto first = s.next();
  REQUIRE(first.has_value());
  CHECK(first->q == 0);
  CHECK(first->x == *counter.pda.find_symbol("A"));
  CHECK(first->beta == std::vector<SymbolId>{*counter.pda.find_symbol("A")});

  const auto reg = testkit::load_pda("regular.pda");
  StairSearch r(reg.pda, reg.init, 200);
  std::size_t n = 0;
  while (auto c = r.next()) {
    ++n;
    CHECK(verify_witness(reg.pda, reg.init, *c, small_budgets()).status == WitnessResult::Status::Refuted);
    if (n == 5) break;
  }
  CHECK(n > 0);

  const auto dead = testkit::load_pda("deadlock.pda");
  StairSearch d(dead.pda, dead.init, 100);
  CHECK_FALSE(d.next().has_value());
  CHECK(d.stats().exhausted);
}

TEST_CASE("stair candidates replay and respect visible pops") {
  std::mt19937_64 rng(71);
  for (int i = 0; i < 40; ++i) {
    const Pda pda = testkit::random_pda(rng);
    const Config c_in{0, StackWord::finite(testkit::random_word(rng, pda, 1, 2))};
    StairSearch s(pda, c_in, 300);
    PdaSystem sys(pda);
    StratifiedGame<PdaSystem> game(sys);
    for (int j = 0; j < 6; ++j) {
      const auto c = s.next();
      if (!c) break;
      CHECK_NOTHROW(validate_candidate(pda, c_in, *c));
      for (int k = 0; k <= 5; ++k) CHECK(game.bounded_bisim(pumped(*c, k), limit(*c), k));
    }
  }
}

TEST_CASE("positive search examples") {
  const auto reg = testkit::load_pda("regular.pda");
  const auto found = positive_semidecide(reg.pda, reg.init);
  REQUIRE(found.has_value());
  CHECK(found->lts.num_states() == 1);
  CHECK(found->level == 1);
  CHECK(check_finite_match_certificate(reg.pda, reg.init, found->lts, found->state, found->certificate).ok);

  const auto dead = testkit::load_pda("deadlock.pda");
  const auto d = positive_semidecide(dead.pda, dead.init);
  REQUIRE(d.has_value());
  CHECK(d->lts.num_states() == 1);
  CHECK(d->lts.transitions().empty());

  const auto counter = testkit::load_pda("counter.pda");
  AnalysisConfig cfg;
  cfg.truncation_max = 5;
  PositiveSearch ps(counter.pda, counter.init, cfg);
  while (!ps.step()) {
  }
  CHECK_FALSE(ps.result().has_value());
  CHECK(ps.stats().exhausted);
  const auto& counts = ps.stats().class_counts;
  for (std::size_t i = 1; i < counts.size(); ++i) CHECK(counts[i] > counts[i - 1]);
}

TEST_CASE("regularity verdicts") {
  const auto counter = testkit::load_pda("counter.pda");
  const auto v = decide_regularity(counter.pda, counter.init);
  CHECK(v.kind == Verdict::Kind::NonRegular);
  CHECK(v.certified);
  REQUIRE(v.witness.has_value());
  CHECK(v.witness->candidate.q == 0);
  CHECK(v.winner == "negative");

  const auto reg = testkit::load_pda("regular.pda");
  const auto r = decide_regularity(reg.pda, reg.init);
  CHECK(r.kind == Verdict::Kind::Regular);
  REQUIRE(r.regular.has_value());
  CHECK(r.regular->lts.num_states() == 1);
  CHECK(r.winner == "positive");

  const auto dead = testkit::load_pda("deadlock.pda");
  CHECK(decide_regularity(dead.pda, dead.init).kind == Verdict::Kind::Regular);
  const auto empty = decide_regularity(dead.pda, Config{0, StackWord::finite({})});
  CHECK(empty.kind == Verdict::Kind::Regular);

  const auto cyc = testkit::load_pda("cycle.pda");
  CHECK(decide_regularity(cyc.pda, cyc.init).kind == Verdict::Kind::Regular);
}

TEST_CASE("regular and certified non-regular never coincide") {
  std::mt19937_64 rng(72);
  const AnalysisConfig cfg = small_budgets();
  std::size_t regular = 0, certified = 0;
  for (int i = 0; i < 25; ++i) {
    const Pda pda = testkit::random_pda(rng, {2, 2, 2, 6, 2});
    const Config c_in{0, StackWord::finite(testkit::random_word(rng, pda, 1, 2))};
    const auto pos = positive_semidecide(pda, c_in, cfg);
    if (pos) ++regular;
    if (pos) CHECK(check_finite_match_certificate(pda, c_in, pos->lts, pos->state, pos->certificate).ok);
    StairSearch s(pda, c_in, cfg.path_budget);
    for (int j = 0; j < 8; ++j) {
      const auto c = s.next();
      if (!c) break;
      const auto w = verify_witness(pda, c_in, *c, cfg);
      if (w.status != WitnessResult::Status::Verified || !w.witness->certified) continue;
      ++certified;
      CHECK_FALSE(pos.has_value());
      CHECK(check_witness(pda, c_in, *w.witness, cfg).ok);
      EquivalenceEngine engine(pda);
      // Not bisimilar below B implies not bisimilar above.
      bool below = true;
      for (std::uint64_t k = 0; k < w.bound.B && below; ++k)
        below = engine.eqlevel(pumped(*c, k), limit(*c), cfg.cutoff, cfg.omega_budget).level.is_finite();
      if (below)
        for (std::uint64_t k = w.bound.B; k <= w.bound.B + 3; ++k)
          CHECK_FALSE(engine.eqlevel(pumped(*c, k), limit(*c), cfg.cutoff, cfg.omega_budget).level ==
                      EqLevelResult::omega());
    }
  }
  CHECK(regular > 0);
  CHECK(certified > 0);
}
