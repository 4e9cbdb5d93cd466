#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "pdreg/certificates.hpp"
#include "pdreg/regularity.hpp"
#include "support/testkit.hpp"

using namespace pdreg;

namespace {

const char* kTwins =
    "pda\ncontrols: p\nalphabet: a b\nstack: X Y Z\ninit: p X Z\n"
    "p X a -> p X\np X b -> p .\np Y a -> p Y\np Y b -> p .\n";

}  // namespace

TEST_CASE("json round trips") {
  const auto file = testkit::load_pda("counter.pda");
  const Pda& pda = file.pda;
  const auto reach = reachable_configs(pda, file.init);
  CHECK(automaton_from_json(pda, automaton_to_json(pda, reach)) == reach);

  EquivalenceEngine engine(pda);
  const auto lvl = engine.eqlevel(parse_config(pda, "p[A X]"), parse_config(pda, "p[A A A X]"), 16, 64);
  REQUIRE(lvl.strategy.has_value());
  const auto back = strategy_from_json(pda, strategy_to_json(pda, *lvl.strategy));
  CHECK(strategy_to_json(pda, back) == strategy_to_json(pda, *lvl.strategy));

  LoopCandidate c;
  c.prefix_rules = {0};
  c.loop_rules = {1};
  c.x = 1;
  c.beta = {1};
  c.gamma = {0};
  c.from_stamp = true;
  c.start = 1;
  c.end = 2;
  CHECK(candidate_from_json(pda, candidate_to_json(pda, c)) == c);
}

TEST_CASE("certificates check out and tampering is caught") {
  const auto twins = parse_pda(kTwins);
  const Config l = parse_config(twins.pda, "p[X Z]"), r = parse_config(twins.pda, "p[Y Z]");
  const auto omega = eqlevel_configs(twins.pda, l, r, 16, 64);
  REQUIRE(omega.certificate.has_value());
  auto bisim = bisimulation_certificate(twins.pda, twins.init, l, r, *omega.certificate);
  CHECK(check_certificate(bisim).ok);
  CHECK(check_certificate(Json::parse(bisim.dump())).ok);
  bisim["pairs"].erase(0);
  CHECK_FALSE(check_certificate(bisim).ok);

  const auto counter = testkit::load_pda("counter.pda");
  const Pda& pda = counter.pda;
  const Config a = parse_config(pda, "p[A A X]"), b = parse_config(pda, "p[A A A X]");
  const auto fin = eqlevel_configs(pda, a, b);
  auto dist = distinction_certificate(pda, counter.init, a, b, *fin.strategy);
  CHECK(check_certificate(dist).ok);
  auto bad = dist;
  bad["right"] = "p[A A X]";
  CHECK_FALSE(check_certificate(bad).ok);

  const auto one = parse_lts(testkit::slurp(testkit::data_path("one-state.lts")));
  const auto reg = testkit::load_pda("regular.pda");
  const auto yes = bisim_pda_vs_finite(reg.pda, reg.init, one, 0);
  auto matched = finite_match_certificate(reg.pda, reg.init, one, 0, *yes.certificate);
  CHECK(check_certificate(matched).ok);
  bad = matched;
  bad["lts"] = "lts\nstates: f\nactions: a b\ntrans: f a f\n";
  CHECK_FALSE(check_certificate(bad).ok);

  const auto no = bisim_pda_vs_finite(pda, counter.init, one, 0);
  if (no.strategy) CHECK(check_certificate(union_distinction_certificate(pda, counter.init, one, 0, *no.strategy)).ok);

  const auto v = decide_regularity(pda, counter.init);
  REQUIRE(v.witness.has_value());
  auto wit = witness_certificate(pda, counter.init, *v.witness, AnalysisConfig{});
  CHECK(check_certificate(wit).ok);
  bad = wit;
  bad["level"] = 1;
  CHECK_FALSE(check_certificate(bad).ok);

  CHECK_FALSE(check_certificate(Json::parse(R"({"certificate":"nonsense"})")).ok);
  CHECK_FALSE(check_certificate(Json::parse("[]")).ok);
}
