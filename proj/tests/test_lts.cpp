#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "pdreg/game.hpp"
#include "pdreg/systems.hpp"
#include "support/testkit.hpp"

using namespace pdreg;

namespace {

FiniteLts chain3() { return FiniteLts({"s0", "s1", "s2"}, {"a"}, {{0, 0, 1}, {1, 0, 2}}); }

}  // namespace

TEST_CASE("lts text format") {
  const auto lts = parse_lts(testkit::slurp(testkit::data_path("one-state.lts")));
  CHECK(lts.num_states() == 1);
  CHECK(lts.transitions().size() == 2);
  CHECK(parse_lts(format_lts(lts)) == lts);
  CHECK_THROWS_AS(parse_lts("lts\nstates: f\nactions: a\ntrans: f a g\n"), InputError);
  CHECK_THROWS_AS(parse_lts("lts\nstates: f f\nactions: a\n"), InputError);
  CHECK_THROWS_AS(parse_lts("states: f\n"), InputError);
}

TEST_CASE("successor lists") {
  const auto lts = parse_lts(testkit::slurp(testkit::data_path("one-state.lts")));
  const FiniteSystem sys(lts);
  const auto moves = sys.successors(0);
  REQUIRE(moves.size() == 2);
  CHECK(lts.action_name(moves[0].action) == "a");
  CHECK(lts.action_name(moves[1].action) == "b");
  const FiniteLts dead({"d"}, {"a"}, {});
  CHECK(FiniteSystem(dead).successors(0).empty());
}

TEST_CASE("quotient examples") {
  const FiniteLts single({"s"}, {"a"}, {});
  CHECK(quotient_finite(single).lts.num_states() == 1);

  const FiniteLts loops({"f", "g"}, {"a"}, {{0, 0, 0}, {1, 0, 1}});
  const auto q = quotient_finite(loops);
  CHECK(q.lts.num_states() == 1);
  CHECK(q.class_of == std::vector<FiniteState>{0, 0});

  CHECK(quotient_finite(chain3()).lts.num_states() == 3);

  const auto three = parse_lts(testkit::slurp(testkit::data_path("loops.lts")));
  const auto q3 = quotient_finite(three);
  CHECK(q3.lts.num_states() == 1);
}

TEST_CASE("quotient soundness on random systems") {
  std::mt19937_64 rng(21);
  for (int i = 0; i < 60; ++i) {
    const FiniteLts lts = testkit::random_lts(rng, 7, 2);
    const Quotient q = quotient_finite(lts);
    const FiniteUnion u{FiniteSystem(lts), FiniteSystem(q.lts)};
    StratifiedGame<FiniteUnion> game(u);
    const int n = static_cast<int>(lts.num_states());
    for (FiniteState s = 0; s < lts.num_states(); ++s)
      for (int k = 0; k <= n; ++k) CHECK(game.bounded_bisim(FiniteUnion::left(s), FiniteUnion::right(q.class_of[s]), k));
  }
}
