#include "pdreg/equivalence.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>
#include <unordered_set>

#include "pdreg/kernels.hpp"

namespace pdreg {

Config DeadSuffixPruner::prune(const Config& c) const {
  ControlSet k = ControlSet::singleton(table_.num_controls(), c.control);
  const auto& prefix = c.stack.prefix();
  for (std::size_t i = 0; i < prefix.size(); ++i) {
    k = table_.apply(k, prefix[i]);
    if (k.empty()) return Config{c.control, StackWord::finite(c.stack.take(i + 1))};
  }
  if (c.stack.is_finite()) return c;
  std::set<ControlSet> seen;
  std::size_t pos = prefix.size();
  while (seen.insert(k).second) {
    for (SymbolId x : c.stack.period()) {
      k = table_.apply(k, x);
      ++pos;
      if (k.empty()) return Config{c.control, StackWord::finite(c.stack.take(pos))};
    }
  }
  return c;
}

namespace {

using ConfigPair = std::pair<Config, Config>;

// Every move of `s` has an equally labelled move of `t` whose pruned targets
// are equal or related.
template <class Related>
bool covered(const std::vector<Move<Config>>& ms, const std::vector<Move<Config>>& mt,
             const DeadSuffixPruner& pruner, bool flip, Related related) {
  for (const auto& m : ms) {
    const Config a = pruner.prune(m.target);
    bool ok = false;
    for (const auto& r : mt) {
      if (r.action != m.action) continue;
      const Config b = pruner.prune(r.target);
      if (a == b || (flip ? related(b, a) : related(a, b))) {
        ok = true;
        break;
      }
    }
    if (!ok) return false;
  }
  return true;
}

}  // namespace

CertificateCheck check_bisim_certificate(const Pda& pda, const BisimCertificate& cert, const Config& c1,
                                         const Config& c2) {
  const DeadSuffixPruner pruner(pda);
  const PdaSystem sys(pda);
  std::set<ConfigPair> rel;
  for (const auto& [s, t] : cert.pairs) {
    try {
      pda.validate(s);
      pda.validate(t);
    } catch (const InputError& e) {
      return {false, e.what()};
    }
    if (!(pruner.prune(s) == s) || !(pruner.prune(t) == t))
      return {false, "pair (" + sys.describe(s) + ", " + sys.describe(t) + ") is not in pruned form"};
    rel.insert({s, t});
  }
  auto related = [&](const Config& a, const Config& b) { return rel.count({a, b}) > 0; };
  const Config a = pruner.prune(c1);
  const Config b = pruner.prune(c2);
  if (!(a == b) && !related(a, b)) return {false, "the queried pair is not in the relation"};
  for (const auto& [s, t] : cert.pairs) {
    const auto ms = sys.successors(s);
    const auto mt = sys.successors(t);
    if (!covered(ms, mt, pruner, false, related))
      return {false, "a move of " + sys.describe(s) + " is unmatched against " + sys.describe(t)};
    if (!covered(mt, ms, pruner, true, related))
      return {false, "a move of " + sys.describe(t) + " is unmatched against " + sys.describe(s)};
  }
  return {true, {}};
}

EquivalenceEngine::EquivalenceEngine(const Pda& pda) : pda_(&pda), system_(pda), game_(system_), pruner_(pda) {}

std::optional<BisimCertificate> EquivalenceEngine::certify(const Config& c1, const Config& c2, int filter_depth,
                                                           std::size_t omega_budget) {
  const Config a = pruner_.prune(c1);
  const Config b = pruner_.prune(c2);
  if (a == b) return BisimCertificate{};
  if (!game_.bounded_bisim(a, b, filter_depth)) return std::nullopt;

  std::map<ConfigPair, std::size_t> index;
  std::vector<ConfigPair> pairs;
  std::deque<std::size_t> queue;
  bool over_budget = false;
  auto add = [&](const Config& s, const Config& t) {
    if (s == t || index.count({s, t})) return;
    if (!game_.bounded_bisim(s, t, filter_depth)) return;
    if (pairs.size() >= omega_budget) {
      over_budget = true;
      return;
    }
    index.emplace(ConfigPair{s, t}, pairs.size());
    queue.push_back(pairs.size());
    pairs.emplace_back(s, t);
  };
  add(a, b);
  while (!queue.empty() && !over_budget) {
    const auto [s, t] = pairs[queue.front()];
    queue.pop_front();
    const auto ms = game_.moves(s);
    const auto mt = game_.moves(t);
    for (const auto& m : ms)
      for (const auto& r : mt)
        if (m.action == r.action) add(pruner_.prune(m.target), pruner_.prune(r.target));
  }
  if (over_budget) return std::nullopt;

  // Greatest fixpoint: drop pairs that are not covered by the survivors.
  std::vector<bool> alive(pairs.size(), true);
  auto related = [&](const Config& s, const Config& t) {
    auto it = index.find({s, t});
    return it != index.end() && alive[it->second];
  };
  for (bool changed = true; changed;) {
    changed = false;
    for (std::size_t i = 0; i < pairs.size(); ++i) {
      if (!alive[i]) continue;
      const auto& ms = game_.moves(pairs[i].first);
      const auto& mt = game_.moves(pairs[i].second);
      if (!covered(ms, mt, pruner_, false, related) || !covered(mt, ms, pruner_, true, related)) {
        alive[i] = false;
        changed = true;
      }
    }
  }
  if (!alive[0]) return std::nullopt;
  BisimCertificate cert;
  for (std::size_t i = 0; i < pairs.size(); ++i)
    if (alive[i]) cert.pairs.push_back(pairs[i]);
  return cert;
}

ConfigEqLevel EquivalenceEngine::eqlevel(const Config& c1, const Config& c2, int cutoff, std::size_t omega_budget,
                                         bool with_strategy) {
  pda_->validate(c1);
  pda_->validate(c2);
  if (auto cert = certify(c1, c2, std::min(cutoff, 12), omega_budget))
    return ConfigEqLevel{EqLevelResult::omega(), std::nullopt, std::move(cert)};
  ConfigEqLevel out;
  out.level = game_.eqlevel(c1, c2, cutoff);
  if (out.level.is_finite() && with_strategy) out.strategy = game_.distinguishing_strategy(c1, c2, cutoff);
  return out;
}

ConfigEqLevel eqlevel_configs(const Pda& pda, const Config& c1, const Config& c2, int cutoff,
                              std::size_t omega_budget) {
  EquivalenceEngine engine(pda);
  return engine.eqlevel(c1, c2, cutoff, omega_budget);
}

// ---------------------------------------------------- pda vs finite decider

FiniteBisimResult bisim_pda_vs_finite(const Pda& pda, const Config& c, const FiniteLts& lts, FiniteState f) {
  return bisim_pda_vs_finite(pda, reachable_configs(pda, c), c, lts, f);
}

FiniteBisimResult bisim_pda_vs_finite(const Pda& pda, const ConfigAutomaton& reach, const Config& c,
                                 const FiniteLts& lts, FiniteState f) {
  pda.validate(c);
  if (!c.stack.is_finite()) throw InputError("the pda configuration must have a finite stack");
  if (lts.num_states() == 0) throw InputError("the finite LTS has no states");
  if (f >= lts.num_states()) throw InputError("unknown finite state");
  const std::size_t k = lts.num_states();
  if (k > 12) throw BudgetError("finite LTS with " + std::to_string(k) + " states exceeds the truncation limit of 12");

  const PdaFiniteUnion sys{PdaSystem(pda), FiniteSystem(lts)};
  StratifiedGame<PdaFiniteUnion> game(sys);
  const int depth = static_cast<int>(k);
  FiniteBisimResult out;
  if (!game.bounded_bisim(PdaFiniteUnion::left(c), PdaFiniteUnion::right(f), depth)) {
    out.strategy = game.distinguishing_strategy(PdaFiniteUnion::left(c), PdaFiniteUnion::right(f), depth);
    return out;
  }
  FiniteMatchCertificate cert;
  cert.reach = reach;
  cert.depth = k;
  for (const auto& t : reachable_truncations(reach, k)) {
    const Config ct{t.control, StackWord::finite(t.prefix)};
    std::optional<FiniteState> match;
    for (FiniteState g = 0; g < k && !match; ++g)
      if (game.bounded_bisim(PdaFiniteUnion::left(ct), PdaFiniteUnion::right(g), depth)) match = g;
    if (!match) {
      out.counterexample = completion(reach, t);
      return out;
    }
    cert.matches.emplace_back(t, *match);
  }
  out.bisimilar = true;
  out.certificate = std::move(cert);
  return out;
}

CertificateCheck check_finite_match_certificate(const Pda& pda, const Config& c, const FiniteLts& lts, FiniteState f,
                                          const FiniteMatchCertificate& cert) {
  if (f >= lts.num_states()) return {false, "unknown finite state"};
  if (cert.depth != lts.num_states()) return {false, "depth differs from the number of finite states"};
  if (cert.depth > 12) return {false, "depth exceeds the truncation limit"};
  if (!c.stack.is_finite()) return {false, "configuration stack is infinite"};
  try {
    pda.validate(c);
  } catch (const InputError& e) {
    return {false, e.what()};
  }
  std::string why;
  if (!is_post_closed(pda, cert.reach, &why)) return {false, why};
  if (!member(cert.reach, c)) return {false, "the automaton does not accept the configuration"};

  const PdaFiniteUnion sys{PdaSystem(pda), FiniteSystem(lts)};
  StratifiedGame<PdaFiniteUnion> game(sys);
  const int depth = static_cast<int>(cert.depth);
  if (!game.bounded_bisim(PdaFiniteUnion::left(c), PdaFiniteUnion::right(f), depth))
    return {false, "the configuration is not ~_k the finite state"};
  std::map<TruncatedConfig, FiniteState> matches;
  for (const auto& [t, g] : cert.matches) {
    if (g >= lts.num_states()) return {false, "match names an unknown finite state"};
    matches.emplace(t, g);
  }
  for (const auto& t : reachable_truncations(cert.reach, cert.depth)) {
    auto it = matches.find(t);
    if (it == matches.end()) return {false, "an accepted truncation has no listed match"};
    const Config ct{t.control, StackWord::finite(t.prefix)};
    if (!game.bounded_bisim(PdaFiniteUnion::left(ct), PdaFiniteUnion::right(it->second), depth))
      return {false, "listed match " + sys.describe(PdaFiniteUnion::left(ct)) + " ~_k " +
                         lts.state_name(it->second) + " does not hold"};
  }
  return {true, {}};
}

// ----------------------------------------------------------------------- C

CValue compute_C(const Pda& pda, ControlId q, SymbolId x, const std::vector<SymbolId>& beta, const ControlSet& L,
                 std::uint64_t e_prime, const COptions& options) {
  if (beta.empty()) throw InputError("the loop word β must be nonempty");
  CValue out;
  out.cutoff = options.cutoff;
  const PdaSystem sys(pda);
  const Config start{q, StackWord::periodic({x}, beta)};
  pda.validate(start);

  std::vector<Config> region{start};
  std::unordered_set<Config> seen{start};
  std::size_t frontier = 0;
  for (std::uint64_t d = 0; d < e_prime && frontier < region.size() && out.region_complete; ++d) {
    const std::size_t end = region.size();
    for (std::size_t i = frontier; i < end && out.region_complete; ++i) {
      for (auto& m : sys.successors(region[i])) {
        if (!seen.insert(m.target).second) continue;
        if (region.size() >= options.region_limit) {
          out.region_complete = false;
          break;
        }
        region.push_back(std::move(m.target));
      }
    }
    frontier = end;
  }
  out.region_size = region.size();

  std::vector<std::pair<Config, Config>> pairs;
  for (const auto& r : region)
    for (ControlId p : L.members()) pairs.emplace_back(r, Config{p, StackWord::periodic({}, beta)});
  out.pairs = pairs.size();
  const auto levels = pairwise_eqlevels(pda, pairs, options.cutoff, options.omega_budget,
                                        options.parallel ? Exec::Parallel : Exec::Serial);
  for (const auto& l : levels) {
    switch (l.level.kind) {
      case EqLevelResult::Kind::Finite:
        out.value = std::max<std::uint64_t>(out.value, static_cast<std::uint64_t>(l.level.value));
        break;
      case EqLevelResult::Kind::Omega: ++out.omega_pairs; break;
      case EqLevelResult::Kind::AtLeast: ++out.at_least_pairs; break;
    }
  }
  out.exact = out.region_complete && out.at_least_pairs == 0;
  return out;
}

}  // namespace pdreg
