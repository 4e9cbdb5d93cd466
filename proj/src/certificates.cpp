#include "pdreg/certificates.hpp"

#include <functional>

namespace pdreg {

namespace {

SymbolId symbol_named(const Pda& pda, const std::string& name) {
  auto id = pda.find_symbol(name);
  if (!id) throw InputError("unknown stack symbol '" + name + "'");
  return *id;
}

ActionId action_named(const std::vector<std::string>& names, const std::string& name) {
  auto it = std::find(names.begin(), names.end(), name);
  if (it == names.end()) throw InputError("unknown action '" + name + "'");
  return static_cast<ActionId>(it - names.begin());
}

Json word_to_json(const Pda& pda, const std::vector<SymbolId>& w) {
  Json out = Json::array();
  for (SymbolId x : w) out.push_back(pda.symbol_name(x));
  return out;
}

std::vector<SymbolId> word_from_json(const Pda& pda, const Json& j) {
  std::vector<SymbolId> out;
  for (const auto& x : j) out.push_back(symbol_named(pda, x.get<std::string>()));
  return out;
}

template <class State>
Json generic_strategy_to_json(const Strategy<State>& s, const std::vector<std::string>& actions,
                              const std::function<std::string(const State&)>& encode) {
  Json nodes = Json::array();
  for (const auto& n : s.nodes) {
    Json responses = Json::array();
    for (const auto& [answer, child] : n.responses) responses.push_back(Json::array({encode(answer), child}));
    nodes.push_back(Json{{"left", encode(n.left)},
                         {"right", encode(n.right)},
                         {"level", n.level},
                         {"challenger", n.challenger == Side::Left ? "left" : "right"},
                         {"action", actions.at(n.action)},
                         {"challenge", encode(n.challenge)},
                         {"responses", std::move(responses)}});
  }
  return Json{{"root", s.root}, {"nodes", std::move(nodes)}};
}

template <class State>
Strategy<State> generic_strategy_from_json(const Json& j, const std::vector<std::string>& actions,
                                           const std::function<State(const std::string&)>& decode) {
  Strategy<State> s;
  s.root = j.at("root").get<std::size_t>();
  for (const auto& n : j.at("nodes")) {
    StrategyNode<State> node{decode(n.at("left").get<std::string>()),
                             decode(n.at("right").get<std::string>()),
                             n.at("level").get<int>(),
                             n.at("challenger").get<std::string>() == "left" ? Side::Left : Side::Right,
                             action_named(actions, n.at("action").get<std::string>()),
                             decode(n.at("challenge").get<std::string>()),
                             {}};
    for (const auto& r : n.at("responses"))
      node.responses.emplace_back(decode(r.at(0).get<std::string>()), r.at(1).get<std::size_t>());
    s.nodes.push_back(std::move(node));
  }
  return s;
}

Json cvalue_to_json(const CValue& c) {
  return Json{{"value", c.value},
              {"exact", c.exact},
              {"cutoff", c.cutoff},
              {"region_size", c.region_size},
              {"region_complete", c.region_complete},
              {"pairs", c.pairs},
              {"omega_pairs", c.omega_pairs},
              {"at_least_pairs", c.at_least_pairs}};
}

Json control_set_to_json(const Pda& pda, const ControlSet& k) {
  Json out = Json::array();
  for (ControlId p : k.members()) out.push_back(pda.control_name(p));
  return out;
}

EqLevelResult parse_level(const std::string& s) {
  if (s == "Omega") return EqLevelResult::omega();
  auto arg = [&](std::size_t skip) { return std::stoi(s.substr(skip, s.size() - skip - 1)); };
  if (s.rfind("Finite(", 0) == 0) return EqLevelResult::finite(arg(7));
  if (s.rfind("AtLeast(", 0) == 0) return EqLevelResult::at_least(arg(8));
  throw InputError("malformed eq-level '" + s + "'");
}

}  // namespace

Json automaton_to_json(const Pda& pda, const ConfigAutomaton& a) {
  Json edges = Json::array();
  for (const auto& e : a.edges())
    edges.push_back(Json::array({e.src, e.symbol == kEpsilon ? std::string("-") : pda.symbol_name(e.symbol), e.dst}));
  return Json{{"states", a.num_states()}, {"finals", a.finals()}, {"edges", std::move(edges)}};
}

ConfigAutomaton automaton_from_json(const Pda& pda, const Json& j) {
  std::vector<ConfigAutomaton::Edge> edges;
  for (const auto& e : j.at("edges")) {
    const auto sym = e.at(1).get<std::string>();
    edges.push_back({e.at(0).get<ConfigAutomaton::StateId>(), sym == "-" ? kEpsilon : symbol_named(pda, sym),
                     e.at(2).get<ConfigAutomaton::StateId>()});
  }
  return ConfigAutomaton(pda.num_controls(), pda.num_symbols(), j.at("states").get<std::size_t>(), std::move(edges),
                         j.at("finals").get<std::vector<ConfigAutomaton::StateId>>());
}

Json strategy_to_json(const Pda& pda, const Strategy<Config>& s) {
  return generic_strategy_to_json<Config>(s, pda.action_names(),
                                          [&](const Config& c) { return config_literal(pda, c); });
}

Strategy<Config> strategy_from_json(const Pda& pda, const Json& j) {
  return generic_strategy_from_json<Config>(j, pda.action_names(),
                                            [&](const std::string& s) { return parse_config(pda, s); });
}

Json union_strategy_to_json(const Pda& pda, const FiniteLts& lts, const Strategy<PdaFiniteUnion::State>& s) {
  const PdaFiniteUnion sys{PdaSystem(pda), FiniteSystem(lts)};
  return generic_strategy_to_json<PdaFiniteUnion::State>(
      s, sys.action_names(), [&](const PdaFiniteUnion::State& st) {
        return st.index() == 0 ? config_literal(pda, std::get<0>(st)) : "@" + lts.state_name(std::get<1>(st));
      });
}

Strategy<PdaFiniteUnion::State> union_strategy_from_json(const Pda& pda, const FiniteLts& lts, const Json& j) {
  const PdaFiniteUnion sys{PdaSystem(pda), FiniteSystem(lts)};
  return generic_strategy_from_json<PdaFiniteUnion::State>(
      j, sys.action_names(), [&](const std::string& s) -> PdaFiniteUnion::State {
        if (!s.empty() && s[0] == '@') {
          auto f = lts.find_state(s.substr(1));
          if (!f) throw InputError("unknown finite state '" + s.substr(1) + "'");
          return PdaFiniteUnion::right(*f);
        }
        return PdaFiniteUnion::left(parse_config(pda, s));
      });
}

Json candidate_to_json(const Pda& pda, const LoopCandidate& c) {
  return Json{{"prefix_rules", c.prefix_rules},
              {"loop_rules", c.loop_rules},
              {"q", pda.control_name(c.q)},
              {"X", pda.symbol_name(c.x)},
              {"beta", word_to_json(pda, c.beta)},
              {"gamma", word_to_json(pda, c.gamma)},
              {"from_stamp", c.from_stamp},
              {"start", c.start},
              {"end", c.end},
              {"stamp_depth", c.stamp_depth}};
}

LoopCandidate candidate_from_json(const Pda& pda, const Json& j) {
  LoopCandidate c;
  c.prefix_rules = j.at("prefix_rules").get<std::vector<std::size_t>>();
  c.loop_rules = j.at("loop_rules").get<std::vector<std::size_t>>();
  auto q = pda.find_control(j.at("q").get<std::string>());
  if (!q) throw InputError("unknown control state in candidate");
  c.q = *q;
  c.x = symbol_named(pda, j.at("X").get<std::string>());
  c.beta = word_from_json(pda, j.at("beta"));
  c.gamma = word_from_json(pda, j.at("gamma"));
  c.from_stamp = j.value("from_stamp", false);
  c.start = j.value("start", std::size_t{0});
  c.end = j.value("end", std::size_t{0});
  c.stamp_depth = j.value("stamp_depth", std::size_t{0});
  return c;
}

Json bisimulation_certificate(const Pda& pda, const Config& init, const Config& left, const Config& right,
                              const BisimCertificate& cert) {
  Json pairs = Json::array();
  for (const auto& [s, t] : cert.pairs) pairs.push_back(Json::array({config_literal(pda, s), config_literal(pda, t)}));
  return Json{{"certificate", "bisimulation"},
              {"pda", format_pda(pda, init)},
              {"left", config_literal(pda, left)},
              {"right", config_literal(pda, right)},
              {"pairs", std::move(pairs)}};
}

Json distinction_certificate(const Pda& pda, const Config& init, const Config& left, const Config& right,
                             const Strategy<Config>& strategy) {
  return Json{{"certificate", "distinction"},
              {"pda", format_pda(pda, init)},
              {"left", config_literal(pda, left)},
              {"right", config_literal(pda, right)},
              {"level", strategy.level()},
              {"strategy", strategy_to_json(pda, strategy)}};
}

Json finite_match_certificate(const Pda& pda, const Config& c, const FiniteLts& lts, FiniteState f,
                        const FiniteMatchCertificate& cert) {
  Json matches = Json::array();
  for (const auto& [t, g] : cert.matches)
    matches.push_back(
        Json::array({config_literal(pda, Config{t.control, StackWord::finite(t.prefix)}), lts.state_name(g)}));
  return Json{{"certificate", "finite-match"},
              {"pda", format_pda(pda, c)},
              {"lts", format_lts(lts)},
              {"config", config_literal(pda, c)},
              {"state", lts.state_name(f)},
              {"depth", cert.depth},
              {"automaton", automaton_to_json(pda, cert.reach)},
              {"matches", std::move(matches)}};
}

Json union_distinction_certificate(const Pda& pda, const Config& c, const FiniteLts& lts, FiniteState f,
                                   const Strategy<PdaFiniteUnion::State>& strategy) {
  return Json{{"certificate", "pda-finite-distinction"},
              {"pda", format_pda(pda, c)},
              {"lts", format_lts(lts)},
              {"config", config_literal(pda, c)},
              {"state", lts.state_name(f)},
              {"level", strategy.level()},
              {"strategy", union_strategy_to_json(pda, lts, strategy)}};
}

Json witness_certificate(const Pda& pda, const Config& c_in, const Witness& w, const AnalysisConfig& config) {
  Json corroboration = Json::array();
  for (const auto& [e, l] : w.corroboration) corroboration.push_back(Json::array({e, l.to_string()}));
  return Json{{"certificate", "witness"},
              {"pda", format_pda(pda, c_in)},
              {"init", config_literal(pda, c_in)},
              {"budgets",
               {{"cutoff", config.cutoff}, {"omega_budget", config.omega_budget}, {"region_limit", config.region_limit}}},
              {"candidate", candidate_to_json(pda, w.candidate)},
              {"B", w.bound.B},
              {"b", w.bound.b},
              {"ell", w.bound.ell},
              {"L", control_set_to_json(pda, w.bound.L)},
              {"E", w.bound.E},
              {"E_prime", w.bound.e_prime},
              {"C", cvalue_to_json(w.bound.C)},
              {"pumped", config_literal(pda, w.pumped)},
              {"limit", config_literal(pda, w.limit)},
              {"level", w.level},
              {"strategy", strategy_to_json(pda, w.strategy)},
              {"corroboration", std::move(corroboration)},
              {"certified", w.certified}};
}

namespace {

CertificateCheck check_distinction(const Pda& pda, const Config& left, const Config& right, int level,
                                   const Strategy<Config>& strategy) {
  if (strategy.nodes.empty()) return {false, "empty strategy"};
  const auto& root = strategy.nodes.at(strategy.root);
  if (!(root.left == left) || !(root.right == right)) return {false, "strategy root is another pair"};
  if (root.level != level) return {false, "strategy root level differs from the stated level"};
  const PdaSystem sys(pda);
  const auto replay = check_strategy(sys, strategy);
  if (!replay.ok) return {false, "strategy replay failed: " + replay.reason};
  if (replay.depth != level + 1) return {false, "strategy does not distinguish at round level+1"};
  StratifiedGame<PdaSystem> game(sys);
  if (!game.bounded_bisim(left, right, level)) return {false, "the pair already differs below the stated level"};
  return {true, {}};
}

CertificateCheck check_document(const Json& doc) {
  const auto kind = doc.at("certificate").get<std::string>();
  const PdaFile file = parse_pda(doc.at("pda").get<std::string>());
  const Pda& pda = file.pda;
  if (kind == "bisimulation") {
    BisimCertificate cert;
    for (const auto& p : doc.at("pairs"))
      cert.pairs.emplace_back(parse_config(pda, p.at(0).get<std::string>()),
                              parse_config(pda, p.at(1).get<std::string>()));
    return check_bisim_certificate(pda, cert, parse_config(pda, doc.at("left").get<std::string>()),
                                   parse_config(pda, doc.at("right").get<std::string>()));
  }
  if (kind == "distinction") {
    return check_distinction(pda, parse_config(pda, doc.at("left").get<std::string>()),
                             parse_config(pda, doc.at("right").get<std::string>()), doc.at("level").get<int>(),
                             strategy_from_json(pda, doc.at("strategy")));
  }
  if (kind == "finite-match" || kind == "pda-finite-distinction") {
    const FiniteLts lts = parse_lts(doc.at("lts").get<std::string>());
    const Config c = parse_config(pda, doc.at("config").get<std::string>());
    auto f = lts.find_state(doc.at("state").get<std::string>());
    if (!f) return {false, "unknown finite state"};
    if (kind == "finite-match") {
      FiniteMatchCertificate cert;
      cert.depth = doc.at("depth").get<std::size_t>();
      cert.reach = automaton_from_json(pda, doc.at("automaton"));
      for (const auto& m : doc.at("matches")) {
        const Config t = parse_config(pda, m.at(0).get<std::string>());
        if (!t.stack.is_finite()) return {false, "match with an infinite stack"};
        auto g = lts.find_state(m.at(1).get<std::string>());
        if (!g) return {false, "match names an unknown finite state"};
        cert.matches.emplace_back(TruncatedConfig{t.control, t.stack.prefix()}, *g);
      }
      return check_finite_match_certificate(pda, c, lts, *f, cert);
    }
    const auto strategy = union_strategy_from_json(pda, lts, doc.at("strategy"));
    const int level = doc.at("level").get<int>();
    const PdaFiniteUnion sys{PdaSystem(pda), FiniteSystem(lts)};
    if (strategy.nodes.empty()) return {false, "empty strategy"};
    const auto& root = strategy.nodes.at(strategy.root);
    if (!(root.left == PdaFiniteUnion::left(c)) || !(root.right == PdaFiniteUnion::right(*f)))
      return {false, "strategy root is another pair"};
    const auto replay = check_strategy(sys, strategy);
    if (!replay.ok) return {false, "strategy replay failed: " + replay.reason};
    if (replay.depth != level + 1 || root.level != level) return {false, "strategy depth differs from its level"};
    return {true, {}};
  }
  if (kind == "witness") {
    const Config c_in = parse_config(pda, doc.at("init").get<std::string>());
    AnalysisConfig config;
    const auto& budgets = doc.at("budgets");
    config.cutoff = budgets.at("cutoff").get<int>();
    config.omega_budget = budgets.at("omega_budget").get<std::size_t>();
    config.region_limit = budgets.at("region_limit").get<std::size_t>();
    Witness w;
    w.candidate = candidate_from_json(pda, doc.at("candidate"));
    w.bound.B = doc.at("B").get<std::uint64_t>();
    w.bound.b = doc.at("b").get<std::uint64_t>();
    w.bound.ell = doc.at("ell").get<std::uint64_t>();
    w.bound.L = ControlSet(pda.num_controls());
    for (const auto& p : doc.at("L")) {
      auto id = pda.find_control(p.get<std::string>());
      if (!id) return {false, "unknown control state in L"};
      w.bound.L.insert(*id);
    }
    w.pumped = parse_config(pda, doc.at("pumped").get<std::string>());
    w.limit = parse_config(pda, doc.at("limit").get<std::string>());
    w.level = doc.at("level").get<int>();
    w.strategy = strategy_from_json(pda, doc.at("strategy"));
    for (const auto& e : doc.at("corroboration"))
      w.corroboration.emplace_back(e.at(0).get<std::uint64_t>(), parse_level(e.at(1).get<std::string>()));
    w.certified = doc.at("certified").get<bool>();
    return check_witness(pda, c_in, w, config);
  }
  return {false, "unknown certificate kind '" + kind + "'"};
}

}  // namespace

CertificateCheck check_certificate(const Json& doc) {
  try {
    return check_document(doc);
  } catch (const Json::exception& e) {
    return {false, std::string("malformed certificate: ") + e.what()};
  } catch (const InputError& e) {
    return {false, std::string("malformed certificate: ") + e.what()};
  } catch (const std::exception& e) {
    return {false, std::string("certificate rejected: ") + e.what()};
  }
}

}  // namespace pdreg
