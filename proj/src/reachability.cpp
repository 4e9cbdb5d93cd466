#include "pdreg/reachability.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <set>
#include <sstream>

namespace pdreg {

ConfigAutomaton::ConfigAutomaton(std::size_t num_controls, std::size_t num_symbols, std::size_t num_states,
                                 std::vector<Edge> edges, std::vector<StateId> finals)
    : controls_(num_controls), symbols_(num_symbols), states_(num_states), edges_(std::move(edges)),
      finals_(std::move(finals)) {
  if (states_ < controls_) throw InputError("automaton has fewer states than controls");
  for (const auto& e : edges_) {
    if (e.src >= states_ || e.dst >= states_) throw InputError("automaton edge uses an unknown state");
    if (e.symbol != kEpsilon && e.symbol >= symbols_) throw InputError("automaton edge uses an unknown symbol");
  }
  for (auto f : finals_)
    if (f >= states_) throw InputError("automaton final state out of range");
  std::sort(edges_.begin(), edges_.end());
  edges_.erase(std::unique(edges_.begin(), edges_.end()), edges_.end());
  std::sort(finals_.begin(), finals_.end());
  finals_.erase(std::unique(finals_.begin(), finals_.end()), finals_.end());
  offsets_.assign(states_ + 1, 0);
  for (const auto& e : edges_) ++offsets_[e.src + 1];
  for (std::size_t i = 0; i < states_; ++i) offsets_[i + 1] += offsets_[i];
}

ConfigAutomaton ConfigAutomaton::single(const Pda& pda, const Config& c) {
  pda.validate(c);
  if (!c.stack.is_finite()) throw InputError("reachability needs a finite initial stack");
  const auto& w = c.stack.prefix();
  std::vector<Edge> edges;
  StateId cur = c.control;
  auto next = static_cast<StateId>(pda.num_controls());
  for (SymbolId x : w) {
    edges.push_back({cur, x, next});
    cur = next++;
  }
  return ConfigAutomaton(pda.num_controls(), pda.num_symbols(), next, std::move(edges), {cur});
}

bool ConfigAutomaton::is_final(StateId s) const { return std::binary_search(finals_.begin(), finals_.end(), s); }

std::span<const ConfigAutomaton::Edge> ConfigAutomaton::out(StateId s) const {
  return std::span<const Edge>(edges_).subspan(offsets_[s], offsets_[s + 1] - offsets_[s]);
}

std::vector<ConfigAutomaton::StateId> ConfigAutomaton::start(ControlId q) const {
  std::vector<StateId> out{q};
  for (const auto& e : this->out(q))
    if (e.symbol == kEpsilon) out.push_back(e.dst);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<ConfigAutomaton::StateId> ConfigAutomaton::read(const std::vector<StateId>& from, SymbolId x) const {
  std::vector<StateId> out;
  for (StateId s : from) {
    auto es = this->out(s);
    auto lo = std::lower_bound(es.begin(), es.end(), Edge{s, x, 0});
    for (; lo != es.end() && lo->symbol == x; ++lo) out.push_back(lo->dst);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<ConfigAutomaton::StateId> ConfigAutomaton::read(const std::vector<StateId>& from,
                                                            std::span<const SymbolId> word) const {
  std::vector<StateId> cur = from;
  for (SymbolId x : word) {
    if (cur.empty()) break;
    cur = read(cur, x);
  }
  return cur;
}

bool ConfigAutomaton::accepts(ControlId q, std::span<const SymbolId> word) const {
  if (q >= controls_) return false;
  for (StateId s : read(start(q), word))
    if (is_final(s)) return true;
  return false;
}

std::vector<bool> ConfigAutomaton::live_states() const {
  std::vector<bool> live(states_, false);
  for (auto f : finals_) live[f] = true;
  for (bool changed = true; changed;) {
    changed = false;
    for (const auto& e : edges_)
      if (live[e.dst] && !live[e.src]) live[e.src] = changed = true;
  }
  return live;
}

std::string ConfigAutomaton::dump(const Pda& pda) const {
  std::ostringstream os;
  auto name = [&](StateId s) {
    return s < controls_ ? pda.control_name(s) : "s" + std::to_string(s);
  };
  for (ControlId q = 0; q < controls_; ++q) os << "entry " << pda.control_name(q) << ' ' << name(q) << '\n';
  for (auto f : finals_) os << "final " << name(f) << '\n';
  for (const auto& e : edges_)
    os << name(e.src) << ' ' << (e.symbol == kEpsilon ? std::string("-") : pda.symbol_name(e.symbol)) << ' '
       << name(e.dst) << '\n';
  return os.str();
}

ConfigAutomaton saturate(const Pda& pda, const ConfigAutomaton& initial) {
  if (pda.max_push() > 2)
    throw InputError("post* needs right-hand sides of length <= 2; run normalize_rules first");
  if (initial.num_controls() != pda.num_controls() || initial.num_symbols() != pda.num_symbols())
    throw InputError("automaton does not match the pda");
  using StateId = ConfigAutomaton::StateId;
  using Edge = ConfigAutomaton::Edge;
  const std::size_t nq = pda.num_controls();
  std::size_t num_states = initial.num_states();
  auto push_states = initial.push_states;
  for (const Rule& r : pda.rules()) {
    if (r.push.size() != 2) continue;
    if (push_states.try_emplace({r.to, r.push[0]}, static_cast<StateId>(num_states)).second) ++num_states;
  }

  std::set<Edge> rel;
  std::vector<std::vector<Edge>> out_of(num_states);  // non-ε edges of rel by source
  std::vector<std::vector<StateId>> eps_into(num_states);
  std::deque<Edge> work(initial.edges().begin(), initial.edges().end());
  auto record = [&](const Edge& e) {
    if (!rel.insert(e).second) return false;
    if (e.symbol == kEpsilon) eps_into[e.dst].push_back(e.src);
    else out_of[e.src].push_back(e);
    return true;
  };

  while (!work.empty()) {
    const Edge t = work.front();
    work.pop_front();
    if (rel.count(t)) continue;
    record(t);
    if (t.symbol != kEpsilon) {
      if (t.src >= nq) continue;
      for (std::size_t idx : pda.rules_for(t.src, t.symbol)) {
        const Rule& r = pda.rules()[idx];
        switch (r.push.size()) {
          case 0: work.push_back({r.to, kEpsilon, t.dst}); break;
          case 1: work.push_back({r.to, r.push[0], t.dst}); break;
          default: {
            const StateId mid = push_states.at({r.to, r.push[0]});
            work.push_back({r.to, r.push[0], mid});
            const Edge below{mid, r.push[1], t.dst};
            if (record(below))
              for (StateId src : std::vector<StateId>(eps_into[mid])) work.push_back({src, r.push[1], t.dst});
            break;
          }
        }
      }
    } else {
      for (const Edge& e : std::vector<Edge>(out_of[t.dst])) work.push_back({t.src, e.symbol, e.dst});
    }
  }
  ConfigAutomaton out(nq, pda.num_symbols(), num_states, std::vector<Edge>(rel.begin(), rel.end()),
                      initial.finals());
  out.push_states = std::move(push_states);
  return out;
}

ConfigAutomaton poststar(const Pda& pda, const Config& c0) {
  if (pda.max_push() > 2)
    throw InputError("post* needs right-hand sides of length <= 2; run normalize_rules first");
  return saturate(pda, ConfigAutomaton::single(pda, c0));
}

ConfigAutomaton reachable_configs(const Pda& pda, const Config& c0) {
  const NormalizedPda norm = normalize_rules(pda);
  ConfigAutomaton a = poststar(norm.pda, norm.to_normalized(c0));
  if (norm.identity) return a;
  using Edge = ConfigAutomaton::Edge;
  std::vector<Edge> edges;
  std::size_t states = a.num_states();
  for (const auto& e : a.edges()) {
    if (e.symbol == kEpsilon || norm.expansion[e.symbol].size() == 1) {
      edges.push_back({e.src, e.symbol == kEpsilon ? kEpsilon : norm.expansion[e.symbol][0], e.dst});
      continue;
    }
    const auto& w = norm.expansion[e.symbol];
    auto cur = e.src;
    for (std::size_t i = 0; i + 1 < w.size(); ++i) {
      const auto next = static_cast<ConfigAutomaton::StateId>(states++);
      edges.push_back({cur, w[i], next});
      cur = next;
    }
    edges.push_back({cur, w.back(), e.dst});
  }
  return ConfigAutomaton(pda.num_controls(), pda.num_symbols(), states, std::move(edges), a.finals());
}

bool member(const ConfigAutomaton& a, const Config& c) {
  if (!c.stack.is_finite()) throw InputError("membership is defined for finite stacks only");
  if (c.control >= a.num_controls()) return false;
  for (SymbolId x : c.stack.prefix())
    if (x >= a.num_symbols()) return false;
  return a.accepts(c.control, c.stack.prefix());
}

std::vector<TruncatedConfig> reachable_truncations(const ConfigAutomaton& a, std::size_t k) {
  if (k > 12) throw BudgetError("truncation depth " + std::to_string(k) + " exceeds the limit of 12");
  using StateId = ConfigAutomaton::StateId;
  const auto live = a.live_states();
  auto any = [](const std::vector<StateId>& set, auto pred) { return std::any_of(set.begin(), set.end(), pred); };
  std::vector<TruncatedConfig> out;
  std::vector<SymbolId> word;
  std::function<void(ControlId, const std::vector<StateId>&)> walk = [&](ControlId q,
                                                                      const std::vector<StateId>& set) {
    if (!any(set, [&](StateId s) { return live[s]; })) return;
    if (word.size() == k) {
      out.push_back({q, word});
      return;
    }
    if (any(set, [&](StateId s) { return a.is_final(s); })) out.push_back({q, word});
    for (SymbolId x = 0; x < a.num_symbols(); ++x) {
      auto next = a.read(set, x);
      if (next.empty()) continue;
      word.push_back(x);
      walk(q, next);
      word.pop_back();
    }
  };
  for (ControlId q = 0; q < a.num_controls(); ++q) walk(q, a.start(q));
  std::sort(out.begin(), out.end());
  return out;
}

std::optional<Config> completion(const ConfigAutomaton& a, const TruncatedConfig& t) {
  using StateId = ConfigAutomaton::StateId;
  if (t.control >= a.num_controls()) return std::nullopt;
  const auto from = a.read(a.start(t.control), t.prefix);
  // Breadth-first search for the shortest suffix reaching a final state.
  std::vector<std::optional<std::pair<StateId, SymbolId>>> parent(a.num_states());
  std::vector<bool> seen(a.num_states(), false);
  std::deque<StateId> queue;
  for (StateId s : from) {
    seen[s] = true;
    queue.push_back(s);
  }
  while (!queue.empty()) {
    const StateId s = queue.front();
    queue.pop_front();
    if (a.is_final(s)) {
      std::vector<SymbolId> suffix;
      for (StateId cur = s; parent[cur]; cur = parent[cur]->first) suffix.push_back(parent[cur]->second);
      std::reverse(suffix.begin(), suffix.end());
      std::vector<SymbolId> w = t.prefix;
      w.insert(w.end(), suffix.begin(), suffix.end());
      return Config{t.control, StackWord::finite(std::move(w))};
    }
    for (const auto& e : a.out(s)) {
      if (e.symbol == kEpsilon || seen[e.dst]) continue;
      seen[e.dst] = true;
      parent[e.dst] = std::pair{s, e.symbol};
      queue.push_back(e.dst);
    }
  }
  return std::nullopt;
}

namespace {

// L(x) ⊆ L(Y) by exploring (state, subset) pairs.
bool included(const ConfigAutomaton& a, ConfigAutomaton::StateId x, std::vector<ConfigAutomaton::StateId> ys) {
  using StateId = ConfigAutomaton::StateId;
  std::set<std::pair<StateId, std::vector<StateId>>> seen;
  std::deque<std::pair<StateId, std::vector<StateId>>> queue;
  queue.emplace_back(x, std::move(ys));
  while (!queue.empty()) {
    auto [s, set] = std::move(queue.front());
    queue.pop_front();
    if (!seen.insert({s, set}).second) continue;
    if (a.is_final(s) && std::none_of(set.begin(), set.end(), [&](StateId y) { return a.is_final(y); }))
      return false;
    for (const auto& e : a.out(s)) {
      if (e.symbol == kEpsilon) continue;
      queue.emplace_back(e.dst, a.read(set, e.symbol));
    }
  }
  return true;
}

}  // namespace

bool is_post_closed(const Pda& pda, const ConfigAutomaton& a, std::string* why) {
  if (a.num_controls() != pda.num_controls() || a.num_symbols() != pda.num_symbols()) {
    if (why) *why = "automaton alphabet does not match the pda";
    return false;
  }
  for (std::size_t i = 0; i < pda.rules().size(); ++i) {
    const Rule& r = pda.rules()[i];
    const auto targets = a.read(a.start(r.to), r.push);
    for (auto s : a.read(a.start(r.from), r.top)) {
      if (!included(a, s, targets)) {
        if (why) *why = "accepted set is not closed under rule " + std::to_string(i);
        return false;
      }
    }
  }
  return true;
}

}  // namespace pdreg
