#include "pdreg/lts.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <set>
#include <sstream>

namespace pdreg {

FiniteLts::FiniteLts(std::vector<std::string> states, std::vector<std::string> actions,
                     std::vector<Transition> transitions)
    : states_(std::move(states)), actions_(std::move(actions)), transitions_(std::move(transitions)) {
  auto unique = [](const std::vector<std::string>& names, const char* what) {
    std::set<std::string_view> seen;
    for (const auto& n : names)
      if (n.empty() || !seen.insert(n).second)
        throw InputError(std::string("empty or duplicate name among ") + what + ": '" + n + "'");
  };
  unique(states_, "states");
  unique(actions_, "actions");
  for (const auto& t : transitions_) {
    if (t.source >= states_.size() || t.target >= states_.size())
      throw InputError("transition mentions an undeclared state");
    if (t.action >= actions_.size()) throw InputError("transition mentions an undeclared action");
  }
  std::sort(transitions_.begin(), transitions_.end());
  transitions_.erase(std::unique(transitions_.begin(), transitions_.end()), transitions_.end());
  offsets_.assign(states_.size() + 1, 0);
  for (const auto& t : transitions_) ++offsets_[t.source + 1];
  for (std::size_t i = 0; i < states_.size(); ++i) offsets_[i + 1] += offsets_[i];
}

std::optional<FiniteState> FiniteLts::find_state(std::string_view name) const {
  auto it = std::find(states_.begin(), states_.end(), name);
  if (it == states_.end()) return std::nullopt;
  return static_cast<FiniteState>(it - states_.begin());
}

std::optional<ActionId> FiniteLts::find_action(std::string_view name) const {
  auto it = std::find(actions_.begin(), actions_.end(), name);
  if (it == actions_.end()) return std::nullopt;
  return static_cast<ActionId>(it - actions_.begin());
}

std::span<const FiniteLts::Transition> FiniteLts::out(FiniteState s) const {
  if (s >= states_.size()) throw InputError("unknown state id " + std::to_string(s));
  return std::span<const Transition>(transitions_).subspan(offsets_[s], offsets_[s + 1] - offsets_[s]);
}

FiniteLts parse_lts(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t lineno = 0;
  bool header = false;
  std::optional<std::vector<std::string>> states, actions;
  struct Pending {
    std::vector<std::string> toks;
    std::size_t line;
  };
  std::vector<Pending> trans;
  auto fail = [&](const std::string& msg) -> InputError {
    return InputError("line " + std::to_string(lineno) + ": " + msg);
  };
  while (std::getline(in, line)) {
    ++lineno;
    if (auto h = line.find('#'); h != std::string::npos) line.resize(h);
    std::istringstream ls(line);
    std::vector<std::string> toks;
    for (std::string t; ls >> t;) toks.push_back(t);
    if (toks.empty()) continue;
    if (!header) {
      if (toks.size() != 1 || toks[0] != "lts") throw fail("expected header 'lts'");
      header = true;
      continue;
    }
    std::vector<std::string> rest(toks.begin() + 1, toks.end());
    if (toks[0] == "states:") {
      if (states) throw fail("duplicate 'states:' line");
      states = rest;
    } else if (toks[0] == "actions:") {
      if (actions) throw fail("duplicate 'actions:' line");
      actions = rest;
    } else if (toks[0] == "trans:") {
      if (rest.size() != 3) throw fail("expected 'trans: source action target'");
      trans.push_back(Pending{rest, lineno});
    } else {
      throw fail("unexpected '" + toks[0] + "'");
    }
  }
  if (!header) throw InputError("line 1: expected header 'lts'");
  if (!states || states->empty()) throw InputError("missing or empty 'states:' line");
  if (!actions) actions.emplace();
  FiniteLts declared(*states, *actions, {});
  std::vector<FiniteLts::Transition> ts;
  for (const auto& p : trans) {
    lineno = p.line;
    auto s = declared.find_state(p.toks[0]);
    auto a = declared.find_action(p.toks[1]);
    auto t = declared.find_state(p.toks[2]);
    if (!s) throw fail("undeclared state '" + p.toks[0] + "'");
    if (!a) throw fail("undeclared action '" + p.toks[1] + "'");
    if (!t) throw fail("undeclared state '" + p.toks[2] + "'");
    ts.push_back({*s, *a, *t});
  }
  return FiniteLts(*states, *actions, std::move(ts));
}

std::string format_lts(const FiniteLts& lts) {
  std::ostringstream os;
  os << "lts\nstates:";
  for (const auto& s : lts.state_names()) os << ' ' << s;
  os << "\nactions:";
  for (const auto& a : lts.action_names()) os << ' ' << a;
  os << '\n';
  for (const auto& t : lts.transitions())
    os << "trans: " << lts.state_name(t.source) << ' ' << lts.action_name(t.action) << ' '
       << lts.state_name(t.target) << '\n';
  return os.str();
}

Quotient quotient_finite(const FiniteLts& lts) {
  const std::size_t n = lts.num_states();
  std::vector<FiniteState> block(n, 0);
  std::size_t count = n == 0 ? 0 : 1;
  for (;;) {
    // Signature: own block plus the set of (action, successor block).
    std::map<std::pair<FiniteState, std::vector<std::pair<ActionId, FiniteState>>>, FiniteState> ids;
    std::vector<FiniteState> next(n);
    for (FiniteState s = 0; s < n; ++s) {
      std::vector<std::pair<ActionId, FiniteState>> sig;
      for (const auto& t : lts.out(s)) sig.emplace_back(t.action, block[t.target]);
      std::sort(sig.begin(), sig.end());
      sig.erase(std::unique(sig.begin(), sig.end()), sig.end());
      auto [it, fresh] = ids.try_emplace({block[s], std::move(sig)}, static_cast<FiniteState>(ids.size()));
      next[s] = it->second;
    }
    block = std::move(next);
    if (ids.size() == count) break;
    count = ids.size();
  }
  std::vector<std::string> names;
  for (std::size_t c = 0; c < count; ++c) names.push_back("c" + std::to_string(c));
  std::vector<FiniteLts::Transition> ts;
  for (const auto& t : lts.transitions()) ts.push_back({block[t.source], t.action, block[t.target]});
  return Quotient{FiniteLts(std::move(names), lts.action_names(), std::move(ts)), std::move(block)};
}

}  // namespace pdreg
