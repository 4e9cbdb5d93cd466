#pragma once

// TransitionSystem adapters: explicit finite LTSs, pda configuration graphs,
// and the disjoint union used when comparing states of two systems.

#include <map>
#include <variant>

#include "pdreg/game.hpp"
#include "pdreg/lts.hpp"
#include "pdreg/pda.hpp"

namespace pdreg {

class FiniteSystem {
 public:
  using State = FiniteState;

  explicit FiniteSystem(const FiniteLts& lts) : lts_(&lts) {}

  std::vector<Move<State>> successors(const State& s) const {
    std::vector<Move<State>> out;
    for (const auto& t : lts_->out(s)) out.push_back({t.action, t.target});
    return out;
  }
  MemoKey memo_key(const State& s, int) const { return {static_cast<std::int32_t>(s)}; }
  std::string describe(const State& s) const { return lts_->state_name(s); }
  const std::vector<std::string>& action_names() const { return lts_->action_names(); }
  const FiniteLts& lts() const { return *lts_; }

 private:
  const FiniteLts* lts_;
};

/// The LTS of a pda over configurations with regular stack words. The memo
/// key at depth k is the k-truncation: configurations sharing it are ~_k.
class PdaSystem {
 public:
  using State = Config;

  explicit PdaSystem(const Pda& pda) : pda_(&pda) {}

  std::vector<Move<State>> successors(const State& c) const {
    std::vector<Move<State>> out;
    for (auto& s : step(*pda_, c)) out.push_back({s.action, std::move(s.target)});
    // Distinct rules may produce the same (action, target).
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  }
  MemoKey memo_key(const State& c, int depth) const {
    MemoKey key{static_cast<std::int32_t>(c.control)};
    for (SymbolId x : c.stack.take(static_cast<std::size_t>(depth))) key.push_back(static_cast<std::int32_t>(x));
    return key;
  }
  std::string describe(const State& c) const { return format_config(*pda_, c); }
  const std::vector<std::string>& action_names() const { return pda_->action_names(); }
  const Pda& pda() const { return *pda_; }

 private:
  const Pda* pda_;
};

/// Disjoint union of two systems. Actions of the second system are matched to
/// the first by name; names unknown to the first get fresh ids.
template <TransitionSystem A, TransitionSystem B>
class DisjointUnion {
 public:
  using State = std::variant<typename A::State, typename B::State>;

  DisjointUnion(A a, B b) : a_(std::move(a)), b_(std::move(b)) {
    names_ = a_.action_names();
    for (const auto& n : b_.action_names()) {
      auto it = std::find(names_.begin(), names_.end(), n);
      if (it == names_.end()) {
        map_.push_back(static_cast<ActionId>(names_.size()));
        names_.push_back(n);
      } else {
        map_.push_back(static_cast<ActionId>(it - names_.begin()));
      }
    }
  }

  static State left(typename A::State s) { return State(std::in_place_index<0>, std::move(s)); }
  static State right(typename B::State s) { return State(std::in_place_index<1>, std::move(s)); }

  std::vector<Move<State>> successors(const State& s) const {
    std::vector<Move<State>> out;
    if (s.index() == 0) {
      for (auto& m : a_.successors(std::get<0>(s))) out.push_back({m.action, left(std::move(m.target))});
    } else {
      for (auto& m : b_.successors(std::get<1>(s))) out.push_back({map_.at(m.action), right(std::move(m.target))});
      std::stable_sort(out.begin(), out.end(), [](const auto& x, const auto& y) { return x.action < y.action; });
    }
    return out;
  }
  MemoKey memo_key(const State& s, int depth) const {
    MemoKey key{static_cast<std::int32_t>(s.index())};
    MemoKey inner = s.index() == 0 ? a_.memo_key(std::get<0>(s), depth) : b_.memo_key(std::get<1>(s), depth);
    key.insert(key.end(), inner.begin(), inner.end());
    return key;
  }
  std::string describe(const State& s) const {
    return s.index() == 0 ? a_.describe(std::get<0>(s)) : b_.describe(std::get<1>(s));
  }
  const std::vector<std::string>& action_names() const { return names_; }
  const A& first() const { return a_; }
  const B& second() const { return b_; }

 private:
  A a_;
  B b_;
  std::vector<std::string> names_;
  std::vector<ActionId> map_;
};

using PdaFiniteUnion = DisjointUnion<PdaSystem, FiniteSystem>;
using FiniteUnion = DisjointUnion<FiniteSystem, FiniteSystem>;

}  // namespace pdreg
