#pragma once

// Stratified bisimilarity (the k-round coverage game) over any
// finite-branching transition system, plus regions and eq-level sets.

#include <algorithm>
#include <concepts>
#include <cstdint>
#include <deque>
#include <functional>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "pdreg/pda.hpp"

namespace pdreg {

template <class State>
struct Move {
  ActionId action;
  State target;

  bool operator==(const Move&) const = default;
};

/// Memo keys identify a state up to what determines its k-round behaviour.
using MemoKey = std::vector<std::int32_t>;

template <class S>
concept TransitionSystem = requires(const S& sys, const typename S::State& s, int depth) {
  typename S::State;
  { sys.successors(s) } -> std::same_as<std::vector<Move<typename S::State>>>;
  { sys.memo_key(s, depth) } -> std::same_as<MemoKey>;
  { sys.describe(s) } -> std::convertible_to<std::string>;
  { std::hash<typename S::State>{}(s) } -> std::convertible_to<std::size_t>;
};

template <TransitionSystem S>
std::vector<Move<typename S::State>> successors(const S& sys, const typename S::State& s) {
  return sys.successors(s);
}

struct EqLevelResult {
  enum class Kind { Finite, AtLeast, Omega };

  Kind kind = Kind::AtLeast;
  int value = 0;  // the level for Finite, the cutoff for AtLeast

  static EqLevelResult finite(int k) { return {Kind::Finite, k}; }
  static EqLevelResult at_least(int cutoff) { return {Kind::AtLeast, cutoff}; }
  static EqLevelResult omega() { return {Kind::Omega, 0}; }

  bool is_finite() const { return kind == Kind::Finite; }
  std::string to_string() const {
    switch (kind) {
      case Kind::Finite: return "Finite(" + std::to_string(value) + ")";
      case Kind::AtLeast: return "AtLeast(" + std::to_string(value) + ")";
      case Kind::Omega: return "Omega";
    }
    return {};
  }

  auto operator<=>(const EqLevelResult&) const = default;
};

enum class Side { Left, Right };

/// One attacker move of a distinguishing strategy: at (left, right) the
/// attacker plays `action` to `challenge` on `challenger`'s side, and every
/// defender answer leads to a child node that is distinguished faster.
template <class State>
struct StrategyNode {
  State left;
  State right;
  int level = 0;  // eqlevel(left, right)
  Side challenger = Side::Left;
  ActionId action = 0;
  State challenge;
  std::vector<std::pair<State, std::size_t>> responses;  // (answer, child node)
};

/// Distinguishing strategy stored as a DAG; nodes[root] is the queried pair.
template <class State>
struct Strategy {
  std::vector<StrategyNode<State>> nodes;
  std::size_t root = 0;

  int level() const { return nodes.at(root).level; }
};

/// Memoized k-round coverage game. One instance is one analysis session and
/// must not be shared between threads.
template <TransitionSystem Sys>
class StratifiedGame {
 public:
  using State = typename Sys::State;

  explicit StratifiedGame(const Sys& sys) : sys_(sys) {}

  const Sys& system() const { return sys_; }

  const std::vector<Move<State>>& moves(const State& s) {
    auto it = succ_.find(s);
    if (it == succ_.end()) it = succ_.emplace(s, sys_.successors(s)).first;
    return it->second;
  }

  /// s ~_k t
  bool bounded_bisim(const State& s, const State& t, int k) {
    if (k <= 0) return true;
    PairKey key{sys_.memo_key(s, k), sys_.memo_key(t, k), k};
    if (key.a == key.b) return true;
    if (key.b < key.a) std::swap(key.a, key.b);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    const bool result = covers(s, t, k - 1) && covers_reverse(s, t, k - 1);
    memo_.emplace(std::move(key), result);
    return result;
  }

  /// Finite(k) when s ~_k t but not s ~_{k+1} t for some k < cutoff,
  /// AtLeast(cutoff) otherwise. Levels are tried in increasing order so the
  /// memo of level k is reused at level k+1.
  EqLevelResult eqlevel(const State& s, const State& t, int cutoff) {
    for (int k = 1; k <= cutoff; ++k)
      if (!bounded_bisim(s, t, k)) return EqLevelResult::finite(k - 1);
    return EqLevelResult::at_least(cutoff);
  }

  /// Distinguishing strategy for a pair whose eq-level is below `cutoff`.
  /// Returns nullopt when s ~_cutoff t.
  std::optional<Strategy<State>> distinguishing_strategy(const State& s, const State& t, int cutoff) {
    const auto lvl = eqlevel(s, t, cutoff);
    if (!lvl.is_finite()) return std::nullopt;
    Strategy<State> strat;
    std::unordered_map<std::pair<State, State>, std::size_t, PairHash> index;
    strat.root = build_node(s, t, lvl.value, strat, index);
    return strat;
  }

  std::size_t memo_size() const { return memo_.size(); }

 private:
  struct PairKey {
    MemoKey a;
    MemoKey b;
    int k;
    bool operator==(const PairKey&) const = default;
  };
  struct PairKeyHash {
    std::size_t operator()(const PairKey& p) const noexcept {
      std::size_t h = static_cast<std::size_t>(p.k) * 0x9e3779b97f4a7c15ULL;
      for (auto v : p.a) h = (h ^ static_cast<std::size_t>(v)) * 1099511628211ULL;
      h ^= 0xabcdefULL;
      for (auto v : p.b) h = (h ^ static_cast<std::size_t>(v)) * 1099511628211ULL;
      return h;
    }
  };
  struct PairHash {
    std::size_t operator()(const std::pair<State, State>& p) const noexcept {
      return std::hash<State>{}(p.first) * 31 + std::hash<State>{}(p.second);
    }
  };

  // Every move of s is answered by t into ~_k.
  bool covers(const State& s, const State& t, int k) {
    const auto ms = moves(s);
    const auto& mt = moves(t);
    for (const auto& m : ms) {
      bool answered = false;
      for (const auto& r : mt) {
        if (r.action != m.action) continue;
        if (bounded_bisim(m.target, r.target, k)) {
          answered = true;
          break;
        }
      }
      if (!answered) return false;
    }
    return true;
  }

  bool covers_reverse(const State& s, const State& t, int k) {
    const auto mt = moves(t);
    const auto& ms = moves(s);
    for (const auto& m : mt) {
      bool answered = false;
      for (const auto& r : ms) {
        if (r.action != m.action) continue;
        if (bounded_bisim(r.target, m.target, k)) {
          answered = true;
          break;
        }
      }
      if (!answered) return false;
    }
    return true;
  }

  int exact_level(const State& s, const State& t, int below) {
    for (int k = 1; k <= below; ++k)
      if (!bounded_bisim(s, t, k)) return k - 1;
    return below;
  }

  // (s, t) has eq-level exactly `level`: some challenge has all answers at
  // eq-level < level.
  std::size_t build_node(const State& s, const State& t, int level, Strategy<State>& strat,
                         std::unordered_map<std::pair<State, State>, std::size_t, PairHash>& index) {
    if (auto it = index.find({s, t}); it != index.end()) return it->second;
    for (Side side : {Side::Left, Side::Right}) {
      const State& chal_state = side == Side::Left ? s : t;
      const State& def_state = side == Side::Left ? t : s;
      const auto chal = moves(chal_state);
      const auto def = moves(def_state);
      for (const auto& m : chal) {
        std::vector<std::pair<State, int>> answers;
        bool good = true;
        for (const auto& r : def) {
          if (r.action != m.action) continue;
          const State& l = side == Side::Left ? m.target : r.target;
          const State& rr = side == Side::Left ? r.target : m.target;
          if (level > 0 && bounded_bisim(l, rr, level)) {
            good = false;
            break;
          }
          if (level == 0) {
            good = false;
            break;
          }
          answers.emplace_back(r.target, exact_level(l, rr, level - 1));
        }
        if (!good) continue;
        const std::size_t id = strat.nodes.size();
        strat.nodes.push_back(StrategyNode<State>{s, t, level, side, m.action, m.target, {}});
        index.emplace(std::pair<State, State>{s, t}, id);
        for (const auto& [answer, lvl] : answers) {
          const State& l = side == Side::Left ? m.target : answer;
          const State& rr = side == Side::Left ? answer : m.target;
          const std::size_t child = build_node(l, rr, lvl, strat, index);
          strat.nodes[id].responses.emplace_back(answer, child);
        }
        return id;
      }
    }
    throw std::logic_error("no distinguishing move for a pair with a finite eq-level");
  }

  const Sys& sys_;
  std::unordered_map<State, std::vector<Move<State>>> succ_;
  std::unordered_map<PairKey, bool, PairKeyHash> memo_;
};

struct StrategyCheck {
  bool ok = false;
  int depth = 0;  // the strategy proves left and right differ at round `depth`
  std::string reason;
};

/// Replays a distinguishing strategy against the system's successor relation
/// only (no memo tables): each challenge must be a real move, the listed
/// answers must be exactly the defender's moves with that action, and every
/// child must prove its own pair distinct at a strictly smaller depth.
template <TransitionSystem Sys>
StrategyCheck check_strategy(const Sys& sys, const Strategy<typename Sys::State>& strat) {
  using State = typename Sys::State;
  std::vector<int> depth(strat.nodes.size(), -1);  // -1 unvisited, -2 on stack
  std::string reason;
  std::function<int(std::size_t)> visit = [&](std::size_t id) -> int {
    if (id >= strat.nodes.size()) {
      reason = "dangling child index";
      return -1;
    }
    if (depth[id] == -2) {
      reason = "cyclic strategy";
      return -1;
    }
    if (depth[id] >= 0) return depth[id];
    depth[id] = -2;
    const auto& node = strat.nodes[id];
    const State& chal = node.challenger == Side::Left ? node.left : node.right;
    const State& def = node.challenger == Side::Left ? node.right : node.left;
    const auto chal_moves = sys.successors(chal);
    if (std::find(chal_moves.begin(), chal_moves.end(), Move<State>{node.action, node.challenge}) ==
        chal_moves.end()) {
      reason = "challenge is not a move of " + sys.describe(chal);
      return -1;
    }
    std::vector<State> expected;
    for (const auto& m : sys.successors(def))
      if (m.action == node.action) expected.push_back(m.target);
    if (expected.size() != node.responses.size()) {
      reason = "answers of " + sys.describe(def) + " are not listed exactly";
      return -1;
    }
    int d = 1;
    for (const auto& [answer, child] : node.responses) {
      if (std::find(expected.begin(), expected.end(), answer) == expected.end()) {
        reason = "listed answer is not a move of " + sys.describe(def);
        return -1;
      }
      if (child >= strat.nodes.size()) {
        reason = "dangling child index";
        return -1;
      }
      const auto& c = strat.nodes[child];
      const State& want_l = node.challenger == Side::Left ? node.challenge : answer;
      const State& want_r = node.challenger == Side::Left ? answer : node.challenge;
      if (!(c.left == want_l) || !(c.right == want_r)) {
        reason = "child node does not match the answered pair";
        return -1;
      }
      const int cd = visit(child);
      if (cd < 0) return -1;
      d = std::max(d, cd + 1);
    }
    if (d > node.level + 1) {
      reason = "strategy deeper than its claimed level";
      return -1;
    }
    depth[id] = d;
    return d;
  };
  const int d = visit(strat.root);
  if (d < 0) return StrategyCheck{false, 0, reason};
  return StrategyCheck{true, d, {}};
}

/// States reachable by at most m transitions, in breadth-first order.
/// Throws BudgetError when more than `limit` states are found.
template <TransitionSystem Sys>
std::vector<typename Sys::State> region(const Sys& sys, const typename Sys::State& s, std::uint64_t m,
                                        std::size_t limit = static_cast<std::size_t>(-1)) {
  using State = typename Sys::State;
  std::vector<State> out{s};
  std::unordered_set<State> seen{s};
  std::size_t frontier_begin = 0;
  for (std::uint64_t depth = 0; depth < m; ++depth) {
    const std::size_t frontier_end = out.size();
    if (frontier_begin == frontier_end) break;
    for (std::size_t i = frontier_begin; i < frontier_end; ++i) {
      for (auto& mv : sys.successors(out[i])) {
        if (seen.insert(mv.target).second) {
          out.push_back(std::move(mv.target));
          if (out.size() > limit) throw BudgetError("region exceeds " + std::to_string(limit) + " states");
        }
      }
    }
    frontier_begin = frontier_end;
  }
  return out;
}

/// { eqlevel(r, t) : r in R, t in T } with cutoff semantics of eqlevel().
template <TransitionSystem Sys>
std::set<EqLevelResult> eqlevels_set(StratifiedGame<Sys>& game, const std::vector<typename Sys::State>& R,
                                     const std::vector<typename Sys::State>& T, int cutoff) {
  std::set<EqLevelResult> out;
  for (const auto& r : R)
    for (const auto& t : T) out.insert(game.eqlevel(r, t, cutoff));
  return out;
}

}  // namespace pdreg
