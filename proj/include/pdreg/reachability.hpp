#pragma once

// post* saturation: the set of configurations reachable from a finite-stack
// configuration, represented as a finite automaton over stack symbols with
// one entry state per control state.

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pdreg/pda.hpp"

namespace pdreg {

inline constexpr SymbolId kEpsilon = static_cast<SymbolId>(-1);

class ConfigAutomaton {
 public:
  using StateId = std::uint32_t;

  struct Edge {
    StateId src;
    SymbolId symbol;  // kEpsilon for ε-edges (only ever leave entry states)
    StateId dst;

    auto operator<=>(const Edge&) const = default;
  };

  ConfigAutomaton() = default;
  /// States 0..num_controls-1 are the entry states of the controls.
  ConfigAutomaton(std::size_t num_controls, std::size_t num_symbols, std::size_t num_states,
                  std::vector<Edge> edges, std::vector<StateId> finals);

  /// Automaton accepting exactly the single finite-stack configuration `c`.
  static ConfigAutomaton single(const Pda& pda, const Config& c);

  std::size_t num_controls() const { return controls_; }
  std::size_t num_symbols() const { return symbols_; }
  std::size_t num_states() const { return states_; }
  const std::vector<Edge>& edges() const { return edges_; }
  const std::vector<StateId>& finals() const { return finals_; }
  bool is_final(StateId s) const;

  /// Entry state of q plus the targets of its ε-edges.
  std::vector<StateId> start(ControlId q) const;
  std::vector<StateId> read(const std::vector<StateId>& from, SymbolId x) const;
  std::vector<StateId> read(const std::vector<StateId>& from, std::span<const SymbolId> word) const;
  bool accepts(ControlId q, std::span<const SymbolId> word) const;
  /// States from which some final state is reachable.
  std::vector<bool> live_states() const;
  std::span<const Edge> out(StateId s) const;

  /// Intermediate states introduced for push rules, keyed by (control, pushed top).
  std::map<std::pair<ControlId, SymbolId>, StateId> push_states;

  /// One transition per line `src SYMBOL dst` (ε written as `-`), entries as
  /// `entry q state`, finals as `final state`.
  std::string dump(const Pda& pda) const;

  bool operator==(const ConfigAutomaton& other) const {
    return controls_ == other.controls_ && symbols_ == other.symbols_ && states_ == other.states_ &&
           edges_ == other.edges_ && finals_ == other.finals_;
  }

 private:
  std::size_t controls_ = 0;
  std::size_t symbols_ = 0;
  std::size_t states_ = 0;
  std::vector<Edge> edges_;  // sorted
  std::vector<StateId> finals_;
  std::vector<std::size_t> offsets_;
};

/// Saturates `initial` under the rules of a normalized pda (every right-hand
/// side of length <= 2). Throws InputError for non-normalized pdas.
ConfigAutomaton saturate(const Pda& pda, const ConfigAutomaton& initial);

/// Reachable configurations of `c0` (finite stack) in a normalized pda.
ConfigAutomaton poststar(const Pda& pda, const Config& c0);

/// Reachable configurations of `c0` for any pda: normalizes when needed and
/// maps the automaton back onto the original stack alphabet.
ConfigAutomaton reachable_configs(const Pda& pda, const Config& c0);

/// Finite-stack membership; unknown controls are never members.
bool member(const ConfigAutomaton& a, const Config& c);

/// { truncate(c, k) : c accepted }, sorted. k above 12 is a BudgetError.
std::vector<TruncatedConfig> reachable_truncations(const ConfigAutomaton& a, std::size_t k);

/// A shortest accepted configuration whose stack starts with t.prefix.
std::optional<Config> completion(const ConfigAutomaton& a, const TruncatedConfig& t);

/// True when the accepted set is closed under one-step successors of `pda`
/// (the automaton must be over the pda's own alphabet). On failure `why`
/// names the offending rule.
bool is_post_closed(const Pda& pda, const ConfigAutomaton& a, std::string* why = nullptr);

}  // namespace pdreg
