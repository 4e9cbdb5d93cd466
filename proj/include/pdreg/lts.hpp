#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "pdreg/pda.hpp"

namespace pdreg {

using FiniteState = std::uint32_t;

/// An explicit finite labelled transition system.
class FiniteLts {
 public:
  struct Transition {
    FiniteState source;
    ActionId action;
    FiniteState target;

    auto operator<=>(const Transition&) const = default;
  };

  FiniteLts() = default;
  /// Throws InputError on duplicate names or transitions mentioning
  /// undeclared states/actions. Duplicate transitions are merged.
  FiniteLts(std::vector<std::string> states, std::vector<std::string> actions,
            std::vector<Transition> transitions);

  std::size_t num_states() const { return states_.size(); }
  std::size_t num_actions() const { return actions_.size(); }
  const std::vector<std::string>& state_names() const { return states_; }
  const std::vector<std::string>& action_names() const { return actions_; }
  const std::string& state_name(FiniteState s) const { return states_.at(s); }
  const std::string& action_name(ActionId a) const { return actions_.at(a); }
  std::optional<FiniteState> find_state(std::string_view name) const;
  std::optional<ActionId> find_action(std::string_view name) const;

  /// All transitions, sorted by (source, action, target).
  const std::vector<Transition>& transitions() const { return transitions_; }
  /// Outgoing transitions of `s`, sorted by (action, target).
  std::span<const Transition> out(FiniteState s) const;

  bool operator==(const FiniteLts&) const = default;

 private:
  std::vector<std::string> states_;
  std::vector<std::string> actions_;
  std::vector<Transition> transitions_;
  std::vector<std::size_t> offsets_;
};

/// Grammar:
///   lts
///   states: s0 s1 ...
///   actions: a b ...
///   trans: s0 a s1        (one transition per line, any number of lines)
FiniteLts parse_lts(std::string_view text);
std::string format_lts(const FiniteLts& lts);

struct Quotient {
  FiniteLts lts;
  /// class_of[s] is the quotient state holding original state s.
  std::vector<FiniteState> class_of;
};

/// Bisimilarity quotient by naive partition refinement. Classes are numbered
/// by their smallest member and named c0, c1, ...
Quotient quotient_finite(const FiniteLts& lts);

}  // namespace pdreg
