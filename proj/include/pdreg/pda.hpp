#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "pdreg/errors.hpp"

namespace pdreg {

using ControlId = std::uint32_t;
using SymbolId = std::uint32_t;
using ActionId = std::uint32_t;

/// A stack content that is either a finite word or an ultimately periodic
/// infinite word prefix·period^ω. Instances are always canonical: the period
/// is primitive and the prefix is as short as possible, so two StackWords
/// compare equal iff they denote the same (finite or infinite) word.
class StackWord {
 public:
  StackWord() = default;

  static StackWord finite(std::vector<SymbolId> word);
  /// Throws InputError when `period` is empty.
  static StackWord periodic(std::vector<SymbolId> prefix, std::vector<SymbolId> period);

  bool is_finite() const { return period_.empty(); }
  bool empty() const { return prefix_.empty() && period_.empty(); }
  const std::vector<SymbolId>& prefix() const { return prefix_; }
  const std::vector<SymbolId>& period() const { return period_; }

  /// Number of symbols, or nullopt for infinite words.
  std::optional<std::size_t> length() const;
  SymbolId top() const { return at(0); }
  /// The i-th symbol from the top. For finite words requires i < length().
  SymbolId at(std::size_t i) const;
  /// The first min(n, length) symbols.
  std::vector<SymbolId> take(std::size_t n) const;

  StackWord popped() const;
  StackWord pushed(std::span<const SymbolId> word) const;

  auto operator<=>(const StackWord&) const = default;

 private:
  std::vector<SymbolId> prefix_;
  std::vector<SymbolId> period_;
};

/// An arbitrary (not necessarily canonical) representation prefix·period^ω;
/// an empty period denotes the finite word `prefix`.
struct RawStackWord {
  std::vector<SymbolId> prefix;
  std::vector<SymbolId> period;
  bool infinite = false;
};

StackWord canonicalize(const RawStackWord& raw);
StackWord canonicalize(const StackWord& word);

struct Config {
  ControlId control = 0;
  StackWord stack;

  auto operator<=>(const Config&) const = default;
};

/// Control state plus the first min(k, |stack|) stack symbols.
struct TruncatedConfig {
  ControlId control = 0;
  std::vector<SymbolId> prefix;

  auto operator<=>(const TruncatedConfig&) const = default;
};

TruncatedConfig truncate(const Config& c, std::size_t k);

/// pX -a-> q·push
struct Rule {
  ControlId from = 0;
  SymbolId top = 0;
  ActionId action = 0;
  ControlId to = 0;
  std::vector<SymbolId> push;

  auto operator<=>(const Rule&) const = default;
};

class Pda {
 public:
  Pda() = default;
  /// Validates that all sets are nonempty with unique names, that every rule
  /// refers to declared components, and that no rule is duplicated.
  Pda(std::vector<std::string> controls, std::vector<std::string> stack_symbols,
      std::vector<std::string> actions, std::vector<Rule> rules);

  std::size_t num_controls() const { return controls_.size(); }
  std::size_t num_symbols() const { return symbols_.size(); }
  std::size_t num_actions() const { return actions_.size(); }

  const std::vector<std::string>& control_names() const { return controls_; }
  const std::vector<std::string>& symbol_names() const { return symbols_; }
  const std::vector<std::string>& action_names() const { return actions_; }
  const std::string& control_name(ControlId p) const { return controls_.at(p); }
  const std::string& symbol_name(SymbolId x) const { return symbols_.at(x); }
  const std::string& action_name(ActionId a) const { return actions_.at(a); }

  std::optional<ControlId> find_control(std::string_view name) const;
  std::optional<SymbolId> find_symbol(std::string_view name) const;
  std::optional<ActionId> find_action(std::string_view name) const;

  const std::vector<Rule>& rules() const { return rules_; }
  /// Indices into rules() of the rules with left-hand side pX.
  std::span<const std::size_t> rules_for(ControlId p, SymbolId x) const;
  /// Longest right-hand side over all rules.
  std::size_t max_push() const;

  /// Throws InputError when `c` mentions undeclared controls or symbols.
  void validate(const Config& c) const;

  bool operator==(const Pda& other) const;

 private:
  std::vector<std::string> controls_;
  std::vector<std::string> symbols_;
  std::vector<std::string> actions_;
  std::vector<Rule> rules_;
  std::vector<std::vector<std::size_t>> index_;  // control * |Γ| + symbol
};

struct Step {
  ActionId action;
  std::size_t rule;
  Config target;
};

/// One-step successors pXσ -a-> qασ, sorted by (action, target). Empty stacks
/// are deadlocks.
std::vector<Step> step(const Pda& pda, const Config& c);

/// Rewrites every rule so that its right-hand side has at most two symbols.
/// Each new stack symbol is a "cell" holding a short word of original symbols;
/// rules act on the word in the top cell. The first num_symbols() symbols of
/// the result are the original symbols (same ids and names).
struct NormalizedPda {
  Pda pda;
  /// For every symbol of `pda`, the original word it stands for.
  std::vector<std::vector<SymbolId>> expansion;
  /// True when the input already had |rhs| <= 2 and was returned unchanged.
  bool identity = true;

  Config to_normalized(const Config& original) const;
  Config to_original(const Config& normalized) const;
};

NormalizedPda normalize_rules(const Pda& pda);

// Text formats.

struct PdaFile {
  Pda pda;
  Config init;
};

/// Line-oriented grammar:
///   pda
///   controls: p q
///   alphabet: a b
///   stack: X A
///   init: p X A
///   p X a -> q A X      (use `-> q .` for an empty right-hand side)
/// `#` starts a comment. Errors carry "line L, column C".
PdaFile parse_pda(std::string_view text);
std::string format_pda(const Pda& pda, const Config& init);

/// `p [X A A]` or `p [X] (A B)^w`
std::string format_config(const Pda& pda, const Config& c);
/// `p[X A A]` or `p[X](A B)w`
std::string config_literal(const Pda& pda, const Config& c);
/// Accepts both of the above spellings.
Config parse_config(const Pda& pda, std::string_view text);

std::string format_word(const Pda& pda, std::span<const SymbolId> word);

}  // namespace pdreg

template <>
struct std::hash<pdreg::StackWord> {
  std::size_t operator()(const pdreg::StackWord& w) const noexcept;
};

template <>
struct std::hash<pdreg::Config> {
  std::size_t operator()(const pdreg::Config& c) const noexcept;
};
