#pragma once

// Stack segments as state transformers: p -α-> p' holds when pα can empty its
// stack ending in control p'; K =α=> K' lifts this to sets of controls.

#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pdreg/pda.hpp"

namespace pdreg {

class ControlSet {
 public:
  ControlSet() = default;
  explicit ControlSet(std::size_t universe) : bits_(universe, false) {}
  static ControlSet singleton(std::size_t universe, ControlId p) {
    ControlSet s(universe);
    s.insert(p);
    return s;
  }

  std::size_t universe() const { return bits_.size(); }
  bool contains(ControlId p) const { return p < bits_.size() && bits_[p]; }
  void insert(ControlId p) { bits_.at(p) = true; }
  bool empty() const;
  std::size_t size() const;
  std::vector<ControlId> members() const;
  bool subset_of(const ControlSet& other) const;

  auto operator<=>(const ControlSet&) const = default;

 private:
  std::vector<bool> bits_;
};

std::string format_control_set(const Pda& pda, const ControlSet& k);

inline constexpr std::uint64_t kUnbounded = std::numeric_limits<std::uint64_t>::max();

/// All triples p -X-> p' of a pda together with the length of the shortest
/// emptying derivation of each, and E = the maximum of those lengths.
class TransformerTable {
 public:
  struct Triple {
    ControlId from;
    SymbolId symbol;
    ControlId to;
    std::uint64_t steps;
  };

  TransformerTable() = default;
  TransformerTable(std::size_t controls, std::size_t symbols);

  std::size_t num_controls() const { return controls_; }
  std::size_t num_symbols() const { return symbols_; }
  bool relates(ControlId p, SymbolId x, ControlId q) const { return dist(p, x, q) != kUnbounded; }
  /// Shortest emptying derivation pX ->* q, or kUnbounded.
  std::uint64_t dist(ControlId p, SymbolId x, ControlId q) const { return dist_[index(p, x, q)]; }
  std::uint64_t bound() const { return bound_; }
  std::vector<Triple> triples() const;

  ControlSet apply(const ControlSet& k, SymbolId x) const;

 private:
  friend TransformerTable compute_transformers(const Pda& pda);
  std::size_t index(ControlId p, SymbolId x, ControlId q) const { return (p * symbols_ + x) * controls_ + q; }

  std::size_t controls_ = 0;
  std::size_t symbols_ = 0;
  std::vector<std::uint64_t> dist_;
  std::uint64_t bound_ = 0;
};

/// Least fixpoint of: pA -a-> qα and q -α-> q' give p -A-> q', computed with
/// shortest derivation lengths (saturating arithmetic).
TransformerTable compute_transformers(const Pda& pda);

/// K' = { p' | p in K, p -α-> p' }, symbol by symbol from the top of α.
/// Throws InputError for symbols outside the table's alphabet.
ControlSet apply_set_transformer(const TransformerTable& table, const ControlSet& k,
                                 std::span<const SymbolId> alpha);

/// {q} =X=> K_0 =β=> K_1 =β=> ... up to the first repetition K_j = K_b, b < j.
struct KiSequence {
  std::vector<ControlSet> sets;  // K_0 .. K_j
  std::size_t b = 0;
  std::size_t ell = 0;  // j - b
  ControlSet loop;      // L = K_b = K_{b+ell}
};

/// Throws InputError when β is empty.
KiSequence ki_sequence(const TransformerTable& table, ControlId q, SymbolId x, std::span<const SymbolId> beta);

/// Saturating helpers for bound arithmetic.
std::uint64_t sat_add(std::uint64_t a, std::uint64_t b);
std::uint64_t sat_mul(std::uint64_t a, std::uint64_t b);

}  // namespace pdreg
