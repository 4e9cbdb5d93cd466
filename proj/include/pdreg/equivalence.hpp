#pragma once

// Eq-levels between pda configurations with bisimulation certificates, the
// pda-vs-finite bisimilarity decider, and the quantity C behind the bound B.

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "pdreg/game.hpp"
#include "pdreg/lts.hpp"
#include "pdreg/reachability.hpp"
#include "pdreg/systems.hpp"
#include "pdreg/transformers.hpp"

namespace pdreg {

/// Cuts a stack below the first position that no run can ever expose:
/// if {q} =σ[0..i)=> ∅ then qσ behaves exactly like qσ[0..i).
class DeadSuffixPruner {
 public:
  explicit DeadSuffixPruner(const Pda& pda) : table_(compute_transformers(pda)) {}
  explicit DeadSuffixPruner(TransformerTable table) : table_(std::move(table)) {}

  Config prune(const Config& c) const;
  const TransformerTable& table() const { return table_; }

 private:
  TransformerTable table_;
};

/// A finite relation over pruned configurations that covers itself up to
/// identity and pruning of successors.
struct BisimCertificate {
  std::vector<std::pair<Config, Config>> pairs;
};

struct CertificateCheck {
  bool ok = false;
  std::string reason;
};

/// Independent check: recomputes pruning from the pda and verifies that the
/// relation is self-covering and relates prune(c1) and prune(c2).
CertificateCheck check_bisim_certificate(const Pda& pda, const BisimCertificate& cert, const Config& c1,
                                         const Config& c2);

struct ConfigEqLevel {
  EqLevelResult level;
  std::optional<Strategy<Config>> strategy;       // with Finite
  std::optional<BisimCertificate> certificate;  // with Omega
};

/// One analysis session over a pda: the memoized game, the pruner and the
/// certificate search. Not thread-safe.
class EquivalenceEngine {
 public:
  explicit EquivalenceEngine(const Pda& pda);
  EquivalenceEngine(const EquivalenceEngine&) = delete;
  EquivalenceEngine& operator=(const EquivalenceEngine&) = delete;

  const Pda& pda() const { return *pda_; }
  const PdaSystem& system() const { return system_; }
  StratifiedGame<PdaSystem>& game() { return game_; }
  const DeadSuffixPruner& pruner() const { return pruner_; }

  /// Finite(k) with a strategy when k < cutoff; otherwise Omega with a
  /// certificate if one is found within omega_budget pairs, else AtLeast.
  ConfigEqLevel eqlevel(const Config& c1, const Config& c2, int cutoff, std::size_t omega_budget,
                        bool with_strategy = true);

  /// Certificate search alone (no game up to cutoff).
  std::optional<BisimCertificate> certify(const Config& c1, const Config& c2, int filter_depth,
                                          std::size_t omega_budget);

 private:
  const Pda* pda_;
  PdaSystem system_;
  StratifiedGame<PdaSystem> game_;
  DeadSuffixPruner pruner_;
};

ConfigEqLevel eqlevel_configs(const Pda& pda, const Config& c1, const Config& c2, int cutoff = 64,
                              std::size_t omega_budget = 512);

/// Evidence for s ~ f: an automaton over the pda's stack alphabet whose
/// accepted set contains s and is closed under moves, and for every k-prefix
/// of an accepted configuration a state of F it is ~_k to (k = |F|).
struct FiniteMatchCertificate {
  ConfigAutomaton reach;
  std::size_t depth = 0;
  std::vector<std::pair<TruncatedConfig, FiniteState>> matches;
};

struct FiniteBisimResult {
  bool bisimilar = false;
  std::optional<FiniteMatchCertificate> certificate;
  /// A reachable configuration ~_k to no state of F.
  std::optional<Config> counterexample;
  /// When c is not ~_k f: the distinguishing strategy in the disjoint union.
  std::optional<Strategy<PdaFiniteUnion::State>> strategy;
};

/// c ~ f iff c ~_k f and every configuration reachable from c is ~_k some
/// state of F, with k = |F|. Throws BudgetError when |F| > 12.
FiniteBisimResult bisim_pda_vs_finite(const Pda& pda, const Config& c, const FiniteLts& lts, FiniteState f);
/// Same, reusing an automaton of the configurations reachable from c.
FiniteBisimResult bisim_pda_vs_finite(const Pda& pda, const ConfigAutomaton& reach, const Config& c,
                                 const FiniteLts& lts, FiniteState f);

CertificateCheck check_finite_match_certificate(const Pda& pda, const Config& c, const FiniteLts& lts, FiniteState f,
                                          const FiniteMatchCertificate& cert);

struct CValue {
  std::uint64_t value = 0;
  bool exact = true;
  int cutoff = 0;
  std::size_t region_size = 0;
  bool region_complete = true;
  std::size_t pairs = 0;
  std::size_t omega_pairs = 0;
  std::size_t at_least_pairs = 0;
};

struct COptions {
  int cutoff = 64;
  std::size_t omega_budget = 512;
  std::size_t region_limit = 4096;
  bool parallel = true;
};

/// C = max of the finite eq-levels between region(qXβ^ω, E′) and
/// { pβ^ω : p in L } (0 when there are none). Exact unless some pair stayed
/// AtLeast(cutoff) or the region exceeded region_limit.
CValue compute_C(const Pda& pda, ControlId q, SymbolId x, const std::vector<SymbolId>& beta, const ControlSet& L,
                 std::uint64_t e_prime, const COptions& options = {});

}  // namespace pdreg
