#pragma once

// Regularity of pda configurations: a positive semidecision (find a bisimilar
// finite LTS) and a negative one (loop-paths with the bound B), interleaved.

#include <cstdint>
#include <deque>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "pdreg/equivalence.hpp"

namespace pdreg {

struct AnalysisConfig {
  int cutoff = 64;
  std::size_t omega_budget = 512;
  std::size_t truncation_max = 8;
  std::size_t path_budget = 10000;
  std::size_t candidate_budget = 200;
  std::size_t region_limit = 4096;
  bool parallel = true;

  /// Throws InputError when a budget is zero or truncation_max exceeds 12.
  void validate() const;
};

/// c_in -v-> qXγ and qX -w-> qXβ (the loop never pops the X it starts from).
struct LoopCandidate {
  std::vector<std::size_t> prefix_rules;  // v, as rule indices
  std::vector<std::size_t> loop_rules;    // w, as rule indices
  ControlId q = 0;
  SymbolId x = 0;
  std::vector<SymbolId> beta;
  std::vector<SymbolId> gamma;
  bool from_stamp = false;
  std::size_t start = 0;  // path positions i < j of the loop-pair
  std::size_t end = 0;
  std::size_t stamp_depth = 0;  // d1 of the repeated stamp

  bool operator==(const LoopCandidate&) const = default;
};

/// Replays v and w; throws InputError describing the first mismatch.
void validate_candidate(const Pda& pda, const Config& c_in, const LoopCandidate& cand);

struct BoundB {
  std::uint64_t B = 0;
  std::uint64_t b = 0;
  std::uint64_t ell = 0;
  ControlSet L;
  std::uint64_t E = 0;
  std::uint64_t e_prime = 0;
  CValue C;
};

/// B = 1 + C + b + ℓ with E′ = |Xβ^(ℓ+b)|·E.
BoundB compute_B(const Pda& pda, ControlId q, SymbolId x, const std::vector<SymbolId>& beta,
                 const AnalysisConfig& config = {});

struct Witness {
  LoopCandidate candidate;
  BoundB bound;
  Config pumped;  // qXβ^Bγ
  Config limit;   // qXβ^ω
  int level = 0;
  Strategy<Config> strategy;
  /// eqlevel(qXβ^(B+jℓ)γ, qXβ^ω) for j = 0, 1, 2, keyed by the exponent.
  std::vector<std::pair<std::uint64_t, EqLevelResult>> corroboration;
  bool certified = false;

  bool corroborated() const;
};

struct WitnessResult {
  enum class Status { Verified, Refuted, Exhausted };
  Status status = Status::Exhausted;
  BoundB bound;
  EqLevelResult level;
  std::optional<Witness> witness;
  std::optional<BisimCertificate> refutation;
};

std::string to_string(WitnessResult::Status s);

WitnessResult verify_witness(const Pda& pda, const Config& c_in, const LoopCandidate& cand,
                             const AnalysisConfig& config = {});

/// Independent re-check of a witness: candidate replay, B recomputed, the
/// configurations rebuilt and the strategy replayed.
CertificateCheck check_witness(const Pda& pda, const Config& c_in, const Witness& w, const AnalysisConfig& config);

struct StairStats {
  std::size_t nodes = 0;
  std::size_t candidates = 0;
  std::size_t stamp_candidates = 0;
  std::size_t long_stairs = 0;  // stairs reaching the stamp-repeat guarantee
  std::size_t max_depth = 0;
  bool exhausted = false;
};

/// Breadth-first exploration of paths from c_in (no configuration repeats on
/// a path), yielding loop-pair candidates level by level: stamp-derived ones
/// first, then lexicographically by (v, w).
class StairSearch {
 public:
  StairSearch(const Pda& pda, Config c_in, std::size_t path_budget);

  std::optional<LoopCandidate> next();
  const StairStats& stats() const { return stats_; }

 private:
  struct Node {
    Config config;
    std::size_t parent;
    std::size_t rule;
    std::size_t depth;
  };

  void expand_level();
  void candidates_at(std::size_t node, std::vector<LoopCandidate>& out);
  std::vector<std::size_t> path_to(std::size_t node) const;

  const Pda* pda_;
  TransformerTable table_;
  std::vector<Node> nodes_;
  std::vector<std::size_t> frontier_;
  std::deque<LoopCandidate> ready_;
  std::set<std::tuple<ControlId, SymbolId, std::vector<SymbolId>, std::vector<SymbolId>>> seen_;
  std::size_t budget_;
  std::size_t stamp_guarantee_;
  StairStats stats_;
};

struct PositiveResult {
  FiniteLts lts;
  FiniteState state = 0;
  FiniteMatchCertificate certificate;
  std::size_t level = 0;
};

struct PositiveStats {
  std::size_t levels = 0;
  std::vector<std::size_t> class_counts;  // per level 1, 2, ...
  std::size_t candidates_checked = 0;
  bool exhausted = false;
};

/// Quotient stabilization over reachable truncations, one level per step();
/// every proposed LTS is confirmed with the pda-vs-finite decider.
class PositiveSearch {
 public:
  PositiveSearch(const Pda& pda, Config c_in, const AnalysisConfig& config);

  /// Runs the next level. Returns true when finished (found or exhausted).
  bool step();
  const std::optional<PositiveResult>& result() const { return result_; }
  const PositiveStats& stats() const { return stats_; }

 private:
  struct Level {
    std::vector<TruncatedConfig> truncations;
    std::vector<Config> completions;
    std::vector<std::size_t> classes;
    std::size_t count = 0;
  };
  Level compute_level(std::size_t n) const;
  std::optional<PositiveResult> propose(const Level& fine, std::size_t n) const;

  const Pda* pda_;
  Config c_in_;
  AnalysisConfig config_;
  ConfigAutomaton reach_;
  std::optional<Level> previous_;
  std::size_t n_ = 1;
  std::optional<PositiveResult> result_;
  PositiveStats stats_;
};

std::optional<PositiveResult> positive_semidecide(const Pda& pda, const Config& c_in,
                                                  const AnalysisConfig& config = {});

struct Verdict {
  enum class Kind { Regular, NonRegular, Unknown };
  Kind kind = Kind::Unknown;
  std::optional<PositiveResult> regular;
  std::optional<Witness> witness;
  bool certified = false;  // NonRegular only
  std::string winner;      // "positive", "negative" or "none"
  PositiveStats positive;
  StairStats stairs;
  std::size_t candidates_tried = 0;
  std::size_t refuted = 0;
  std::size_t exhausted_candidates = 0;
};

std::string to_string(Verdict::Kind k);

/// Round-robin: one positive level per 25 candidates. A certified answer
/// from either side ends the run; a witness modulo cutoff is reported only
/// when nothing certified turns up within the budgets.
Verdict decide_regularity(const Pda& pda, const Config& c_in, const AnalysisConfig& config = {});

}  // namespace pdreg
