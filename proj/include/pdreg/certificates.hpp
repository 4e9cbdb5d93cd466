#pragma once

// Self-contained certificate documents (JSON) and their standalone checker.
// Every document embeds the pda (and LTS) text so it can be checked alone.

#include "json.hpp"

#include "pdreg/equivalence.hpp"
#include "pdreg/regularity.hpp"

namespace pdreg {

using Json = nlohmann::ordered_json;

Json automaton_to_json(const Pda& pda, const ConfigAutomaton& a);
ConfigAutomaton automaton_from_json(const Pda& pda, const Json& j);

Json strategy_to_json(const Pda& pda, const Strategy<Config>& s);
Strategy<Config> strategy_from_json(const Pda& pda, const Json& j);

/// Strategies in the disjoint union of a pda and a finite LTS; finite states
/// are written as "@name".
Json union_strategy_to_json(const Pda& pda, const FiniteLts& lts, const Strategy<PdaFiniteUnion::State>& s);
Strategy<PdaFiniteUnion::State> union_strategy_from_json(const Pda& pda, const FiniteLts& lts, const Json& j);

Json candidate_to_json(const Pda& pda, const LoopCandidate& c);
LoopCandidate candidate_from_json(const Pda& pda, const Json& j);

Json bisimulation_certificate(const Pda& pda, const Config& init, const Config& left, const Config& right,
                              const BisimCertificate& cert);
Json distinction_certificate(const Pda& pda, const Config& init, const Config& left, const Config& right,
                             const Strategy<Config>& strategy);
Json finite_match_certificate(const Pda& pda, const Config& c, const FiniteLts& lts, FiniteState f,
                        const FiniteMatchCertificate& cert);
Json union_distinction_certificate(const Pda& pda, const Config& c, const FiniteLts& lts, FiniteState f,
                                   const Strategy<PdaFiniteUnion::State>& strategy);
Json witness_certificate(const Pda& pda, const Config& c_in, const Witness& w, const AnalysisConfig& config);

/// Dispatches on the "certificate" field. Malformed documents are reported
/// as invalid, never thrown.
CertificateCheck check_certificate(const Json& doc);

}  // namespace pdreg
