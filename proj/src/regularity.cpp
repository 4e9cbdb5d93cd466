#include "pdreg/regularity.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

#include "pdreg/kernels.hpp"

namespace pdreg {

void AnalysisConfig::validate() const {
  if (cutoff < 1) throw InputError("cutoff must be at least 1");
  if (omega_budget < 1 || path_budget < 1 || candidate_budget < 1 || region_limit < 1)
    throw InputError("budgets must be at least 1");
  if (truncation_max < 1 || truncation_max > 12) throw InputError("truncation_max must be between 1 and 12");
}

// ------------------------------------------------------------- candidates

namespace {

Config apply_rule(const Pda& pda, const Config& c, std::size_t idx, const char* what, std::size_t pos) {
  if (idx >= pda.rules().size())
    throw InputError(std::string(what) + " step " + std::to_string(pos) + ": no rule " + std::to_string(idx));
  const Rule& r = pda.rules()[idx];
  if (c.stack.empty() || r.from != c.control || r.top != c.stack.top())
    throw InputError(std::string(what) + " step " + std::to_string(pos) + ": rule " + std::to_string(idx) +
                     " does not apply to " + format_config(pda, c));
  return Config{r.to, c.stack.popped().pushed(r.push)};
}

std::vector<SymbolId> concat(std::initializer_list<const std::vector<SymbolId>*> parts) {
  std::vector<SymbolId> out;
  for (const auto* p : parts) out.insert(out.end(), p->begin(), p->end());
  return out;
}

std::vector<SymbolId> pumped_stack(SymbolId x, const std::vector<SymbolId>& beta, std::uint64_t exponent,
                                   const std::vector<SymbolId>& gamma) {
  std::vector<SymbolId> w{x};
  for (std::uint64_t i = 0; i < exponent; ++i) w.insert(w.end(), beta.begin(), beta.end());
  w.insert(w.end(), gamma.begin(), gamma.end());
  return w;
}

}  // namespace

void validate_candidate(const Pda& pda, const Config& c_in, const LoopCandidate& cand) {
  pda.validate(c_in);
  if (!c_in.stack.is_finite()) throw InputError("the initial configuration must have a finite stack");
  if (cand.beta.empty()) throw InputError("the loop word β must be nonempty");
  Config cur = c_in;
  for (std::size_t i = 0; i < cand.prefix_rules.size(); ++i)
    cur = apply_rule(pda, cur, cand.prefix_rules[i], "prefix", i);
  const std::vector<SymbolId> x{cand.x};
  const Config want{cand.q, StackWord::finite(concat({&x, &cand.gamma}))};
  pda.validate(want);
  if (!(cur == want))
    throw InputError("prefix ends in " + format_config(pda, cur) + ", expected " + format_config(pda, want));
  cur = Config{cand.q, StackWord::finite(x)};
  for (std::size_t i = 0; i < cand.loop_rules.size(); ++i) {
    cur = apply_rule(pda, cur, cand.loop_rules[i], "loop", i);
    if (cur.stack.empty()) throw InputError("loop step " + std::to_string(i) + " pops the starting symbol");
  }
  const Config loop_end{cand.q, StackWord::finite(concat({&x, &cand.beta}))};
  if (!(cur == loop_end))
    throw InputError("loop ends in " + format_config(pda, cur) + ", expected " + format_config(pda, loop_end));
}

// ----------------------------------------------------------------- bound B

BoundB compute_B(const Pda& pda, ControlId q, SymbolId x, const std::vector<SymbolId>& beta,
                 const AnalysisConfig& config) {
  const TransformerTable table = compute_transformers(pda);
  const KiSequence ks = ki_sequence(table, q, x, beta);
  BoundB out;
  out.b = ks.b;
  out.ell = ks.ell;
  out.L = ks.loop;
  out.E = table.bound();
  out.e_prime = sat_mul(sat_add(1, sat_mul(beta.size(), out.ell + out.b)), out.E);
  out.C = compute_C(pda, q, x, beta, out.L, out.e_prime,
                    COptions{config.cutoff, config.omega_budget, config.region_limit, config.parallel});
  out.B = sat_add(sat_add(1, out.C.value), out.b + out.ell);
  return out;
}

// ----------------------------------------------------------------- witness

bool Witness::corroborated() const {
  if (corroboration.size() != 3) return false;
  return std::all_of(corroboration.begin(), corroboration.end(), [](const auto& e) {
    return e.second.is_finite() && static_cast<std::uint64_t>(e.second.value) >= e.first;
  });
}

std::string to_string(WitnessResult::Status s) {
  switch (s) {
    case WitnessResult::Status::Verified: return "Verified";
    case WitnessResult::Status::Refuted: return "Refuted";
    case WitnessResult::Status::Exhausted: return "Exhausted";
  }
  return {};
}

namespace {

constexpr std::uint64_t kMaxPump = 4096;

WitnessResult verify_with_bound(const Pda& pda, const LoopCandidate& cand, const AnalysisConfig& config,
                                BoundB bound) {
  WitnessResult out;
  out.bound = std::move(bound);
  const std::uint64_t B = out.bound.B;
  if (B > kMaxPump) {
    out.level = EqLevelResult::at_least(config.cutoff);
    return out;
  }
  EquivalenceEngine engine(pda);
  const Config limit{cand.q, StackWord::periodic({cand.x}, cand.beta)};
  const Config pumped{cand.q, StackWord::finite(pumped_stack(cand.x, cand.beta, B, cand.gamma))};
  auto lvl = engine.eqlevel(pumped, limit, config.cutoff, config.omega_budget, true);
  out.level = lvl.level;
  if (lvl.level.kind == EqLevelResult::Kind::Omega) {
    out.status = WitnessResult::Status::Refuted;
    out.refutation = std::move(lvl.certificate);
    return out;
  }
  if (!lvl.level.is_finite()) return out;
  Witness w;
  w.candidate = cand;
  w.bound = out.bound;
  w.pumped = pumped;
  w.limit = limit;
  w.level = lvl.level.value;
  w.strategy = std::move(*lvl.strategy);
  w.corroboration.emplace_back(B, lvl.level);
  for (std::uint64_t j = 1; j <= 2; ++j) {
    const std::uint64_t e = B + j * out.bound.ell;
    const Config c{cand.q, StackWord::finite(pumped_stack(cand.x, cand.beta, e, cand.gamma))};
    w.corroboration.emplace_back(e, engine.game().eqlevel(c, limit, config.cutoff));
  }
  w.certified = out.bound.C.exact && w.corroborated();
  out.status = WitnessResult::Status::Verified;
  out.witness = std::move(w);
  return out;
}

}  // namespace

WitnessResult verify_witness(const Pda& pda, const Config& c_in, const LoopCandidate& cand,
                             const AnalysisConfig& config) {
  validate_candidate(pda, c_in, cand);
  return verify_with_bound(pda, cand, config, compute_B(pda, cand.q, cand.x, cand.beta, config));
}

CertificateCheck check_witness(const Pda& pda, const Config& c_in, const Witness& w, const AnalysisConfig& config) {
  try {
    validate_candidate(pda, c_in, w.candidate);
  } catch (const InputError& e) {
    return {false, e.what()};
  }
  const auto& cand = w.candidate;
  const BoundB bound = compute_B(pda, cand.q, cand.x, cand.beta, config);
  if (bound.B != w.bound.B || bound.b != w.bound.b || bound.ell != w.bound.ell || !(bound.L == w.bound.L))
    return {false, "recomputed bound B differs"};
  const Config limit{cand.q, StackWord::periodic({cand.x}, cand.beta)};
  const Config pumped{cand.q, StackWord::finite(pumped_stack(cand.x, cand.beta, bound.B, cand.gamma))};
  if (!(w.pumped == pumped) || !(w.limit == limit)) return {false, "witness configurations do not match B"};
  if (w.strategy.nodes.empty()) return {false, "empty strategy"};
  const auto& root = w.strategy.nodes.at(w.strategy.root);
  if (!(root.left == pumped) || !(root.right == limit)) return {false, "strategy is for another pair"};
  const PdaSystem sys(pda);
  const auto replay = check_strategy(sys, w.strategy);
  if (!replay.ok) return {false, "strategy replay failed: " + replay.reason};
  if (replay.depth != w.level + 1) return {false, "strategy depth does not match the level"};
  StratifiedGame<PdaSystem> game(sys);
  if (!game.bounded_bisim(pumped, limit, w.level)) return {false, "the pair differs below the claimed level"};
  if (w.corroboration.size() != 3) return {false, "missing corroborating levels"};
  for (std::size_t j = 0; j < 3; ++j) {
    const std::uint64_t e = bound.B + j * bound.ell;
    if (w.corroboration[j].first != e) return {false, "corroboration exponents do not follow B + jℓ"};
    const Config c{cand.q, StackWord::finite(pumped_stack(cand.x, cand.beta, e, cand.gamma))};
    if (!(game.eqlevel(c, limit, config.cutoff) == w.corroboration[j].second))
      return {false, "corroborating level at exponent " + std::to_string(e) + " differs"};
  }
  if (w.certified && !(bound.C.exact && w.corroborated()))
    return {false, "witness claims certification without exact C and corroboration"};
  return {true, {}};
}

// ------------------------------------------------------------ stair search

StairSearch::StairSearch(const Pda& pda, Config c_in, std::size_t path_budget)
    : pda_(&pda), table_(compute_transformers(pda)), budget_(path_budget) {
  pda.validate(c_in);
  if (!c_in.stack.is_finite()) throw InputError("the initial configuration must have a finite stack");
  nodes_.push_back(Node{std::move(c_in), 0, 0, 0});
  frontier_.push_back(0);
  stats_.nodes = 1;
  const std::size_t nq = pda.num_controls();
  stamp_guarantee_ = nq >= 40 ? static_cast<std::size_t>(-1)
                              : static_cast<std::size_t>(sat_mul(nq * pda.num_symbols(), std::uint64_t{1} << nq));
}

std::vector<std::size_t> StairSearch::path_to(std::size_t node) const {
  std::vector<std::size_t> path;
  for (std::size_t cur = node;; cur = nodes_[cur].parent) {
    path.push_back(cur);
    if (cur == 0) break;
  }
  std::reverse(path.begin(), path.end());
  return path;
}

std::optional<LoopCandidate> StairSearch::next() {
  while (ready_.empty() && !stats_.exhausted) expand_level();
  if (ready_.empty()) return std::nullopt;
  LoopCandidate c = std::move(ready_.front());
  ready_.pop_front();
  return c;
}

void StairSearch::expand_level() {
  std::vector<std::size_t> next;
  std::vector<LoopCandidate> found;
  bool out_of_budget = false;
  for (std::size_t id : frontier_) {
    if (out_of_budget) break;
    const auto path = path_to(id);
    std::vector<Config> targets;
    for (auto& s : step(*pda_, nodes_[id].config)) {
      if (std::find(targets.begin(), targets.end(), s.target) != targets.end()) continue;
      targets.push_back(s.target);
      bool revisit = false;
      for (std::size_t p : path) revisit = revisit || nodes_[p].config == s.target;
      if (revisit) continue;
      if (nodes_.size() >= budget_) {
        out_of_budget = true;
        break;
      }
      nodes_.push_back(Node{std::move(s.target), id, s.rule, nodes_[id].depth + 1});
      next.push_back(nodes_.size() - 1);
      candidates_at(nodes_.size() - 1, found);
    }
  }
  stats_.nodes = nodes_.size();
  if (!next.empty()) stats_.max_depth = nodes_[next.back()].depth;
  std::stable_sort(found.begin(), found.end(), [](const LoopCandidate& a, const LoopCandidate& b) {
    if (a.from_stamp != b.from_stamp) return a.from_stamp;
    const auto la = a.prefix_rules.size() + a.loop_rules.size();
    const auto lb = b.prefix_rules.size() + b.loop_rules.size();
    if (la != lb) return la < lb;
    return std::tie(a.prefix_rules, a.loop_rules) < std::tie(b.prefix_rules, b.loop_rules);
  });
  for (auto& c : found) {
    std::vector<SymbolId> g(c.gamma.begin(), c.gamma.begin() + std::min<std::size_t>(4, c.gamma.size()));
    if (!seen_.insert({c.q, c.x, c.beta, std::move(g)}).second) continue;
    ++stats_.candidates;
    if (c.from_stamp) ++stats_.stamp_candidates;
    ready_.push_back(std::move(c));
  }
  frontier_ = std::move(next);
  if (out_of_budget || frontier_.empty()) stats_.exhausted = true;
}

void StairSearch::candidates_at(std::size_t node, std::vector<LoopCandidate>& out) {
  const auto path = path_to(node);
  const std::size_t n = path.size() - 1;
  auto cfg = [&](std::size_t m) -> const Config& { return nodes_[path[m]].config; };
  auto height = [&](std::size_t m) { return *cfg(m).stack.length(); };
  const Config& last = cfg(n);
  if (last.stack.empty()) return;

  auto make = [&](std::size_t i, std::size_t j) {
    LoopCandidate c;
    for (std::size_t m = 1; m <= i; ++m) c.prefix_rules.push_back(nodes_[path[m]].rule);
    for (std::size_t m = i + 1; m <= j; ++m) c.loop_rules.push_back(nodes_[path[m]].rule);
    const auto& si = cfg(i).stack.prefix();
    const auto& sj = cfg(j).stack.prefix();
    c.q = cfg(i).control;
    c.x = si[0];
    c.gamma.assign(si.begin() + 1, si.end());
    c.beta.assign(sj.begin() + 1, sj.begin() + 1 + static_cast<std::ptrdiff_t>(sj.size() - si.size()));
    c.start = i;
    c.end = j;
    return c;
  };

  // Plain loop-pairs (i, n): the stack never drops below c_i's height.
  std::size_t min_after = height(n);
  for (std::size_t i = n; i-- > 0;) {
    const Config& ci = cfg(i);
    if (!ci.stack.empty() && min_after >= height(i) && height(n) > height(i) && ci.control == last.control &&
        ci.stack.top() == last.stack.top())
      out.push_back(make(i, n));
    min_after = std::min(min_after, height(i));
  }

  // Stair chain ending at n and its stamps.
  std::vector<std::size_t> chain{n};
  std::size_t low = height(n);
  for (std::size_t m = n; m-- > 0;) {
    if (height(m) < low && height(m) > 0) chain.push_back(m);
    low = std::min(low, height(m));
    if (low == 0) break;
  }
  // chain[d] is the stair position at depth d.
  const auto& top_word = last.stack.prefix();
  std::map<std::tuple<ControlId, SymbolId, ControlSet>, std::size_t> stamps;
  ControlSet k = ControlSet::singleton(pda_->num_controls(), last.control);
  std::size_t consumed = 0;
  for (std::size_t d = 0; d < chain.size(); ++d) {
    const Config& c = cfg(chain[d]);
    const std::size_t upto = height(n) - height(chain[d]) + 1;
    for (; consumed < upto; ++consumed) k = table_.apply(k, top_word[consumed]);
    auto [it, fresh] = stamps.try_emplace({c.control, c.stack.top(), k}, d);
    if (!fresh) {
      LoopCandidate cand = make(chain[d], chain[it->second]);
      cand.from_stamp = true;
      cand.stamp_depth = d;
      out.push_back(std::move(cand));
      break;
    }
    if (d + 1 > stamp_guarantee_)
      throw std::logic_error("stamp repetition guarantee violated on a stair of length " + std::to_string(d + 1));
  }
  if (chain.size() > stamp_guarantee_) ++stats_.long_stairs;
}

// ---------------------------------------------------------- positive side

PositiveSearch::PositiveSearch(const Pda& pda, Config c_in, const AnalysisConfig& config)
    : pda_(&pda), c_in_(std::move(c_in)), config_(config) {
  config_.validate();
  reach_ = reachable_configs(pda, c_in_);
}

PositiveSearch::Level PositiveSearch::compute_level(std::size_t n) const {
  Level lvl;
  lvl.truncations = reachable_truncations(reach_, n);
  for (const auto& t : lvl.truncations) lvl.completions.push_back(*completion(reach_, t));
  lvl.classes = partition_bounded(*pda_, lvl.completions, static_cast<int>(n),
                                  config_.parallel ? Exec::Parallel : Exec::Serial);
  for (auto c : lvl.classes) lvl.count = std::max(lvl.count, c + 1);
  return lvl;
}

namespace {

std::optional<std::size_t> find_truncation(const std::vector<TruncatedConfig>& sorted, const TruncatedConfig& t) {
  auto it = std::lower_bound(sorted.begin(), sorted.end(), t);
  if (it == sorted.end() || !(*it == t)) return std::nullopt;
  return static_cast<std::size_t>(it - sorted.begin());
}

}  // namespace

std::optional<PositiveResult> PositiveSearch::propose(const Level& fine, std::size_t n) const {
  std::vector<std::size_t> rep(fine.count, static_cast<std::size_t>(-1));
  for (std::size_t i = 0; i < fine.classes.size(); ++i)
    if (rep[fine.classes[i]] == static_cast<std::size_t>(-1)) rep[fine.classes[i]] = i;
  std::vector<std::string> names;
  for (std::size_t c = 0; c < fine.count; ++c) names.push_back("c" + std::to_string(c));
  std::vector<FiniteLts::Transition> trans;
  const PdaSystem sys(*pda_);
  for (std::size_t c = 0; c < fine.count; ++c) {
    for (const auto& m : sys.successors(fine.completions[rep[c]])) {
      auto idx = find_truncation(fine.truncations, truncate(m.target, n));
      if (!idx) return std::nullopt;
      trans.push_back({static_cast<FiniteState>(c), m.action, static_cast<FiniteState>(fine.classes[*idx])});
    }
  }
  const auto start = find_truncation(fine.truncations, truncate(c_in_, n));
  if (!start) return std::nullopt;
  const Quotient q = quotient_finite(FiniteLts(names, pda_->action_names(), std::move(trans)));
  if (q.lts.num_states() > 12) return std::nullopt;
  const FiniteState f = q.class_of[fine.classes[*start]];
  auto r = bisim_pda_vs_finite(*pda_, reach_, c_in_, q.lts, f);
  if (!r.bisimilar) return std::nullopt;
  return PositiveResult{q.lts, f, std::move(*r.certificate), n};
}

bool PositiveSearch::step() {
  if (result_ || stats_.exhausted) return true;
  if (n_ + 1 > config_.truncation_max) {
    stats_.exhausted = true;
    return true;
  }
  if (!previous_) {
    previous_ = compute_level(n_);
    stats_.class_counts.push_back(previous_->count);
  }
  Level fine = compute_level(n_ + 1);
  stats_.class_counts.push_back(fine.count);
  stats_.levels = n_;
  bool stable = fine.count == previous_->count;
  std::vector<std::size_t> image(fine.count, static_cast<std::size_t>(-1));
  for (std::size_t i = 0; i < fine.truncations.size() && stable; ++i) {
    const auto& t = fine.truncations[i];
    const TruncatedConfig coarse{t.control, std::vector<SymbolId>(t.prefix.begin(),
                                                                  t.prefix.begin() + std::min(t.prefix.size(), n_))};
    auto idx = find_truncation(previous_->truncations, coarse);
    if (!idx) {
      stable = false;
      break;
    }
    auto& slot = image[fine.classes[i]];
    const std::size_t cls = previous_->classes[*idx];
    if (slot == static_cast<std::size_t>(-1)) slot = cls;
    else if (slot != cls) stable = false;
  }
  if (stable) {
    std::vector<std::size_t> sorted = image;
    std::sort(sorted.begin(), sorted.end());
    stable = std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end();
  }
  if (stable) {
    ++stats_.candidates_checked;
    if (auto r = propose(fine, n_ + 1)) {
      r->level = n_;
      result_ = std::move(r);
      return true;
    }
  }
  previous_ = std::move(fine);
  ++n_;
  return false;
}

std::optional<PositiveResult> positive_semidecide(const Pda& pda, const Config& c_in, const AnalysisConfig& config) {
  PositiveSearch search(pda, c_in, config);
  while (!search.step()) {
  }
  return search.result();
}

// ------------------------------------------------------------------ driver

std::string to_string(Verdict::Kind k) {
  switch (k) {
    case Verdict::Kind::Regular: return "Regular";
    case Verdict::Kind::NonRegular: return "NonRegular";
    case Verdict::Kind::Unknown: return "Unknown";
  }
  return {};
}

Verdict decide_regularity(const Pda& pda, const Config& c_in, const AnalysisConfig& config) {
  config.validate();
  pda.validate(c_in);
  if (!c_in.stack.is_finite()) throw InputError("the initial configuration must have a finite stack");
  Verdict v;
  if (c_in.stack.empty()) {
    const FiniteLts dead({"c0"}, pda.action_names(), {});
    auto r = bisim_pda_vs_finite(pda, c_in, dead, 0);
    v.kind = Verdict::Kind::Regular;
    v.regular = PositiveResult{dead, 0, std::move(*r.certificate), 0};
    v.winner = "positive";
    return v;
  }

  PositiveSearch positive(pda, c_in, config);
  StairSearch stairs(pda, c_in, config.path_budget);
  std::map<std::pair<std::pair<ControlId, SymbolId>, std::vector<SymbolId>>, BoundB> bounds;
  bool positive_done = false;
  bool negative_done = false;
  auto finish = [&](Verdict& out) {
    out.positive = positive.stats();
    out.stairs = stairs.stats();
    return out;
  };

  while (!positive_done || !negative_done) {
    if (!positive_done) {
      positive_done = positive.step();
      if (positive.result()) {
        v.kind = Verdict::Kind::Regular;
        v.regular = positive.result();
        v.winner = "positive";
        return finish(v);
      }
    }
    for (int i = 0; i < 25 && !negative_done; ++i) {
      if (v.candidates_tried >= config.candidate_budget) {
        negative_done = true;
        break;
      }
      auto cand = stairs.next();
      if (!cand) {
        negative_done = true;
        break;
      }
      ++v.candidates_tried;
      validate_candidate(pda, c_in, *cand);
      auto key = std::pair{std::pair{cand->q, cand->x}, cand->beta};
      auto it = bounds.find(key);
      if (it == bounds.end()) it = bounds.emplace(key, compute_B(pda, cand->q, cand->x, cand->beta, config)).first;
      auto r = verify_with_bound(pda, *cand, config, it->second);
      switch (r.status) {
        case WitnessResult::Status::Verified:
          if (r.witness->certified) {
            v.kind = Verdict::Kind::NonRegular;
            v.witness = std::move(r.witness);
            v.certified = true;
            v.winner = "negative";
            return finish(v);
          }
          if (!v.witness) v.witness = std::move(r.witness);
          break;
        case WitnessResult::Status::Refuted: ++v.refuted; break;
        case WitnessResult::Status::Exhausted: ++v.exhausted_candidates; break;
      }
    }
  }
  if (v.witness) {
    v.kind = Verdict::Kind::NonRegular;
    v.winner = "negative";
  } else {
    v.winner = "none";
  }
  return finish(v);
}

}  // namespace pdreg
