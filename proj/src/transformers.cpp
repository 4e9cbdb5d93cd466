#include "pdreg/transformers.hpp"

#include <algorithm>
#include <map>

namespace pdreg {

bool ControlSet::empty() const { return std::none_of(bits_.begin(), bits_.end(), [](bool b) { return b; }); }

std::size_t ControlSet::size() const { return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), true)); }

std::vector<ControlId> ControlSet::members() const {
  std::vector<ControlId> out;
  for (std::size_t i = 0; i < bits_.size(); ++i)
    if (bits_[i]) out.push_back(static_cast<ControlId>(i));
  return out;
}

bool ControlSet::subset_of(const ControlSet& other) const {
  for (std::size_t i = 0; i < bits_.size(); ++i)
    if (bits_[i] && !other.contains(static_cast<ControlId>(i))) return false;
  return true;
}

std::string format_control_set(const Pda& pda, const ControlSet& k) {
  std::string out = "{";
  bool first = true;
  for (ControlId p : k.members()) {
    if (!first) out += ',';
    out += pda.control_name(p);
    first = false;
  }
  return out + "}";
}

std::uint64_t sat_add(std::uint64_t a, std::uint64_t b) { return a > kUnbounded - b ? kUnbounded : a + b; }

std::uint64_t sat_mul(std::uint64_t a, std::uint64_t b) {
  if (a == 0 || b == 0) return 0;
  return a > kUnbounded / b ? kUnbounded : a * b;
}

TransformerTable::TransformerTable(std::size_t controls, std::size_t symbols)
    : controls_(controls), symbols_(symbols), dist_(controls * symbols * controls, kUnbounded) {}

std::vector<TransformerTable::Triple> TransformerTable::triples() const {
  std::vector<Triple> out;
  for (ControlId p = 0; p < controls_; ++p)
    for (SymbolId x = 0; x < symbols_; ++x)
      for (ControlId q = 0; q < controls_; ++q)
        if (relates(p, x, q)) out.push_back({p, x, q, dist(p, x, q)});
  return out;
}

ControlSet TransformerTable::apply(const ControlSet& k, SymbolId x) const {
  if (x >= symbols_) throw InputError("stack symbol outside the transformer table's alphabet");
  ControlSet out(controls_);
  for (ControlId p : k.members())
    for (ControlId q = 0; q < controls_; ++q)
      if (relates(p, x, q)) out.insert(q);
  return out;
}

TransformerTable compute_transformers(const Pda& pda) {
  TransformerTable t(pda.num_controls(), pda.num_symbols());
  const std::size_t nq = pda.num_controls();
  // Round-based relaxation; each round finalizes at least one more triple, so
  // the number of rounds is bounded by the number of triples.
  for (bool changed = true; changed;) {
    changed = false;
    for (const Rule& r : pda.rules()) {
      // cost[q'] = shortest derivation r.to·push ->* q'
      std::vector<std::uint64_t> cost(nq, kUnbounded);
      cost[r.to] = 0;
      for (SymbolId y : r.push) {
        std::vector<std::uint64_t> next(nq, kUnbounded);
        for (ControlId a = 0; a < nq; ++a) {
          if (cost[a] == kUnbounded) continue;
          for (ControlId b = 0; b < nq; ++b) {
            const std::uint64_t d = t.dist(a, y, b);
            if (d == kUnbounded) continue;
            next[b] = std::min(next[b], sat_add(cost[a], d));
          }
        }
        cost = std::move(next);
      }
      for (ControlId q = 0; q < nq; ++q) {
        if (cost[q] == kUnbounded) continue;
        const std::uint64_t total = sat_add(cost[q], 1);
        auto& slot = t.dist_[t.index(r.from, r.top, q)];
        if (total < slot) {
          slot = total;
          changed = true;
        }
      }
    }
  }
  for (const auto& tr : t.triples()) t.bound_ = std::max(t.bound_, tr.steps);
  return t;
}

ControlSet apply_set_transformer(const TransformerTable& table, const ControlSet& k,
                                 std::span<const SymbolId> alpha) {
  ControlSet cur = k;
  for (SymbolId x : alpha) cur = table.apply(cur, x);
  return cur;
}

KiSequence ki_sequence(const TransformerTable& table, ControlId q, SymbolId x, std::span<const SymbolId> beta) {
  if (beta.empty()) throw InputError("the loop word β must be nonempty");
  if (q >= table.num_controls()) throw InputError("unknown control state");
  KiSequence seq;
  std::map<ControlSet, std::size_t> first_seen;
  ControlSet cur = table.apply(ControlSet::singleton(table.num_controls(), q), x);
  for (;;) {
    auto [it, fresh] = first_seen.try_emplace(cur, seq.sets.size());
    seq.sets.push_back(cur);
    if (!fresh) {
      seq.b = it->second;
      seq.ell = seq.sets.size() - 1 - seq.b;
      seq.loop = cur;
      return seq;
    }
    cur = apply_set_transformer(table, cur, beta);
  }
}

}  // namespace pdreg
