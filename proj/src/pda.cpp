#include "pdreg/pda.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <set>
#include <sstream>
#include <unordered_map>

namespace pdreg {

namespace {

std::size_t primitive_root_length(const std::vector<SymbolId>& w) {
  const std::size_t n = w.size();
  for (std::size_t p = 1; p < n; ++p) {
    if (n % p != 0) continue;
    bool ok = true;
    for (std::size_t i = p; i < n && ok; ++i) ok = w[i] == w[i - p];
    if (ok) return p;
  }
  return n;
}

inline void hash_mix(std::size_t& seed, std::size_t v) {
  seed ^= v + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2);
}

}  // namespace

// ---------------------------------------------------------------- StackWord

StackWord StackWord::finite(std::vector<SymbolId> word) {
  StackWord w;
  w.prefix_ = std::move(word);
  return w;
}

StackWord StackWord::periodic(std::vector<SymbolId> prefix, std::vector<SymbolId> period) {
  if (period.empty()) throw InputError("ultimately periodic stack word needs a nonempty period");
  period.resize(primitive_root_length(period));
  while (!prefix.empty() && prefix.back() == period.back()) {
    prefix.pop_back();
    std::rotate(period.rbegin(), period.rbegin() + 1, period.rend());
  }
  StackWord w;
  w.prefix_ = std::move(prefix);
  w.period_ = std::move(period);
  return w;
}

std::optional<std::size_t> StackWord::length() const {
  if (!is_finite()) return std::nullopt;
  return prefix_.size();
}

SymbolId StackWord::at(std::size_t i) const {
  if (i < prefix_.size()) return prefix_[i];
  if (period_.empty()) throw std::out_of_range("StackWord::at past the end of a finite word");
  return period_[(i - prefix_.size()) % period_.size()];
}

std::vector<SymbolId> StackWord::take(std::size_t n) const {
  if (is_finite()) n = std::min(n, prefix_.size());
  std::vector<SymbolId> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.push_back(at(i));
  return out;
}

StackWord StackWord::popped() const {
  if (empty()) throw std::logic_error("pop from an empty stack");
  StackWord w = *this;
  if (!w.prefix_.empty()) {
    w.prefix_.erase(w.prefix_.begin());
  } else {
    std::rotate(w.period_.begin(), w.period_.begin() + 1, w.period_.end());
  }
  return w;
}

StackWord StackWord::pushed(std::span<const SymbolId> word) const {
  if (word.empty()) return *this;
  std::vector<SymbolId> prefix(word.begin(), word.end());
  prefix.insert(prefix.end(), prefix_.begin(), prefix_.end());
  if (is_finite()) return finite(std::move(prefix));
  return periodic(std::move(prefix), period_);
}

StackWord canonicalize(const RawStackWord& raw) {
  if (!raw.infinite) {
    if (!raw.period.empty()) throw InputError("finite stack word must not carry a period");
    return StackWord::finite(raw.prefix);
  }
  return StackWord::periodic(raw.prefix, raw.period);
}

StackWord canonicalize(const StackWord& word) {
  if (word.is_finite()) return word;
  return StackWord::periodic(word.prefix(), word.period());
}

TruncatedConfig truncate(const Config& c, std::size_t k) {
  return TruncatedConfig{c.control, c.stack.take(k)};
}

// ---------------------------------------------------------------------- Pda

namespace {

void check_names(const std::vector<std::string>& names, const char* what) {
  if (names.empty()) throw InputError(std::string("the set of ") + what + " must be nonempty");
  std::set<std::string_view> seen;
  for (const auto& n : names) {
    if (n.empty()) throw InputError(std::string("empty name among ") + what);
    if (!seen.insert(n).second) throw InputError(std::string("duplicate name '") + n + "' among " + what);
  }
}

template <class Id>
std::optional<Id> find_name(const std::vector<std::string>& names, std::string_view name) {
  auto it = std::find(names.begin(), names.end(), name);
  if (it == names.end()) return std::nullopt;
  return static_cast<Id>(it - names.begin());
}

}  // namespace

Pda::Pda(std::vector<std::string> controls, std::vector<std::string> stack_symbols,
         std::vector<std::string> actions, std::vector<Rule> rules)
    : controls_(std::move(controls)),
      symbols_(std::move(stack_symbols)),
      actions_(std::move(actions)),
      rules_(std::move(rules)) {
  check_names(controls_, "control states");
  check_names(symbols_, "stack symbols");
  check_names(actions_, "actions");
  std::set<Rule> seen;
  index_.assign(controls_.size() * symbols_.size(), {});
  for (std::size_t i = 0; i < rules_.size(); ++i) {
    const Rule& r = rules_[i];
    if (r.from >= controls_.size() || r.to >= controls_.size())
      throw InputError("rule " + std::to_string(i) + " uses an undeclared control state");
    if (r.top >= symbols_.size() ||
        std::any_of(r.push.begin(), r.push.end(), [&](SymbolId x) { return x >= symbols_.size(); }))
      throw InputError("rule " + std::to_string(i) + " uses an undeclared stack symbol");
    if (r.action >= actions_.size())
      throw InputError("rule " + std::to_string(i) + " uses an undeclared action");
    if (!seen.insert(r).second) throw InputError("rule " + std::to_string(i) + " is a duplicate");
    index_[r.from * symbols_.size() + r.top].push_back(i);
  }
}

std::optional<ControlId> Pda::find_control(std::string_view name) const {
  return find_name<ControlId>(controls_, name);
}
std::optional<SymbolId> Pda::find_symbol(std::string_view name) const {
  return find_name<SymbolId>(symbols_, name);
}
std::optional<ActionId> Pda::find_action(std::string_view name) const {
  return find_name<ActionId>(actions_, name);
}

std::span<const std::size_t> Pda::rules_for(ControlId p, SymbolId x) const {
  if (p >= controls_.size() || x >= symbols_.size()) return {};
  return index_[p * symbols_.size() + x];
}

std::size_t Pda::max_push() const {
  std::size_t m = 0;
  for (const auto& r : rules_) m = std::max(m, r.push.size());
  return m;
}

void Pda::validate(const Config& c) const {
  if (c.control >= controls_.size()) throw InputError("configuration uses an undeclared control state");
  auto bad = [&](SymbolId x) { return x >= symbols_.size(); };
  if (std::any_of(c.stack.prefix().begin(), c.stack.prefix().end(), bad) ||
      std::any_of(c.stack.period().begin(), c.stack.period().end(), bad))
    throw InputError("configuration uses an undeclared stack symbol");
}

bool Pda::operator==(const Pda& other) const {
  return controls_ == other.controls_ && symbols_ == other.symbols_ && actions_ == other.actions_ &&
         rules_ == other.rules_;
}

std::vector<Step> step(const Pda& pda, const Config& c) {
  pda.validate(c);
  std::vector<Step> out;
  if (c.stack.empty()) return out;
  const StackWord tail = c.stack.popped();
  for (std::size_t idx : pda.rules_for(c.control, c.stack.top())) {
    const Rule& r = pda.rules()[idx];
    out.push_back(Step{r.action, idx, Config{r.to, tail.pushed(r.push)}});
  }
  std::sort(out.begin(), out.end(), [](const Step& a, const Step& b) {
    if (a.action != b.action) return a.action < b.action;
    if (a.target != b.target) return a.target < b.target;
    return a.rule < b.rule;
  });
  return out;
}

// ------------------------------------------------------------ normalization

namespace {

class CellBuilder {
 public:
  CellBuilder(const Pda& pda, std::size_t capacity) : pda_(pda), capacity_(capacity) {
    for (SymbolId x = 0; x < pda.num_symbols(); ++x) {
      names_.push_back(pda.symbol_name(x));
      words_.push_back({x});
      ids_[{x}] = x;
    }
  }

  SymbolId cell(const std::vector<SymbolId>& word) {
    auto it = ids_.find(word);
    if (it != ids_.end()) return it->second;
    std::string name = "<";
    for (std::size_t i = 0; i < word.size(); ++i) {
      if (i) name += '.';
      name += pda_.symbol_name(word[i]);
    }
    name += '>';
    while (std::find(names_.begin(), names_.end(), name) != names_.end()) name += '\'';
    const auto id = static_cast<SymbolId>(words_.size());
    names_.push_back(name);
    words_.push_back(word);
    ids_[word] = id;
    pending_.push_back(id);
    return id;
  }

  // Splits the new top-of-stack content into at most two cells.
  std::vector<SymbolId> segment(const std::vector<SymbolId>& pushed, const std::vector<SymbolId>& rest) {
    std::vector<SymbolId> u = pushed;
    u.insert(u.end(), rest.begin(), rest.end());
    if (u.size() <= 2) return u;
    if (u.size() - 1 <= capacity_) return {u[0], cell({u.begin() + 1, u.end()})};
    return {cell(pushed), cell(rest)};
  }

  std::vector<SymbolId> pending_;
  std::vector<std::string> names_;
  std::vector<std::vector<SymbolId>> words_;

 private:
  const Pda& pda_;
  std::size_t capacity_;
  std::map<std::vector<SymbolId>, SymbolId> ids_;
};

}  // namespace

NormalizedPda normalize_rules(const Pda& pda) {
  NormalizedPda out;
  const std::size_t capacity = pda.max_push();
  if (capacity <= 2) {
    out.pda = pda;
    for (SymbolId x = 0; x < pda.num_symbols(); ++x) out.expansion.push_back({x});
    out.identity = true;
    return out;
  }
  out.identity = false;
  CellBuilder cells(pda, capacity);
  std::vector<Rule> rules;
  for (const Rule& r : pda.rules()) {
    rules.push_back(Rule{r.from, r.top, r.action, r.to, cells.segment(r.push, {})});
  }
  // Composite cells behave like their first symbol with the rest kept below.
  while (!cells.pending_.empty()) {
    const SymbolId c = cells.pending_.back();
    cells.pending_.pop_back();
    const std::vector<SymbolId> word = cells.words_[c];
    const std::vector<SymbolId> rest(word.begin() + 1, word.end());
    for (ControlId p = 0; p < pda.num_controls(); ++p) {
      for (std::size_t idx : pda.rules_for(p, word.front())) {
        const Rule& r = pda.rules()[idx];
        rules.push_back(Rule{p, c, r.action, r.to, cells.segment(r.push, rest)});
      }
    }
  }
  out.pda = Pda(pda.control_names(), cells.names_, pda.action_names(), std::move(rules));
  out.expansion = cells.words_;
  return out;
}

Config NormalizedPda::to_normalized(const Config& original) const { return original; }

Config NormalizedPda::to_original(const Config& normalized) const {
  auto expand = [&](const std::vector<SymbolId>& w) {
    std::vector<SymbolId> out;
    for (SymbolId x : w) out.insert(out.end(), expansion.at(x).begin(), expansion.at(x).end());
    return out;
  };
  RawStackWord raw{expand(normalized.stack.prefix()), expand(normalized.stack.period()),
                   !normalized.stack.is_finite()};
  return Config{normalized.control, canonicalize(raw)};
}

// ------------------------------------------------------------- text formats

namespace {

struct Token {
  std::string text;
  std::size_t column;  // 1-based
};

std::vector<Token> tokenize(std::string_view line) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < line.size()) {
    if (line[i] == '#') break;
    if (std::isspace(static_cast<unsigned char>(line[i]))) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j])) && line[j] != '#') ++j;
    out.push_back(Token{std::string(line.substr(i, j - i)), i + 1});
    i = j;
  }
  return out;
}

[[noreturn]] void fail(std::size_t line, std::size_t column, const std::string& msg) {
  throw InputError("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + msg);
}

std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view l = text.substr(start, end - start);
    if (!l.empty() && l.back() == '\r') l.remove_suffix(1);
    lines.push_back(l);
    if (end == text.size()) break;
    start = end + 1;
  }
  return lines;
}

bool reserved(const std::string& s) { return s == "->" || s == "." || s.back() == ':'; }

}  // namespace

PdaFile parse_pda(std::string_view text) {
  const auto lines = split_lines(text);
  bool header = false;
  std::optional<std::vector<Token>> controls, alphabet, stack, init;
  std::size_t init_line = 0;
  struct PendingRule {
    std::vector<Token> tokens;
    std::size_t line;
  };
  std::vector<PendingRule> pending;

  for (std::size_t ln = 0; ln < lines.size(); ++ln) {
    auto toks = tokenize(lines[ln]);
    if (toks.empty()) continue;
    const std::size_t lineno = ln + 1;
    if (!header) {
      if (toks[0].text != "pda" || toks.size() != 1) fail(lineno, toks[0].column, "expected header 'pda'");
      header = true;
      continue;
    }
    const std::string& head = toks[0].text;
    auto section = [&](std::optional<std::vector<Token>>& slot) {
      if (slot) fail(lineno, toks[0].column, "duplicate '" + head + "' line");
      if (!pending.empty()) fail(lineno, toks[0].column, "declarations must precede rules");
      slot = std::vector<Token>(toks.begin() + 1, toks.end());
      for (const auto& t : *slot)
        if (reserved(t.text)) fail(lineno, t.column, "'" + t.text + "' is not a valid name");
    };
    if (head == "controls:") {
      section(controls);
    } else if (head == "alphabet:") {
      section(alphabet);
    } else if (head == "stack:") {
      section(stack);
    } else if (head == "init:") {
      section(init);
      init_line = lineno;
    } else if (head.back() == ':') {
      fail(lineno, toks[0].column, "unknown section '" + head + "'");
    } else {
      pending.push_back(PendingRule{std::move(toks), lineno});
    }
  }
  if (!header) throw InputError("line 1, column 1: expected header 'pda'");
  auto names = [](const std::optional<std::vector<Token>>& toks, const char* what) {
    if (!toks) throw InputError(std::string("missing '") + what + "' line");
    std::vector<std::string> out;
    for (const auto& t : *toks) out.push_back(t.text);
    return out;
  };
  const auto control_names = names(controls, "controls:");
  const auto action_names = names(alphabet, "alphabet:");
  const auto symbol_names = names(stack, "stack:");
  // Validate the declarations before resolving rules against them.
  Pda declared(control_names, symbol_names, action_names, {});

  auto control = [&](const Token& t, std::size_t line) {
    auto id = declared.find_control(t.text);
    if (!id) fail(line, t.column, "undeclared control state '" + t.text + "'");
    return *id;
  };
  auto symbol = [&](const Token& t, std::size_t line) {
    auto id = declared.find_symbol(t.text);
    if (!id) fail(line, t.column, "undeclared stack symbol '" + t.text + "'");
    return *id;
  };

  std::vector<Rule> rules;
  std::set<Rule> seen;
  for (const auto& pr : pending) {
    const auto& t = pr.tokens;
    auto arrow = std::find_if(t.begin(), t.end(), [](const Token& k) { return k.text == "->"; });
    if (arrow == t.end()) fail(pr.line, t.back().column, "expected '->' in rule 'p X a -> q w'");
    const auto lhs = static_cast<std::size_t>(arrow - t.begin());
    if (lhs < 3) fail(pr.line, arrow->column, "expected control, stack symbol and action before '->'");
    if (lhs > 3) fail(pr.line, t[3].column, "expected '->' after the action");
    if (t[2].text == "." || t[2].text == "eps")
      fail(pr.line, t[2].column, "empty (silent) actions are not supported");
    Rule r;
    r.from = control(t[0], pr.line);
    r.top = symbol(t[1], pr.line);
    auto act = declared.find_action(t[2].text);
    if (!act) fail(pr.line, t[2].column, "undeclared action '" + t[2].text + "'");
    r.action = *act;
    if (lhs + 1 >= t.size()) fail(pr.line, arrow->column + 2, "expected target control after '->'");
    r.to = control(t[lhs + 1], pr.line);
    if (lhs + 2 >= t.size()) fail(pr.line, t[lhs + 1].column + t[lhs + 1].text.size(),
                                  "expected right-hand side word (use '.' for the empty word)");
    if (t[lhs + 2].text == ".") {
      if (lhs + 3 != t.size()) fail(pr.line, t[lhs + 3].column, "unexpected symbol after '.'");
    } else {
      for (std::size_t i = lhs + 2; i < t.size(); ++i) r.push.push_back(symbol(t[i], pr.line));
    }
    if (!seen.insert(r).second) fail(pr.line, t[0].column, "duplicate rule");
    rules.push_back(std::move(r));
  }

  if (!init) throw InputError("missing 'init:' line");
  if (init->empty()) fail(init_line, 1, "expected control state after 'init:'");
  Config c;
  c.control = control((*init)[0], init_line);
  std::vector<SymbolId> word;
  for (std::size_t i = 1; i < init->size(); ++i) word.push_back(symbol((*init)[i], init_line));
  c.stack = StackWord::finite(std::move(word));
  return PdaFile{Pda(control_names, symbol_names, action_names, std::move(rules)), std::move(c)};
}

std::string format_word(const Pda& pda, std::span<const SymbolId> word) {
  std::string out;
  for (std::size_t i = 0; i < word.size(); ++i) {
    if (i) out += ' ';
    out += pda.symbol_name(word[i]);
  }
  return out;
}

std::string format_pda(const Pda& pda, const Config& init) {
  std::ostringstream os;
  auto list = [&](const char* head, const std::vector<std::string>& names) {
    os << head;
    for (const auto& n : names) os << ' ' << n;
    os << '\n';
  };
  os << "pda\n";
  list("controls:", pda.control_names());
  list("alphabet:", pda.action_names());
  list("stack:", pda.symbol_names());
  os << "init: " << pda.control_name(init.control);
  for (SymbolId x : init.stack.prefix()) os << ' ' << pda.symbol_name(x);
  os << '\n';
  for (const Rule& r : pda.rules()) {
    os << pda.control_name(r.from) << ' ' << pda.symbol_name(r.top) << ' ' << pda.action_name(r.action)
       << " -> " << pda.control_name(r.to) << ' ';
    if (r.push.empty()) os << '.';
    else os << format_word(pda, r.push);
    os << '\n';
  }
  return os.str();
}

std::string format_config(const Pda& pda, const Config& c) {
  std::string out = pda.control_name(c.control) + " [" + format_word(pda, c.stack.prefix()) + "]";
  if (!c.stack.is_finite()) out += " (" + format_word(pda, c.stack.period()) + ")^w";
  return out;
}

std::string config_literal(const Pda& pda, const Config& c) {
  std::string out = pda.control_name(c.control) + "[" + format_word(pda, c.stack.prefix()) + "]";
  if (!c.stack.is_finite()) out += "(" + format_word(pda, c.stack.period()) + ")w";
  return out;
}

Config parse_config(const Pda& pda, std::string_view text) {
  std::size_t i = 0;
  auto skip = [&] {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
  };
  auto err = [&](const std::string& msg) -> InputError {
    return InputError("configuration '" + std::string(text) + "', column " + std::to_string(i + 1) + ": " + msg);
  };
  auto name_char = [](char ch) {
    return !std::isspace(static_cast<unsigned char>(ch)) && ch != '[' && ch != ']' && ch != '(' && ch != ')';
  };
  auto word_until = [&](char close) {
    std::vector<SymbolId> w;
    for (;;) {
      skip();
      if (i >= text.size()) throw err(std::string("expected '") + close + "'");
      if (text[i] == close) {
        ++i;
        return w;
      }
      const std::size_t s = i;
      while (i < text.size() && name_char(text[i])) ++i;
      if (s == i) throw err("unexpected character");
      const std::string_view name = text.substr(s, i - s);
      auto id = pda.find_symbol(name);
      if (!id) throw err("undeclared stack symbol '" + std::string(name) + "'");
      w.push_back(*id);
    }
  };
  skip();
  const std::size_t s = i;
  while (i < text.size() && name_char(text[i])) ++i;
  const std::string_view cname = text.substr(s, i - s);
  auto control = pda.find_control(cname);
  if (!control) throw err("undeclared control state '" + std::string(cname) + "'");
  skip();
  if (i >= text.size() || text[i] != '[') throw err("expected '['");
  ++i;
  auto prefix = word_until(']');
  skip();
  if (i == text.size()) return Config{*control, StackWord::finite(std::move(prefix))};
  if (text[i] != '(') throw err("expected '(' or end of input");
  ++i;
  auto period = word_until(')');
  skip();
  if (i < text.size() && text[i] == '^') ++i;
  if (i >= text.size() || text[i] != 'w') throw err("expected 'w' after the period");
  ++i;
  skip();
  if (i != text.size()) throw err("trailing characters");
  if (period.empty()) throw err("the period must be nonempty");
  return Config{*control, StackWord::periodic(std::move(prefix), std::move(period))};
}

}  // namespace pdreg

std::size_t std::hash<pdreg::StackWord>::operator()(const pdreg::StackWord& w) const noexcept {
  std::size_t seed = w.prefix().size() * 31 + w.period().size();
  for (auto x : w.prefix()) pdreg::hash_mix(seed, x);
  pdreg::hash_mix(seed, 0x5bd1e995);
  for (auto x : w.period()) pdreg::hash_mix(seed, x);
  return seed;
}

std::size_t std::hash<pdreg::Config>::operator()(const pdreg::Config& c) const noexcept {
  std::size_t seed = std::hash<pdreg::StackWord>{}(c.stack);
  pdreg::hash_mix(seed, c.control);
  return seed;
}
