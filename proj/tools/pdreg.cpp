// pdreg: command-line front end for the pushdown regularity library.
//
// Exit codes: 0 definitive positive answer, 1 definitive negative answer,
// 2 unknown / exhausted / modulo cutoff, 3 input error.

#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "pdreg/certificates.hpp"
#include "pdreg/regularity.hpp"

using namespace pdreg;

namespace {

constexpr int kPositive = 0;
constexpr int kNegative = 1;
constexpr int kUnknown = 2;
constexpr int kInputError = 3;

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read '" + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

struct Options {
  AnalysisConfig analysis;
  bool json = false;
  bool serial = false;
  std::string cert_out;
};

void add_budgets(CLI::App* cmd, Options& o) {
  cmd->add_option("--cutoff", o.analysis.cutoff, "eq-level cutoff")->check(CLI::PositiveNumber);
  cmd->add_option("--omega-budget", o.analysis.omega_budget, "pairs allowed in a bisimulation certificate search")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--region-limit", o.analysis.region_limit, "states allowed in the region used for C")
      ->check(CLI::PositiveNumber);
  cmd->add_flag("--serial", o.serial, "run batch kernels without OpenMP");
}

void add_output(CLI::App* cmd, Options& o, bool certs) {
  cmd->add_flag("--json", o.json, "structured output");
  if (certs) cmd->add_option("--cert-out", o.cert_out, "write the certificate document to this file");
}

int emit(const Options& o, const Json& doc, const std::string& human, const Json& cert, int code) {
  if (!o.cert_out.empty() && !cert.is_null()) {
    std::ofstream out(o.cert_out, std::ios::binary);
    if (!out) throw InputError("cannot write '" + o.cert_out + "'");
    out << cert.dump(2) << '\n';
  }
  if (o.json) std::cout << doc.dump(2) << '\n';
  else std::cout << human;
  return code;
}

std::string indent(const std::string& text, const std::string& pad) {
  std::string out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) out += pad + line + '\n';
  return out;
}

std::string render_path(const Pda& pda, Config c, const std::vector<std::size_t>& rules) {
  std::string out = format_config(pda, c);
  for (std::size_t idx : rules) {
    const Rule& r = pda.rules()[idx];
    c = Config{r.to, c.stack.popped().pushed(r.push)};
    out += " -" + pda.action_name(r.action) + "-> " + format_config(pda, c);
  }
  return out;
}

Json witness_json(const Pda& pda, const Witness& w) {
  Json corr = Json::array();
  for (const auto& [e, l] : w.corroboration) corr.push_back(Json{{"exponent", e}, {"eqlevel", l.to_string()}});
  Json L = Json::array();
  for (ControlId p : w.bound.L.members()) L.push_back(pda.control_name(p));
  return Json{{"q", pda.control_name(w.candidate.q)},
              {"X", pda.symbol_name(w.candidate.x)},
              {"beta", format_word(pda, w.candidate.beta)},
              {"gamma", format_word(pda, w.candidate.gamma)},
              {"origin", w.candidate.from_stamp ? "stamp" : "loop-pair"},
              {"prefix_rules", w.candidate.prefix_rules},
              {"loop_rules", w.candidate.loop_rules},
              {"B", w.bound.B},
              {"b", w.bound.b},
              {"ell", w.bound.ell},
              {"L", L},
              {"E", w.bound.E},
              {"E_prime", w.bound.e_prime},
              {"C", w.bound.C.value},
              {"C_exact", w.bound.C.exact},
              {"pumped", config_literal(pda, w.pumped)},
              {"limit", config_literal(pda, w.limit)},
              {"eqlevel", EqLevelResult::finite(w.level).to_string()},
              {"corroboration", corr},
              {"certified", w.certified}};
}

std::string witness_text(const Pda& pda, const Config& c_in, const Witness& w) {
  std::ostringstream os;
  const auto& c = w.candidate;
  os << "witness: q=" << pda.control_name(c.q) << " X=" << pda.symbol_name(c.x) << " beta=[" << format_word(pda, c.beta)
     << "] gamma=[" << format_word(pda, c.gamma) << "] (" << (c.from_stamp ? "stamp" : "loop-pair") << ")\n";
  os << "  prefix: " << render_path(pda, c_in, c.prefix_rules) << '\n';
  os << "  loop: " << render_path(pda, Config{c.q, StackWord::finite({c.x})}, c.loop_rules) << '\n';
  os << "  bound: B=" << w.bound.B << " (b=" << w.bound.b << ", l=" << w.bound.ell
     << ", L=" << format_control_set(pda, w.bound.L) << ", E=" << w.bound.E << ", E'=" << w.bound.e_prime
     << ", C=" << w.bound.C.value << (w.bound.C.exact ? " exact" : " lower bound") << ")\n";
  os << "  pumped: " << format_config(pda, w.pumped) << '\n';
  os << "  limit: " << format_config(pda, w.limit) << '\n';
  os << "  eqlevel: " << EqLevelResult::finite(w.level).to_string() << '\n';
  os << "  corroboration:";
  for (const auto& [e, l] : w.corroboration) os << ' ' << e << ':' << l.to_string();
  os << '\n';
  return os.str();
}

Json stats_json(const Verdict& v) {
  return Json{{"winner", v.winner},
              {"positive_levels", v.positive.levels},
              {"class_counts", v.positive.class_counts},
              {"positive_exhausted", v.positive.exhausted},
              {"candidates_tried", v.candidates_tried},
              {"refuted", v.refuted},
              {"exhausted_candidates", v.exhausted_candidates},
              {"stair_nodes", v.stairs.nodes},
              {"stair_depth", v.stairs.max_depth},
              {"stair_candidates", v.stairs.candidates},
              {"stamp_candidates", v.stairs.stamp_candidates},
              {"stairs_exhausted", v.stairs.exhausted}};
}

int cmd_regcheck(const std::string& path, Options& o) {
  const PdaFile file = parse_pda(slurp(path));
  const Pda& pda = file.pda;
  o.analysis.parallel = !o.serial;
  const Verdict v = decide_regularity(pda, file.init, o.analysis);
  Json doc{{"command", "regcheck"}, {"input", config_literal(pda, file.init)}, {"verdict", to_string(v.kind)}};
  std::ostringstream os;
  os << "input: " << format_config(pda, file.init) << '\n';
  Json cert;
  int code = kUnknown;
  switch (v.kind) {
    case Verdict::Kind::Regular: {
      const auto& r = *v.regular;
      cert = finite_match_certificate(pda, file.init, r.lts, r.state, r.certificate);
      doc["state"] = r.lts.state_name(r.state);
      doc["lts"] = format_lts(r.lts);
      doc["level"] = r.level;
      os << "verdict: Regular\n";
      os << "state: " << r.lts.state_name(r.state) << '\n';
      os << "lts:\n" << indent(format_lts(r.lts), "  ");
      os << "finite match: depth " << r.certificate.depth << ", " << r.certificate.matches.size()
         << " reachable truncations matched\n";
      code = kPositive;
      break;
    }
    case Verdict::Kind::NonRegular: {
      cert = witness_certificate(pda, file.init, *v.witness, o.analysis);
      doc["certified"] = v.certified;
      doc["witness"] = witness_json(pda, *v.witness);
      os << "verdict: NonRegular (" << (v.certified ? "certified" : "modulo cutoff") << ")\n";
      os << witness_text(pda, file.init, *v.witness);
      code = v.certified ? kNegative : kUnknown;
      break;
    }
    case Verdict::Kind::Unknown: os << "verdict: Unknown\n"; break;
  }
  doc["stats"] = stats_json(v);
  doc["budgets"] = Json{{"cutoff", o.analysis.cutoff},
                        {"omega_budget", o.analysis.omega_budget},
                        {"truncation_max", o.analysis.truncation_max},
                        {"path_budget", o.analysis.path_budget},
                        {"candidate_budget", o.analysis.candidate_budget},
                        {"region_limit", o.analysis.region_limit}};
  doc["certificate"] = cert;
  os << "search: winner=" << v.winner << " positive-levels=" << v.positive.levels << " class-counts=[";
  for (std::size_t i = 0; i < v.positive.class_counts.size(); ++i)
    os << (i ? " " : "") << v.positive.class_counts[i];
  os << "] candidates=" << v.candidates_tried << " refuted=" << v.refuted << " exhausted=" << v.exhausted_candidates
     << " stair-nodes=" << v.stairs.nodes << '\n';
  return emit(o, doc, os.str(), cert, code);
}

int cmd_eqlevel(const std::string& path, const std::string& left, const std::string& right, Options& o) {
  const PdaFile file = parse_pda(slurp(path));
  const Pda& pda = file.pda;
  const Config a = parse_config(pda, left);
  const Config b = parse_config(pda, right);
  const auto r = eqlevel_configs(pda, a, b, o.analysis.cutoff, o.analysis.omega_budget);
  Json doc{{"command", "eqlevel"},
           {"left", config_literal(pda, a)},
           {"right", config_literal(pda, b)},
           {"eqlevel", r.level.to_string()},
           {"cutoff", o.analysis.cutoff}};
  std::ostringstream os;
  os << "left: " << format_config(pda, a) << "\nright: " << format_config(pda, b) << "\neqlevel: "
     << r.level.to_string() << '\n';
  Json cert;
  if (r.strategy) {
    cert = distinction_certificate(pda, file.init, a, b, *r.strategy);
    os << "strategy: " << r.strategy->nodes.size() << " nodes, distinguishes in round " << r.level.value + 1 << '\n';
  } else if (r.certificate) {
    cert = bisimulation_certificate(pda, file.init, a, b, *r.certificate);
    os << "bisimulation: " << r.certificate->pairs.size() << " pairs up to identity and dead-suffix pruning\n";
  }
  doc["certificate"] = cert;
  return emit(o, doc, os.str(), cert, r.level.kind == EqLevelResult::Kind::AtLeast ? kUnknown : kPositive);
}

int cmd_bisim_finite(const std::string& path, const std::string& lts_path, const std::string& state,
                     const std::string& config, Options& o) {
  const PdaFile file = parse_pda(slurp(path));
  const Pda& pda = file.pda;
  const FiniteLts lts = parse_lts(slurp(lts_path));
  auto f = lts.find_state(state);
  if (!f) throw InputError("unknown finite state '" + state + "'");
  const Config c = config.empty() ? file.init : parse_config(pda, config);
  const auto r = bisim_pda_vs_finite(pda, c, lts, *f);
  Json doc{{"command", "bisim-finite"}, {"config", config_literal(pda, c)}, {"state", state}, {"bisimilar", r.bisimilar}};
  std::ostringstream os;
  os << format_config(pda, c) << " ~ " << state << ": " << (r.bisimilar ? "true" : "false") << '\n';
  Json cert;
  if (r.certificate) {
    cert = finite_match_certificate(pda, c, lts, *f, *r.certificate);
    os << "finite match: depth " << r.certificate->depth << ", " << r.certificate->matches.size()
       << " reachable truncations matched\n";
  } else if (r.strategy) {
    cert = union_distinction_certificate(pda, c, lts, *f, *r.strategy);
    doc["eqlevel"] = EqLevelResult::finite(r.strategy->level()).to_string();
    os << "distinguished: eqlevel " << EqLevelResult::finite(r.strategy->level()).to_string() << '\n';
  } else if (r.counterexample) {
    doc["counterexample"] = config_literal(pda, *r.counterexample);
    os << "counterexample: " << format_config(pda, *r.counterexample) << " is reachable and ~_" << lts.num_states()
       << " no finite state\n";
  }
  doc["certificate"] = cert;
  return emit(o, doc, os.str(), cert, r.bisimilar ? kPositive : kNegative);
}

int cmd_quotient(const std::string& lts_path, Options& o) {
  const FiniteLts lts = parse_lts(slurp(lts_path));
  const Quotient q = quotient_finite(lts);
  Json classes = Json::object();
  std::ostringstream os;
  os << format_lts(q.lts) << "classes:\n";
  for (FiniteState s = 0; s < lts.num_states(); ++s) {
    classes[lts.state_name(s)] = q.lts.state_name(q.class_of[s]);
    os << "  " << lts.state_name(s) << ' ' << q.lts.state_name(q.class_of[s]) << '\n';
  }
  Json doc{{"command", "quotient"}, {"lts", format_lts(q.lts)}, {"classes", classes}};
  return emit(o, doc, os.str(), Json(), kPositive);
}

int cmd_poststar(const std::string& path, const std::string& config, std::size_t depth, Options& o) {
  const PdaFile file = parse_pda(slurp(path));
  const Pda& pda = file.pda;
  const Config c = config.empty() ? file.init : parse_config(pda, config);
  const ConfigAutomaton a = reachable_configs(pda, c);
  Json doc{{"command", "poststar"}, {"config", config_literal(pda, c)}, {"automaton", automaton_to_json(pda, a)}};
  std::ostringstream os;
  os << a.dump(pda);
  if (depth > 0) {
    Json ts = Json::array();
    os << "truncations " << depth << ":\n";
    for (const auto& t : reachable_truncations(a, depth)) {
      const Config tc{t.control, StackWord::finite(t.prefix)};
      ts.push_back(config_literal(pda, tc));
      os << "  " << format_config(pda, tc) << '\n';
    }
    doc["depth"] = depth;
    doc["truncations"] = ts;
  }
  return emit(o, doc, os.str(), Json(), kPositive);
}

int cmd_witness_verify(const std::string& path, const std::string& cand_path, Options& o) {
  const PdaFile file = parse_pda(slurp(path));
  const Pda& pda = file.pda;
  o.analysis.parallel = !o.serial;
  Json cj;
  try {
    cj = Json::parse(slurp(cand_path));
  } catch (const Json::exception& e) {
    throw InputError(std::string("candidate file: ") + e.what());
  }
  LoopCandidate cand;
  try {
    cand = candidate_from_json(pda, cj.contains("candidate") ? cj.at("candidate") : cj);
  } catch (const Json::exception& e) {
    throw InputError(std::string("candidate file: ") + e.what());
  }
  const auto r = verify_witness(pda, file.init, cand, o.analysis);
  Json doc{{"command", "witness-verify"}, {"status", to_string(r.status)}, {"B", r.bound.B}};
  std::ostringstream os;
  Json cert;
  int code = kUnknown;
  switch (r.status) {
    case WitnessResult::Status::Verified:
      cert = witness_certificate(pda, file.init, *r.witness, o.analysis);
      doc["witness"] = witness_json(pda, *r.witness);
      os << "status: Verified (" << (r.witness->certified ? "certified" : "modulo cutoff") << ")\n"
         << witness_text(pda, file.init, *r.witness);
      code = r.witness->certified ? kPositive : kUnknown;
      break;
    case WitnessResult::Status::Refuted: {
      const Config limit{cand.q, StackWord::periodic({cand.x}, cand.beta)};
      std::vector<SymbolId> w{cand.x};
      for (std::uint64_t i = 0; i < r.bound.B; ++i) w.insert(w.end(), cand.beta.begin(), cand.beta.end());
      w.insert(w.end(), cand.gamma.begin(), cand.gamma.end());
      const Config pumped{cand.q, StackWord::finite(w)};
      cert = bisimulation_certificate(pda, file.init, pumped, limit, *r.refutation);
      os << "status: Refuted\nB: " << r.bound.B << "\n" << format_config(pda, pumped) << " ~ " << format_config(pda, limit)
         << " (bisimulation of " << r.refutation->pairs.size() << " pairs)\n";
      code = kNegative;
      break;
    }
    case WitnessResult::Status::Exhausted:
      os << "status: Exhausted\nB: " << r.bound.B << "\neqlevel: " << r.level.to_string() << '\n';
      break;
  }
  doc["certificate"] = cert;
  return emit(o, doc, os.str(), cert, code);
}

int cmd_certcheck(const std::string& path, Options& o) {
  Json doc;
  try {
    doc = Json::parse(slurp(path));
  } catch (const Json::exception& e) {
    throw InputError(std::string("certificate file: ") + e.what());
  }
  if (doc.contains("certificate") && doc.at("certificate").is_object()) doc = doc.at("certificate");
  const auto r = check_certificate(doc);
  const std::string kind = doc.value("certificate", std::string("?"));
  Json out{{"command", "certcheck"}, {"kind", kind}, {"valid", r.ok}};
  if (!r.ok) out["reason"] = r.reason;
  std::string human = kind + ": " + (r.ok ? "valid" : "invalid: " + r.reason) + "\n";
  return emit(o, out, human, Json(), r.ok ? kPositive : kNegative);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"pdreg: bisimilarity and regularity of pushdown processes"};
  app.require_subcommand(1);
  Options o;
  std::string pda_path, lts_path, left, right, state, config, cand_path, cert_path;
  std::size_t depth = 0;
  std::function<int()> run;

  auto* reg = app.add_subcommand("regcheck", "decide regularity of the initial configuration");
  reg->add_option("pda", pda_path, "pda file")->required();
  add_budgets(reg, o);
  reg->add_option("--truncation-max", o.analysis.truncation_max, "deepest truncation for the positive side")
      ->check(CLI::Range(1, 12));
  reg->add_option("--path-budget", o.analysis.path_budget, "path nodes explored by the stair search")
      ->check(CLI::PositiveNumber);
  reg->add_option("--candidate-budget", o.analysis.candidate_budget, "loop candidates verified")
      ->check(CLI::PositiveNumber);
  add_output(reg, o, true);
  reg->callback([&] { run = [&] { return cmd_regcheck(pda_path, o); }; });

  auto* eq = app.add_subcommand("eqlevel", "eq-level of two configurations");
  eq->add_option("pda", pda_path, "pda file")->required();
  eq->add_option("left", left, "configuration literal, e.g. p[A X]")->required();
  eq->add_option("right", right, "configuration literal, e.g. p[](A)w")->required();
  add_budgets(eq, o);
  add_output(eq, o, true);
  eq->callback([&] { run = [&] { return cmd_eqlevel(pda_path, left, right, o); }; });

  auto* bf = app.add_subcommand("bisim-finite", "bisimilarity of a pda configuration and a finite-LTS state");
  bf->add_option("pda", pda_path, "pda file")->required();
  bf->add_option("lts", lts_path, "lts file")->required();
  bf->add_option("state", state, "state of the finite LTS")->required();
  bf->add_option("--config", config, "configuration (default: the pda's init)");
  add_output(bf, o, true);
  bf->callback([&] { run = [&] { return cmd_bisim_finite(pda_path, lts_path, state, config, o); }; });

  auto* qt = app.add_subcommand("quotient", "bisimilarity quotient of a finite LTS");
  qt->add_option("lts", lts_path, "lts file")->required();
  add_output(qt, o, false);
  qt->callback([&] { run = [&] { return cmd_quotient(lts_path, o); }; });

  auto* ps = app.add_subcommand("poststar", "automaton of the reachable configurations");
  ps->add_option("pda", pda_path, "pda file")->required();
  ps->add_option("--config", config, "configuration (default: the pda's init)");
  ps->add_option("--truncations", depth, "also list reachable truncations of this depth")->check(CLI::Range(0, 12));
  add_output(ps, o, false);
  ps->callback([&] { run = [&] { return cmd_poststar(pda_path, config, depth, o); }; });

  auto* wv = app.add_subcommand("witness-verify", "verify a loop candidate against the bound B");
  wv->add_option("pda", pda_path, "pda file")->required();
  wv->add_option("candidate", cand_path, "candidate JSON file")->required();
  add_budgets(wv, o);
  add_output(wv, o, true);
  wv->callback([&] { run = [&] { return cmd_witness_verify(pda_path, cand_path, o); }; });

  auto* cc = app.add_subcommand("certcheck", "check a certificate document");
  cc->add_option("certificate", cert_path, "certificate JSON file")->required();
  add_output(cc, o, false);
  cc->callback([&] { run = [&] { return cmd_certcheck(cert_path, o); }; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kInputError;
  }
  try {
    return run();
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInputError;
  } catch (const BudgetError& e) {
    std::cerr << "budget exceeded: " << e.what() << '\n';
    return kUnknown;
  }
}
