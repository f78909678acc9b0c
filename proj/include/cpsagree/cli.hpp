#ifndef CPSAGREE_CLI_HPP
#define CPSAGREE_CLI_HPP

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cpsagree/agreement.hpp"
#include "cpsagree/assumptions.hpp"
#include "cpsagree/augmentation.hpp"
#include "cpsagree/cps.hpp"
#include "cpsagree/epistemic.hpp"
#include "cpsagree/instance_io.hpp"
#include "cpsagree/renyi.hpp"
#include "cpsagree/report.hpp"

namespace cpsagree::cli {

inline constexpr const char* kVersion = "0.1.0";

enum ExitCode : int { kOk = 0, kUsage = 1, kInvalidInstance = 2, kDisagreement = 3 };

namespace detail {

struct UsageError {
  std::string message;
};

struct InvalidInstance {
  std::string message;
  std::string report;  // already rendered; may be empty
};

struct Args {
  std::string format = "text";
  std::string file;
  std::string agent;
  std::optional<std::string> event;
  std::optional<std::string> qa;
  std::optional<std::string> qb;
  std::optional<std::string> omega;
  std::string output;
  std::size_t states = 4;
  std::uint64_t seed = 1;
  std::size_t trials = 100;
  std::string drop;
  std::size_t threads = 1;
  bool independent = false;
  std::string witness_dir;
};

/// "a,b", "{a,b}", "" and "{}" are all accepted.
inline Event parse_event(const StateSpace& sp, std::string text) {
  text.erase(std::remove_if(text.begin(), text.end(), [](char c) { return c == ' '; }), text.end());
  if (!text.empty() && text.front() == '{') {
    if (text.back() != '}') throw UsageError{"unbalanced braces in event '" + text + "'"};
    text = text.substr(1, text.size() - 2);
  }
  Event e;
  std::stringstream ss(text);
  std::string label;
  while (std::getline(ss, label, ',')) {
    if (label.empty()) continue;
    auto i = sp.find(label);
    if (!i) throw UsageError{"unknown state label '" + label + "' in --event"};
    e = e.with(*i);
  }
  return e;
}

inline Rational parse_q(const std::string& text, const char* flag) {
  try {
    return Rational::parse(text);
  } catch (const Error& e) {
    throw UsageError{std::string(flag) + ": " + e.what()};
  }
}

inline InstanceFile load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError{"cannot read instance file '" + path + "'"};
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  try {
    return parse_instance(text);
  } catch (const Error& e) {
    throw InvalidInstance{path + ": " + e.what(), {}};
  }
}

struct AgentValidation {
  std::string name;
  std::optional<ValidationReport> report;
  std::string structure_error;
  bool ok() const { return structure_error.empty() && report && report->valid(); }
};

inline std::vector<AgentValidation> validate_all(const InstanceFile& f) {
  std::vector<AgentValidation> out;
  for (const auto& a : f.agents) {
    AgentValidation v{a.name, std::nullopt, {}};
    try {
      v.report = validate(a.cps);
    } catch (const Error& e) {
      v.structure_error = e.what();
    }
    out.push_back(std::move(v));
  }
  return out;
}

inline std::string render_validation(const InstanceFile& f, const std::vector<AgentValidation>& vs, bool json) {
  if (json) {
    report::oj agents = report::oj::object();
    for (const auto& v : vs) {
      if (!v.structure_error.empty())
        agents[v.name] = report::oj{{"valid", false}, {"structure_error", v.structure_error}, {"violations", report::oj::array()}};
      else
        agents[v.name] = report::validation(f.space, *v.report);
    }
    return report::oj{{"command", "validate"}, {"agents", agents}}.dump(2) + "\n";
  }
  std::ostringstream o;
  for (const auto& v : vs) {
    if (!v.structure_error.empty()) {
      o << "agent " << v.name << ": INVALID " << v.structure_error << "\n";
    } else if (v.report->valid()) {
      o << "agent " << v.name << ": valid\n";
    } else {
      o << "agent " << v.name << ": INVALID\n";
      for (const auto& viol : v.report->violations) o << "  " << viol.describe(f.space) << "\n";
    }
  }
  return o.str();
}

inline InstanceFile load_valid(const std::string& path, bool json) {
  InstanceFile f = load(path);
  auto vs = validate_all(f);
  for (const auto& v : vs)
    if (!v.ok()) throw InvalidInstance{path + ": agent " + v.name + " is not a valid CPS", render_validation(f, vs, json)};
  return f;
}

inline const Cps& pick_agent(const InstanceFile& f, const std::string& name) {
  if (name.empty()) throw UsageError{"--agent is required"};
  for (const auto& a : f.agents)
    if (a.name == name) return a.cps;
  throw UsageError{"no agent named '" + name + "' in the instance"};
}

inline std::pair<const Cps*, const Cps*> two_agents(const InstanceFile& f) {
  if (f.agents.size() < 2) throw InvalidInstance{"this command needs two agents; the instance has " + std::to_string(f.agents.size()), {}};
  return {&f.agents[0].cps, &f.agents[1].cps};
}

struct ResolvedQuery {
  Event event;
  Rational qa, qb;
  std::optional<StateIndex> omega;
};

inline ResolvedQuery resolve(const InstanceFile& f, const Args& a, bool need_omega) {
  ResolvedQuery q;
  const auto& fq = f.query;
  if (a.event)
    q.event = parse_event(f.space, *a.event);
  else if (fq)
    q.event = fq->event;
  else
    throw UsageError{"no event: pass --event or add a query to the instance"};
  if (a.qa)
    q.qa = parse_q(*a.qa, "--qA");
  else if (fq)
    q.qa = fq->qa;
  else
    throw UsageError{"no qA: pass --qA or add a query to the instance"};
  if (a.qb)
    q.qb = parse_q(*a.qb, "--qB");
  else if (fq)
    q.qb = fq->qb;
  else
    throw UsageError{"no qB: pass --qB or add a query to the instance"};
  if (a.omega) {
    auto i = f.space.find(*a.omega);
    if (!i) throw UsageError{"unknown state label '" + *a.omega + "' in --omega"};
    q.omega = *i;
  } else if (fq && fq->omega) {
    q.omega = fq->omega;
  }
  if (need_omega && !q.omega) throw UsageError{"no state: pass --omega or set query.omega in the instance"};
  return q;
}

inline std::string cmd_atoms(const Args& a, bool json) {
  InstanceFile f = load_valid(a.file, json);
  const Cps& c = pick_agent(f, a.agent);
  const StateSpace& sp = f.space;
  if (json) {
    report::oj by_state = report::oj::object();
    for (StateIndex s = 0; s < sp.size(); ++s) by_state[sp.label(s)] = report::event(sp, c.atom(s));
    report::oj algebra = report::oj::array();
    for (Event h : algebra_atoms(c.family())) algebra.push_back(report::event(sp, h));
    return report::oj{{"command", "atoms"}, {"agent", a.agent}, {"atoms", by_state}, {"algebra_atoms", algebra}}.dump(2) + "\n";
  }
  std::ostringstream o;
  o << "atoms of agent " << a.agent << "\n";
  for (StateIndex s = 0; s < sp.size(); ++s) o << "  m(" << sp.label(s) << ") = " << sp.format(c.atom(s)) << "\n";
  return o.str();
}

inline std::string cmd_certainty(const Args& a, bool json) {
  InstanceFile f = load_valid(a.file, json);
  const Cps& c = pick_agent(f, a.agent);
  if (!a.event) throw UsageError{"--event is required"};
  Event e = parse_event(f.space, *a.event);
  const StateSpace& sp = f.space;
  std::vector<Rational> b = beliefs(c, e);
  Event ce = certainty_event(c, e);
  Event ke = knowledge_event(c, e);
  if (json)
    return report::oj{{"command", "certainty"},      {"agent", a.agent},
                      {"event", report::event(sp, e)}, {"beliefs", report::rationals(sp, b)},
                      {"certainty", report::event(sp, ce)}, {"knowledge", report::event(sp, ke)}}
               .dump(2) + "\n";
  std::ostringstream o;
  o << "agent " << a.agent << ", E = " << sp.format(e) << "\n";
  for (StateIndex s = 0; s < sp.size(); ++s) o << "  p_m(" << sp.label(s) << ")(E) = " << b[s].to_string() << "\n";
  o << "  C(E) = " << sp.format(ce) << "\n";
  o << "  K(E) = " << sp.format(ke) << "\n";
  return o.str();
}

inline std::string cmd_recursion(const Args& a, bool json, RecursionKind kind) {
  InstanceFile f = load_valid(a.file, json);
  auto [ca, cb] = two_agents(f);
  ResolvedQuery q = resolve(f, a, false);
  RecursionTrace t = kind == RecursionKind::Certainty ? common_certainty(*ca, *cb, q.event, q.qa, q.qb)
                                                       : common_knowledge(*ca, *cb, q.event, q.qa, q.qb);
  const StateSpace& sp = f.space;
  const char* name = kind == RecursionKind::Certainty ? "common-certainty" : "common-knowledge";
  if (json) {
    report::oj j{{"command", name}, {"event", report::event(sp, q.event)}, {"qA", q.qa.to_string()}, {"qB", q.qb.to_string()}};
    j["trace"] = report::trace(sp, t);
    if (q.omega) j["omega_in_limit"] = t.limit.contains(*q.omega);
    return j.dump(2) + "\n";
  }
  std::ostringstream o;
  o << (kind == RecursionKind::Certainty ? "common certainty" : "common knowledge") << " of " << sp.format(q.event)
    << " with qA = " << q.qa.to_string() << ", qB = " << q.qb.to_string() << "\n";
  o << report::text_trace(sp, t);
  if (q.omega) o << "  " << sp.label(*q.omega) << " in limit: " << report::yes_no(t.limit.contains(*q.omega)) << "\n";
  return o.str();
}

inline std::string cmd_assumptions(const Args& a, bool json) {
  InstanceFile f = load_valid(a.file, json);
  auto [ca, cb] = two_agents(f);
  AssumptionReport r = assess(*ca, *cb);
  const StateSpace& sp = f.space;
  if (json) {
    report::oj j = report::assumptions(sp, r);
    j["command"] = "assumptions";
    return j.dump(2) + "\n";
  }
  std::ostringstream o;
  o << "A: " << report::text_reflection(sp, r.a.reflection) << "\n   " << report::text_one_closed(sp, r.a.one_closed) << "\n";
  o << "B: " << report::text_reflection(sp, r.b.reflection) << "\n   " << report::text_one_closed(sp, r.b.one_closed) << "\n";
  for (StateIndex s = 0; s < sp.size(); ++s) {
    o << "local consistency at " << sp.label(s) << ": " << report::text_consistency(sp, r.local_consistency[s]) << "\n";
    if (!r.shared_consistency[s].holds)
      o << "  shared-event consistency at " << sp.label(s) << ": " << report::text_consistency(sp, r.shared_consistency[s]) << "\n";
  }
  return o.str();
}

inline std::string cmd_augment(const Args& a, bool json) {
  InstanceFile f = load_valid(a.file, json);
  const Cps& c = pick_agent(f, a.agent);
  AugmentationResult r = extend(c);
  InstanceFile out = f;
  for (auto& ag : out.agents)
    if (ag.name == a.agent) ag.cps = r.extended_cps;
  out.comment = "agent " + a.agent + " extended to its 1-augmented family; cpsagree " + kVersion;
  std::string doc = serialize_instance(out);
  const StateSpace& sp = f.space;

  if (!a.output.empty()) {
    std::ofstream file(a.output, std::ios::binary);
    if (!file) throw UsageError{"cannot write '" + a.output + "'"};
    file << doc;
  }
  if (json) {
    report::oj j{{"command", "augment"}, {"agent", a.agent}};
    j["augmentation"] = report::augmentation(sp, r);
    if (!a.output.empty())
      j["written"] = a.output;
    else
      j["instance"] = instance_json(out);
    return j.dump(2) + "\n";
  }
  if (a.output.empty()) return doc;
  std::ostringstream o;
  o << "agent " << a.agent << ": family of " << c.family().size() << " members augmented to "
    << r.augmented_family.size() << "\n";
  for (std::size_t i = 0; i < r.atoms.size(); ++i)
    o << "  atom " << sp.format(r.atoms[i]) << " dimension " << r.dimensions[i] << "\n";
  o << "wrote " << a.output << "\n";
  return o.str();
}

inline std::string cmd_represent(const Args& a, bool json) {
  InstanceFile f = load_valid(a.file, json);
  const Cps& c = pick_agent(f, a.agent);
  DimOrderedFamily dof = represent(c);
  const StateSpace& sp = f.space;
  if (json) {
    report::oj j = report::representation(c, dof);
    j["command"] = "represent";
    j["agent"] = a.agent;
    return j.dump(2) + "\n";
  }
  std::ostringstream o;
  o << "agent " << a.agent << ": " << dof.levels.size() << " levels, most dominated first\n";
  o << report::text_levels(sp, dof);
  for (Event g : c.family()) o << "  " << sp.format(g) << " active at level " << *active_level(dof, g) << "\n";
  return o.str();
}

inline std::string cmd_agree(const Args& a, bool json, RecursionKind kind, int& code) {
  InstanceFile f = load_valid(a.file, json);
  auto [ca, cb] = two_agents(f);
  ResolvedQuery q = resolve(f, a, true);
  AgreementReport r = kind == RecursionKind::Certainty ? check_agreement(*ca, *cb, q.event, *q.omega, q.qa, q.qb)
                                                        : check_knowledge_agreement(*ca, *cb, q.event, *q.omega, q.qa, q.qb);
  if (r.verdict == Verdict::DisagreementUnderHypotheses) code = kDisagreement;
  if (json) {
    report::oj j = report::agreement(f.space, r);
    j["command"] = kind == RecursionKind::Certainty ? "agree" : "agree-knowledge";
    return j.dump(2) + "\n";
  }
  return report::text_agreement(f.space, r);
}

inline std::string cmd_search(const Args& a, bool json, int& code) {
  GeneratorConfig config;
  config.state_count = a.states;
  config.seed = a.seed;
  config.trials = a.trials;
  config.shared_lexicographic = !a.independent;
  if (!a.drop.empty()) {
    config.drop = parse_hypothesis(a.drop);
    if (!config.drop) throw UsageError{"--drop must be reflection, one_closed or consistency"};
  }
  SearchReport r;
  try {
    r = search_counterexamples(config, a.threads);
  } catch (const Error& e) {
    if (e.code() == Errc::ConfigError) throw UsageError{e.what()};
    throw;
  }
  if (r.counts.disagreements_under_hypotheses + r.counts.knowledge_disagreements > 0) code = kDisagreement;
  if (!a.witness_dir.empty()) {
    std::filesystem::create_directories(a.witness_dir);
    for (std::size_t i = 0; i < r.witnesses.size(); ++i) {
      const auto& w = r.witnesses[i];
      std::ofstream file(std::filesystem::path(a.witness_dir) /
                         ("witness_" + std::to_string(i) + "_trial" + std::to_string(w.trial) + ".json"));
      file << serialize_instance(report::witness_instance(w, config));
    }
  }
  if (json) {
    report::oj j{{"command", "search"}};
    j.update(report::search(r));
    return j.dump(2) + "\n";
  }
  return report::text_search(r);
}

}  // namespace detail

/// Runs one command line (without the program name). Reports go to `out`,
/// diagnostics to `err`.
inline int run_command(const std::vector<std::string>& argv, std::ostream& out, std::ostream& err) {
  using namespace detail;
  Args a;
  CLI::App app{"Exact conditional probability spaces: certainty, knowledge and agreement checks", "cpsagree"};
  app.fallthrough();
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);
  app.add_option("--format", a.format, "Report format")->check(CLI::IsMember({"text", "json"}));

  auto with_file = [&](CLI::App* sub) { sub->add_option("file", a.file, "Instance file")->required(); };
  auto with_agent = [&](CLI::App* sub) { sub->add_option("--agent", a.agent, "Agent name")->required(); };
  auto with_query = [&](CLI::App* sub) {
    sub->add_option("--event", a.event, "Event as comma-separated labels (default: query.event)");
    sub->add_option("--qA", a.qa, "Posited probability for A (default: query.qA)");
    sub->add_option("--qB", a.qb, "Posited probability for B (default: query.qB)");
    sub->add_option("--omega", a.omega, "State label (default: query.omega)");
  };

  auto* validate_cmd = app.add_subcommand("validate", "Check every agent is a valid CPS");
  with_file(validate_cmd);
  auto* atoms_cmd = app.add_subcommand("atoms", "Atom of each state");
  with_file(atoms_cmd);
  with_agent(atoms_cmd);
  auto* certainty_cmd = app.add_subcommand("certainty", "Beliefs, certainty and knowledge of an event");
  with_file(certainty_cmd);
  with_agent(certainty_cmd);
  certainty_cmd->add_option("--event", a.event, "Event as comma-separated labels")->required();
  auto* cc_cmd = app.add_subcommand("common-certainty", "Common certainty recursion");
  with_file(cc_cmd);
  with_query(cc_cmd);
  auto* ck_cmd = app.add_subcommand("common-knowledge", "Common knowledge recursion");
  with_file(ck_cmd);
  with_query(ck_cmd);
  auto* assumptions_cmd = app.add_subcommand("assumptions", "Reflection, 1-closedness and local consistency");
  with_file(assumptions_cmd);
  auto* augment_cmd = app.add_subcommand("augment", "Extend an agent to its 1-augmented family");
  with_file(augment_cmd);
  with_agent(augment_cmd);
  augment_cmd->add_option("-o,--output", a.output, "Write the extended instance here");
  auto* represent_cmd = app.add_subcommand("represent", "Dimensionally ordered representation");
  with_file(represent_cmd);
  with_agent(represent_cmd);
  auto* agree_cmd = app.add_subcommand("agree", "Agreement check under common certainty");
  with_file(agree_cmd);
  with_query(agree_cmd);
  auto* agree_k_cmd = app.add_subcommand("agree-knowledge", "Agreement check under common knowledge");
  with_file(agree_k_cmd);
  with_query(agree_k_cmd);
  auto* search_cmd = app.add_subcommand("search", "Search generated instances for counterexamples");
  search_cmd->add_option("--states", a.states, "State count")->required();
  search_cmd->add_option("--seed", a.seed, "Seed")->required();
  search_cmd->add_option("--trials", a.trials, "Trial count")->required();
  search_cmd->add_option("--drop", a.drop, "Hypothesis to violate: reflection, one_closed or consistency");
  search_cmd->add_option("--threads", a.threads, "Worker threads");
  search_cmd->add_flag("--independent", a.independent, "Draw a separate level sequence per agent");
  search_cmd->add_option("--witness-dir", a.witness_dir, "Write witnesses as instance files here");

  try {
    std::vector<std::string> rev(argv.rbegin(), argv.rend());
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e, out, err);
    return rc == 0 ? kOk : kUsage;
  }

  const bool json = a.format == "json";
  int code = kOk;
  try {
    std::string text;
    if (validate_cmd->parsed()) {
      InstanceFile f = load(a.file);
      auto vs = validate_all(f);
      text = render_validation(f, vs, json);
      for (const auto& v : vs)
        if (!v.ok()) code = kInvalidInstance;
    } else if (atoms_cmd->parsed()) {
      text = cmd_atoms(a, json);
    } else if (certainty_cmd->parsed()) {
      text = cmd_certainty(a, json);
    } else if (cc_cmd->parsed()) {
      text = cmd_recursion(a, json, RecursionKind::Certainty);
    } else if (ck_cmd->parsed()) {
      text = cmd_recursion(a, json, RecursionKind::Knowledge);
    } else if (assumptions_cmd->parsed()) {
      text = cmd_assumptions(a, json);
    } else if (augment_cmd->parsed()) {
      text = cmd_augment(a, json);
    } else if (represent_cmd->parsed()) {
      text = cmd_represent(a, json);
    } else if (agree_cmd->parsed()) {
      text = cmd_agree(a, json, RecursionKind::Certainty, code);
    } else if (agree_k_cmd->parsed()) {
      text = cmd_agree(a, json, RecursionKind::Knowledge, code);
    } else if (search_cmd->parsed()) {
      text = cmd_search(a, json, code);
    }
    out << text;
    return code;
  } catch (const UsageError& e) {
    err << "usage error: " << e.message << "\n";
    return kUsage;
  } catch (const InvalidInstance& e) {
    out << e.report;
    err << "invalid instance: " << e.message << "\n";
    return kInvalidInstance;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kInvalidInstance;
  }
}

}  // namespace cpsagree::cli

#endif  // CPSAGREE_CLI_HPP
