#ifndef CPSAGREE_REPORT_HPP
#define CPSAGREE_REPORT_HPP

#include <cstddef>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "cpsagree/agreement.hpp"
#include "cpsagree/assumptions.hpp"
#include "cpsagree/augmentation.hpp"
#include "cpsagree/cps.hpp"
#include "cpsagree/epistemic.hpp"
#include "cpsagree/instance_io.hpp"
#include "cpsagree/renyi.hpp"

// Machine (JSON) and human (text) renderings of every report type.

namespace cpsagree::report {

using oj = nlohmann::ordered_json;

inline oj event(const StateSpace& sp, Event e) { return io_detail::event_json(sp, e); }

inline oj measure(const StateSpace& sp, const ProbMeasure& m) {
  oj out = oj::object();
  for (StateIndex s = 0; s < sp.size(); ++s)
    if (!m.weight(s).is_zero()) out[sp.label(s)] = m.weight(s).to_string();
  return out;
}

inline oj rationals(const StateSpace& sp, const std::vector<Rational>& v) {
  oj out = oj::object();
  for (StateIndex s = 0; s < sp.size(); ++s) out[sp.label(s)] = v[s].to_string();
  return out;
}

inline oj validation(const StateSpace& sp, const ValidationReport& r) {
  oj vs = oj::array();
  for (const auto& v : r.violations) {
    oj j{{"kind", v.kind == ViolationKind::ChainRule       ? "chain_rule"
                  : v.kind == ViolationKind::Concentration ? "concentration"
                                                           : "not_probability"},
         {"message", v.describe(sp)}};
    if (v.kind == ViolationKind::ChainRule) {
      j["E"] = event(sp, v.e);
      j["F"] = event(sp, v.f);
    }
    j["G"] = event(sp, v.g);
    j["lhs"] = v.lhs.to_string();
    j["rhs"] = v.rhs.to_string();
    vs.push_back(j);
  }
  return oj{{"valid", r.valid()}, {"violations", vs}};
}

inline oj trace(const StateSpace& sp, const RecursionTrace& t) {
  oj levels = oj::array();
  for (std::size_t n = 0; n < t.levels.size(); ++n)
    levels.push_back(oj{{"n", n}, {"A", event(sp, t.levels[n].first)}, {"B", event(sp, t.levels[n].second)}});
  return oj{{"kind", t.kind == RecursionKind::Certainty ? "certainty" : "knowledge"},
            {"levels", levels},
            {"stabilized_at", t.stabilized_at},
            {"limit", event(sp, t.limit)}};
}

inline oj reflection(const StateSpace& sp, const ReflectionResult& r) {
  oj j{{"holds", r.holds}, {"checker", checker_name(r.checker)}};
  if (r.witness)
    j["witness"] = oj{{"event", event(sp, r.witness->event)},
                      {"state", sp.label(r.witness->state)},
                      {"belief", r.witness->belief.to_string()},
                      {"fiber", event(sp, r.witness->fiber)},
                      {"fiber_prob", r.witness->fiber_prob.to_string()}};
  return j;
}

inline oj one_closed(const StateSpace& sp, const OneClosedResult& r) {
  oj j{{"holds", r.holds}};
  if (r.witness) j["witness"] = event(sp, *r.witness);
  return j;
}

inline oj consistency(const StateSpace& sp, const ConsistencyResult& r) {
  oj j{{"holds", r.holds}, {"event", event(sp, r.event)}};
  if (r.witness)
    j["witness"] = oj{{"state", sp.label(r.witness->state)},
                      {"measure_A", measure(sp, r.witness->measure_a)},
                      {"measure_B", measure(sp, r.witness->measure_b)}};
  return j;
}

inline oj agent_assumptions(const StateSpace& sp, const AgentAssumptions& a) {
  return oj{{"reflection", reflection(sp, a.reflection)}, {"one_closed", one_closed(sp, a.one_closed)}};
}

inline oj assumptions(const StateSpace& sp, const AssumptionReport& r) {
  oj local = oj::object(), shared = oj::object();
  for (StateIndex s = 0; s < sp.size(); ++s) {
    local[sp.label(s)] = consistency(sp, r.local_consistency[s]);
    shared[sp.label(s)] = consistency(sp, r.shared_consistency[s]);
  }
  return oj{{"A", agent_assumptions(sp, r.a)},
            {"B", agent_assumptions(sp, r.b)},
            {"local_consistency", local},
            {"shared_consistency", shared}};
}

inline oj agreement(const StateSpace& sp, const AgreementReport& r) {
  oj j;
  j["kind"] = r.kind == RecursionKind::Certainty ? "certainty" : "knowledge";
  j["event"] = event(sp, r.event);
  j["omega"] = sp.label(r.omega);
  j["qA"] = r.qa.to_string();
  j["qB"] = r.qb.to_string();
  oj hyp;
  if (r.agent_a) hyp["A"] = agent_assumptions(sp, *r.agent_a);
  if (r.agent_b) hyp["B"] = agent_assumptions(sp, *r.agent_b);
  hyp["local_consistency"] = consistency(sp, r.local_consistency);
  hyp["shared_consistency"] = consistency(sp, r.shared_consistency);
  j["hypotheses"] = hyp;
  j["trace"] = trace(sp, r.trace);
  j["omega_in_limit"] = r.omega_in_limit;
  j["verdict"] = verdict_name(r.verdict);
  j["failed_hypothesis"] = r.failed ? oj(hypothesis_name(*r.failed)) : oj(nullptr);
  return j;
}

inline oj levels(const StateSpace& sp, const DimOrderedFamily& dof) {
  oj ls = oj::array();
  for (const auto& level : dof.levels) {
    oj l = oj::object();
    for (StateIndex s = 0; s < sp.size(); ++s) l[sp.label(s)] = level.value(s).to_string();
    ls.push_back(l);
  }
  return oj{{"has_bottom_level", dof.has_bottom_level}, {"levels", ls}};
}

inline oj representation(const Cps& cps, const DimOrderedFamily& dof) {
  const StateSpace& sp = cps.space();
  oj active = oj::array();
  for (Event g : cps.family()) active.push_back(oj{{"given", event(sp, g)}, {"level", *active_level(dof, g)}});
  oj j = levels(sp, dof);
  j["active"] = active;
  return j;
}

inline oj augmentation(const StateSpace& sp, const AugmentationResult& r) {
  oj fam = oj::array();
  for (Event g : r.augmented_family) fam.push_back(event(sp, g));
  oj atoms = oj::array();
  for (std::size_t i = 0; i < r.atoms.size(); ++i) {
    oj a{{"atom", event(sp, r.atoms[i])}, {"dimension", r.dimensions[i]}};
    a["witness"] = r.witnesses[i] ? event(sp, *r.witnesses[i]) : oj(nullptr);
    atoms.push_back(a);
  }
  return oj{{"augmented_family", fam},
            {"algebra_atoms", atoms},
            {"extended_levels", levels(sp, r.extended_levels)},
            {"no_new_ones", verify_no_new_ones(r).holds},
            {"idempotent", verify_idempotent(r)}};
}

inline oj counts(const SearchCounts& c) {
  return oj{{"hypothesis_instances", c.hypothesis_instances},
            {"candidates", c.candidates},
            {"candidates_under_hypotheses", c.candidates_under_hypotheses},
            {"disagreements_under_hypotheses", c.disagreements_under_hypotheses},
            {"common_certainty_disagreements", c.common_certainty_disagreements},
            {"knowledge_candidates", c.knowledge_candidates},
            {"knowledge_disagreements", c.knowledge_disagreements},
            {"certainty_to_knowledge_cases", c.certainty_to_knowledge_cases},
            {"certainty_without_knowledge", c.certainty_without_knowledge},
            {"knowledge_outside_certainty", c.knowledge_outside_certainty}};
}

inline InstanceFile witness_instance(const SearchWitness& w, const GeneratorConfig& c) {
  InstanceFile f = make_instance(w.a, w.b,
                                 std::string(finding_name(w.kind)) + " found by search: states " +
                                     std::to_string(c.state_count) + ", seed " + std::to_string(c.seed) +
                                     ", trial " + std::to_string(w.trial));
  f.query = Query{w.event, w.qa, w.qb, w.omega};
  return f;
}

inline oj search(const SearchReport& r) {
  oj ws = oj::array();
  for (const auto& w : r.witnesses) {
    oj j{{"trial", w.trial}, {"kind", finding_name(w.kind)}, {"defect", is_defect(w.kind)}};
    j["failed_hypothesis"] = w.failed ? oj(hypothesis_name(*w.failed)) : oj(nullptr);
    j["instance"] = instance_json(witness_instance(w, r.config));
    ws.push_back(j);
  }
  return oj{{"states", r.config.state_count},
            {"seed", r.config.seed},
            {"trials", r.trials},
            {"shared_lexicographic", r.config.shared_lexicographic},
            {"drop", r.config.drop ? oj(hypothesis_name(*r.config.drop)) : oj(nullptr)},
            {"counts", counts(r.counts)},
            {"defects", r.defects()},
            {"witnesses", ws}};
}

// ---------------------------------------------------------------------------
// Text

inline std::string yes_no(bool b) { return b ? "yes" : "no"; }

inline std::string text_trace(const StateSpace& sp, const RecursionTrace& t) {
  std::ostringstream o;
  const char* op = t.kind == RecursionKind::Certainty ? "" : "K";
  for (std::size_t n = 0; n < t.levels.size(); ++n)
    o << "  A" << op << "^" << n << " = " << sp.format(t.levels[n].first) << "   B" << op << "^" << n << " = "
      << sp.format(t.levels[n].second) << "\n";
  o << "  stabilized at n = " << t.stabilized_at << "\n";
  o << "  limit " << sp.format(t.limit) << "\n";
  return o.str();
}

inline std::string text_measure(const StateSpace& sp, const ProbMeasure& m) {
  std::string out = "(";
  bool first = true;
  for (StateIndex s = 0; s < sp.size(); ++s) {
    if (m.weight(s).is_zero()) continue;
    if (!first) out += ", ";
    out += sp.label(s) + ":" + m.weight(s).to_string();
    first = false;
  }
  return out + ")";
}

inline std::string text_reflection(const StateSpace& sp, const ReflectionResult& r) {
  std::string out = "reflection " + std::string(r.holds ? "holds" : "FAILS") + " [" + checker_name(r.checker) + "]";
  if (r.witness)
    out += ": at " + sp.label(r.witness->state) + " belief in " + sp.format(r.witness->event) + " is " +
           r.witness->belief.to_string() + " but the fiber " + sp.format(r.witness->fiber) + " has probability " +
           r.witness->fiber_prob.to_string();
  return out;
}

inline std::string text_one_closed(const StateSpace& sp, const OneClosedResult& r) {
  std::string out = "1-closed " + std::string(r.holds ? "yes" : "NO");
  if (r.witness) out += ": " + sp.format(*r.witness) + " has probability one but is not a conditioning event";
  return out;
}

inline std::string text_consistency(const StateSpace& sp, const ConsistencyResult& r) {
  std::string out = (r.holds ? "holds" : "FAILS") + std::string(" on ") + sp.format(r.event);
  if (r.witness)
    out += ": A " + text_measure(sp, r.witness->measure_a) + " vs B " + text_measure(sp, r.witness->measure_b);
  return out;
}

inline std::string text_agreement(const StateSpace& sp, const AgreementReport& r) {
  std::ostringstream o;
  o << (r.kind == RecursionKind::Certainty ? "common certainty" : "common knowledge") << " of "
    << sp.format(r.event) << " with qA = " << r.qa.to_string() << ", qB = " << r.qb.to_string() << ", at "
    << sp.label(r.omega) << "\n";
  if (r.agent_a) o << "A: " << text_reflection(sp, r.agent_a->reflection) << "; " << text_one_closed(sp, r.agent_a->one_closed) << "\n";
  if (r.agent_b) o << "B: " << text_reflection(sp, r.agent_b->reflection) << "; " << text_one_closed(sp, r.agent_b->one_closed) << "\n";
  o << "local consistency " << text_consistency(sp, r.local_consistency) << "\n";
  o << "shared-event consistency " << text_consistency(sp, r.shared_consistency) << "\n";
  o << text_trace(sp, r.trace);
  o << "omega in limit: " << yes_no(r.omega_in_limit) << "\n";
  o << "verdict: " << r.verdict_text() << "\n";
  return o.str();
}

inline std::string text_levels(const StateSpace& sp, const DimOrderedFamily& dof) {
  std::ostringstream o;
  for (std::size_t k = 0; k < dof.levels.size(); ++k) {
    o << "  level " << k << (dof.has_bottom_level && k == 0 ? " (bottom)" : "") << ":";
    for (StateIndex s = 0; s < sp.size(); ++s) o << " " << sp.label(s) << "=" << dof.levels[k].value(s).to_string();
    o << "\n";
  }
  return o.str();
}

inline std::string text_search(const SearchReport& r) {
  std::ostringstream o;
  const auto& c = r.counts;
  o << "search: " << r.trials << " trials, " << r.config.state_count << " states, seed " << r.config.seed
    << ", drop " << (r.config.drop ? hypothesis_name(*r.config.drop) : "none") << "\n";
  o << "  instances satisfying all hypotheses  " << c.hypothesis_instances << "\n";
  o << "  candidates                           " << c.candidates << "\n";
  o << "  candidates under hypotheses          " << c.candidates_under_hypotheses << "\n";
  o << "  DISAGREEMENT_UNDER_HYPOTHESES        " << c.disagreements_under_hypotheses << "\n";
  o << "  common-certainty disagreements       " << c.common_certainty_disagreements << "\n";
  o << "  knowledge candidates                 " << c.knowledge_candidates << "\n";
  o << "  knowledge disagreements              " << c.knowledge_disagreements << "\n";
  o << "  certainty-to-knowledge cases         " << c.certainty_to_knowledge_cases << "\n";
  o << "  certainty without knowledge          " << c.certainty_without_knowledge << "\n";
  o << "  knowledge outside certainty          " << c.knowledge_outside_certainty << "\n";
  for (const auto& w : r.witnesses) {
    const StateSpace& sp = w.a.space();
    o << "  trial " << w.trial << ": " << finding_name(w.kind) << " E=" << sp.format(w.event) << " qA=" << w.qa.to_string()
      << " qB=" << w.qb.to_string() << " at " << sp.label(w.omega);
    if (w.failed) o << " (" << hypothesis_name(*w.failed) << " fails)";
    o << "\n";
  }
  return o.str();
}

}  // namespace cpsagree::report

#endif  // CPSAGREE_REPORT_HPP
