#ifndef CPSAGREE_ASSUMPTIONS_HPP
#define CPSAGREE_ASSUMPTIONS_HPP

#include <cstddef>
#include <optional>
#include <vector>

#include "cpsagree/cps.hpp"
#include "cpsagree/error.hpp"
#include "cpsagree/event.hpp"
#include "cpsagree/rational.hpp"
#include "cpsagree/set_family.hpp"

namespace cpsagree {

/// Above this many states the direct reflection scan refuses to run unless
/// forced; it enumerates every event.
inline constexpr std::size_t kDirectReflectionCap = 16;

enum class ReflectionChecker { Direct, AtomCharacterization };

inline const char* checker_name(ReflectionChecker c) {
  return c == ReflectionChecker::Direct ? "direct" : "atom-characterization";
}

/// At `state` the agent assigns `belief` to `event`, yet puts probability
/// below one on `fiber`, the set of states sharing that belief.
struct ReflectionWitness {
  Event event;
  StateIndex state = 0;
  Rational belief;
  Event fiber;
  Rational fiber_prob;
};

struct ReflectionResult {
  bool holds = true;
  std::optional<ReflectionWitness> witness;
  ReflectionChecker checker = ReflectionChecker::Direct;
};

struct OneClosedResult {
  bool holds = true;
  std::optional<Event> witness;  // a probability-one event outside the family
};

struct ConsistencyWitness {
  StateIndex state = 0;  // a state where the two measures differ
  ProbMeasure measure_a;
  ProbMeasure measure_b;
};

struct ConsistencyResult {
  bool holds = true;
  Event event;  // the conditioning event on which the measures were compared
  std::optional<ConsistencyWitness> witness;
};

/// {E : support(p_G) ⊆ E ⊆ G for some G}. For a probability measure,
/// p_G(E) = 1 exactly when E contains the support.
inline SetFamily certain_events(const Cps& cps) {
  std::vector<Event> out;
  const auto& members = cps.family().members();
  for (std::size_t i = 0; i < members.size(); ++i) {
    Event g = members[i];
    Event supp = cps.support(g);
    if (supp.empty() || !supp.subset_of(g)) continue;
    (g - supp).for_each_subset([&](Event extra) { out.push_back(supp | extra); });
  }
  return SetFamily(cps.state_count(), std::move(out));
}

inline OneClosedResult check_one_closed(const Cps& cps) {
  OneClosedResult r;
  for (Event e : certain_events(cps))
    if (!cps.family().contains(e)) {
      r.holds = false;
      r.witness = e;
      break;
    }
  return r;
}

namespace detail {

inline std::optional<ReflectionWitness> reflection_failure(const Cps& cps, Event e, const std::vector<Rational>& belief,
                                                           StateIndex s) {
  Event fiber = belief_fiber(belief, belief[s]);
  if (cps.support_at(s).subset_of(fiber)) return std::nullopt;
  return ReflectionWitness{e, s, belief[s], fiber, cps.measure_at(s).eval(fiber)};
}

}  // namespace detail

/// Scans every event E and state ω: with q = p_{m(ω)}(E), the agent must be
/// certain at ω of the fiber {ω' : p_{m(ω')}(E) = q}.
inline ReflectionResult check_reflection_direct(const Cps& cps, bool force = false) {
  if (cps.state_count() > kDirectReflectionCap && !force)
    throw Error(Errc::TooLarge, "direct reflection check enumerates 2^|Ω| events; pass force to run it anyway");
  ReflectionResult r;
  r.checker = ReflectionChecker::Direct;
  const std::size_t n = cps.state_count();
  cps.space().full().for_each_subset([&](Event e) {
    if (!r.holds) return;
    std::vector<Rational> belief = beliefs(cps, e);
    for (StateIndex s = 0; s < n; ++s)
      if (auto w = detail::reflection_failure(cps, e, belief, s)) {
        r.holds = false;
        r.witness = std::move(w);
        return;
      }
  });
  return r;
}

/// Atom characterization, valid for 1-closed CPSs only: reflection holds iff
/// p_{m(ω)}(m) = 1 for every atom m strictly inside m(ω). A failure at (m, ω)
/// is also a failure of the direct definition with E = m.
inline ReflectionResult check_reflection_atoms(const Cps& cps) {
  if (!check_one_closed(cps).holds)
    throw Error(Errc::NotOneClosed, "atom characterization of reflection requires a 1-closed CPS");
  ReflectionResult r;
  r.checker = ReflectionChecker::AtomCharacterization;
  const auto& atoms = cps.atoms();
  for (StateIndex s = 0; s < cps.state_count(); ++s)
    for (Event inner : atoms) {
      if (!inner.proper_subset_of(atoms[s])) continue;
      if (cps.support_at(s).subset_of(inner)) continue;
      std::vector<Rational> belief = beliefs(cps, inner);
      Event fiber = belief_fiber(belief, belief[s]);
      r.holds = false;
      r.witness = ReflectionWitness{inner, s, belief[s], fiber, cps.measure_at(s).eval(fiber)};
      return r;
    }
  return r;
}

/// Picks the atom checker when the CPS is 1-closed, else the direct scan.
inline ReflectionResult check_reflection(const Cps& cps, bool force = false) {
  if (check_one_closed(cps).holds) return check_reflection_atoms(cps);
  return check_reflection_direct(cps, force);
}

namespace detail {

inline ConsistencyResult compare_on(const Cps& a, const Cps& b, Event h) {
  ConsistencyResult r;
  r.event = h;
  const ProbMeasure& pa = a.measure(h);
  const ProbMeasure& pb = b.measure(h);
  for (StateIndex s = 0; s < a.state_count(); ++s)
    if (pa.weight(s) != pb.weight(s)) {
      r.holds = false;
      r.witness = ConsistencyWitness{s, pa, pb};
      break;
    }
  return r;
}

}  // namespace detail

/// p^A_{m(ω)} = p^B_{m(ω)} where m(ω) is the atom at ω of the meet of the two
/// conditioning families.
inline ConsistencyResult check_local_consistency(const Cps& a, const Cps& b, StateIndex s) {
  require_same_space(a, b);
  SetFamily shared = meet(a.family(), b.family());
  return detail::compare_on(a, b, atom_of(shared, s));
}

/// Stricter variant: the two measures must agree on every conditioning event
/// the agents share that contains ω, not only on the meet atom. Reports the
/// first shared event, in canonical order, where they differ.
inline ConsistencyResult check_shared_consistency(const Cps& a, const Cps& b, StateIndex s) {
  require_same_space(a, b);
  SetFamily shared = meet(a.family(), b.family());
  ConsistencyResult last;
  for (Event h : shared) {
    if (!h.contains(s)) continue;
    last = detail::compare_on(a, b, h);
    if (!last.holds) return last;
  }
  last.event = atom_of(shared, s);
  return last;
}

struct AgentAssumptions {
  ReflectionResult reflection;
  OneClosedResult one_closed;
};

struct AssumptionReport {
  AgentAssumptions a;
  AgentAssumptions b;
  std::vector<ConsistencyResult> local_consistency;   // per state, meet-atom form
  std::vector<ConsistencyResult> shared_consistency;  // per state, every shared event
};

inline AgentAssumptions assess_agent(const Cps& cps, bool force = false) {
  AgentAssumptions r;
  r.one_closed = check_one_closed(cps);
  r.reflection = r.one_closed.holds ? check_reflection_atoms(cps) : check_reflection_direct(cps, force);
  return r;
}

inline AssumptionReport assess(const Cps& a, const Cps& b, bool force = false) {
  require_same_space(a, b);
  AssumptionReport r;
  r.a = assess_agent(a, force);
  r.b = assess_agent(b, force);
  for (StateIndex s = 0; s < a.state_count(); ++s) {
    r.local_consistency.push_back(check_local_consistency(a, b, s));
    r.shared_consistency.push_back(check_shared_consistency(a, b, s));
  }
  return r;
}

}  // namespace cpsagree

#endif  // CPSAGREE_ASSUMPTIONS_HPP
