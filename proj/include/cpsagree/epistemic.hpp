#ifndef CPSAGREE_EPISTEMIC_HPP
#define CPSAGREE_EPISTEMIC_HPP

#include <cstddef>
#include <utility>
#include <vector>

#include "cpsagree/cps.hpp"
#include "cpsagree/error.hpp"
#include "cpsagree/event.hpp"
#include "cpsagree/rational.hpp"

namespace cpsagree {

enum class RecursionKind { Certainty, Knowledge };

/// Level pairs (A^n, B^n) from n = 0 until two consecutive pairs coincide.
/// The final two entries are equal; `limit` is the intersection of the last
/// pair; `stabilized_at` is the first n with level n equal to level n+1.
struct RecursionTrace {
  RecursionKind kind = RecursionKind::Certainty;
  std::vector<std::pair<Event, Event>> levels;
  Event limit;
  std::size_t stabilized_at = 0;
};

namespace detail {

/// Runs the descent given an operator per agent. Both operators map an event
/// to the set of states where the agent is certain of / knows it.
template <typename OpA, typename OpB>
RecursionTrace iterate_levels(RecursionKind kind, Event a0, Event b0, std::size_t state_count, OpA&& op_a,
                              OpB&& op_b) {
  RecursionTrace trace;
  trace.kind = kind;
  trace.levels.emplace_back(a0, b0);
  // Each strict step removes at least one state from A or B.
  const std::size_t bound = 2 * state_count + 2;
  for (std::size_t n = 0; n < bound; ++n) {
    auto [a, b] = trace.levels.back();
    Event next_a = a & op_a(b);
    Event next_b = b & op_b(a);
    trace.levels.emplace_back(next_a, next_b);
    if (next_a == a && next_b == b) {
      trace.stabilized_at = n;
      trace.limit = next_a & next_b;
      return trace;
    }
  }
  throw Error(Errc::InternalError, "recursion failed to stabilize within 2|Ω| steps");
}

}  // namespace detail

/// A^0 = {ω : p^A_{m_A(ω)}(E) = qA}, B^0 likewise; then
/// A^{n+1} = A^n ∩ C_A(B^n), B^{n+1} = B^n ∩ C_B(A^n).
inline RecursionTrace common_certainty(const Cps& a, const Cps& b, Event e, const Rational& qa, const Rational& qb) {
  require_same_space(a, b);
  return detail::iterate_levels(
      RecursionKind::Certainty, belief_fiber(a, e, qa), belief_fiber(b, e, qb), a.state_count(),
      [&](Event x) { return certainty_event(a, x); }, [&](Event x) { return certainty_event(b, x); });
}

/// Same starting levels, with knowledge in place of certainty.
inline RecursionTrace common_knowledge(const Cps& a, const Cps& b, Event e, const Rational& qa, const Rational& qb) {
  require_same_space(a, b);
  return detail::iterate_levels(
      RecursionKind::Knowledge, belief_fiber(a, e, qa), belief_fiber(b, e, qb), a.state_count(),
      [&](Event x) { return knowledge_event(a, x); }, [&](Event x) { return knowledge_event(b, x); });
}

inline bool member_of_limit(const RecursionTrace& trace, StateIndex s) { return trace.limit.contains(s); }

}  // namespace cpsagree

#endif  // CPSAGREE_EPISTEMIC_HPP
