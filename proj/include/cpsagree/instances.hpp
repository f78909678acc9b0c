#ifndef CPSAGREE_INSTANCES_HPP
#define CPSAGREE_INSTANCES_HPP

#include <utility>
#include <vector>

#include "cpsagree/cps.hpp"
#include "cpsagree/event.hpp"
#include "cpsagree/rational.hpp"

namespace cpsagree::instances {

/// Two-agent instance with an optional query.
struct AgentPair {
  Cps a;
  Cps b;
};

inline StateSpace abcd() { return StateSpace({"a", "b", "c", "d"}); }

inline ProbMeasure weights4(Rational a, Rational b, Rational c, Rational d) {
  return ProbMeasure({std::move(a), std::move(b), std::move(c), std::move(d)});
}

/// Partition information, common prior delta_d, and common certainty at b and
/// c that A gives {b} probability 1 while B gives it 0.
inline AgentPair disagreement() {
  StateSpace s = abcd();
  const Event ad{0, 3}, bc{1, 2}, abc{0, 1, 2}, d{3};
  const Event all = s.full();
  Cps a(s, {{ad, ProbMeasure::dirac(4, 3)}, {bc, ProbMeasure::dirac(4, 1)}, {all, ProbMeasure::dirac(4, 3)}});
  Cps b(s, {{abc, ProbMeasure::dirac(4, 2)}, {d, ProbMeasure::dirac(4, 3)}, {all, ProbMeasure::dirac(4, 3)}});
  return {std::move(a), std::move(b)};
}

/// Non-partition families without a common prior where both agents agree on
/// probability 1/2 for {a}. Measures not stated directly are forced by the
/// chain rule from the measure given the whole space.
inline AgentPair agreement() {
  StateSpace s = abcd();
  const Rational h(1, 2);
  const Event ab{0, 1}, c{2}, d{3}, cd{2, 3}, abc{0, 1, 2}, abd{0, 1, 3};
  const Event all = s.full();
  Cps a(s, {{ab, weights4(h, h, 0, 0)},
            {c, ProbMeasure::dirac(4, 2)},
            {d, ProbMeasure::dirac(4, 3)},
            {cd, weights4(0, 0, h, h)},
            {abc, weights4(h, h, 0, 0)},
            {abd, weights4(h, h, 0, 0)},
            {all, weights4(h, h, 0, 0)}});
  Cps b(s, {{cd, weights4(0, 0, h, h)}, {ab, weights4(h, h, 0, 0)}, {all, weights4(0, 0, h, h)}});
  return {std::move(a), std::move(b)};
}

/// One agent, Ω = {a,b}, family {{a}, Ω}, p_Ω = δ_a: certain of {a} at b
/// without knowing it.
inline Cps certain_not_known() {
  StateSpace s({"a", "b"});
  return Cps(s, {{Event{0}, ProbMeasure::dirac(2, 0)}, {s.full(), ProbMeasure::dirac(2, 0)}});
}

}  // namespace cpsagree::instances

#endif  // CPSAGREE_INSTANCES_HPP
