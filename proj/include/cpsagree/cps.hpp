#ifndef CPSAGREE_CPS_HPP
#define CPSAGREE_CPS_HPP

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "cpsagree/error.hpp"
#include "cpsagree/event.hpp"
#include "cpsagree/rational.hpp"
#include "cpsagree/set_family.hpp"

namespace cpsagree {

/// Weights on states. A probability measure when the weights are
/// nonnegative and sum to one; `validate` reports anything else, so an
/// arbitrary weight vector is representable.
class ProbMeasure {
 public:
  ProbMeasure() = default;
  explicit ProbMeasure(std::vector<Rational> weights) : weights_(std::move(weights)) {}

  static ProbMeasure dirac(std::size_t n, StateIndex s) {
    std::vector<Rational> w(n);
    w.at(s) = 1;
    return ProbMeasure(std::move(w));
  }

  static ProbMeasure uniform(std::size_t n, Event on) {
    if (on.empty()) throw Error(Errc::InvalidArgument, "uniform measure on the empty event");
    std::vector<Rational> w(n);
    Rational each(1, static_cast<long>(on.size()));
    on.for_each([&](StateIndex s) { w.at(s) = each; });
    return ProbMeasure(std::move(w));
  }

  std::size_t size() const { return weights_.size(); }
  const Rational& weight(StateIndex s) const { return weights_.at(s); }
  const std::vector<Rational>& weights() const { return weights_; }

  Rational eval(Event e) const {
    Rational sum;
    e.for_each([&](StateIndex s) { sum += weights_.at(s); });
    return sum;
  }

  Rational total() const {
    Rational sum;
    for (const auto& w : weights_) sum += w;
    return sum;
  }

  Event support() const {
    Event e;
    for (std::size_t s = 0; s < weights_.size(); ++s)
      if (weights_[s].sign() != 0) e = e.with(s);
    return e;
  }

  bool is_probability() const {
    for (const auto& w : weights_)
      if (w.sign() < 0) return false;
    return total().is_one();
  }

  /// p(. | on) = p(. ∩ on) / p(on). Requires p(on) > 0.
  ProbMeasure conditioned_on(Event on) const {
    Rational mass = eval(on);
    if (mass.sign() <= 0) throw Error(Errc::InvalidArgument, "conditioning on a null event");
    std::vector<Rational> w(weights_.size());
    on.for_each([&](StateIndex s) { w[s] = weights_[s] / mass; });
    return ProbMeasure(std::move(w));
  }

  bool operator==(const ProbMeasure&) const = default;

 private:
  std::vector<Rational> weights_;
};

/// A conditioning family with one measure per member. Immutable; the atom of
/// every state and the support of every measure are computed once.
class Cps {
 public:
  Cps() = default;

  /// `measures[i]` belongs to `family.members()[i]`.
  Cps(StateSpace space, SetFamily family, std::vector<ProbMeasure> measures)
      : space_(std::move(space)), family_(std::move(family)), measures_(std::move(measures)) {
    if (family_.state_count() != space_.size()) throw Error(Errc::SpaceMismatch, "family and state space sizes differ");
    if (measures_.size() != family_.size())
      throw Error(Errc::InvalidArgument, "every family member needs exactly one measure");
    for (const auto& m : measures_)
      if (m.size() != space_.size()) throw Error(Errc::InvalidArgument, "measure length differs from state count");
    index();
  }

  /// Family and measures given as pairs; duplicate events are rejected.
  Cps(StateSpace space, const std::vector<std::pair<Event, ProbMeasure>>& entries) {
    std::vector<Event> events;
    for (const auto& [e, m] : entries) events.push_back(e);
    SetFamily family(space.size(), events);
    if (family.size() != entries.size()) throw Error(Errc::DuplicateError, "family member listed twice");
    std::vector<ProbMeasure> measures(family.size());
    for (const auto& [e, m] : entries) measures[family.index_of(e)] = m;
    *this = Cps(std::move(space), std::move(family), std::move(measures));
  }

  const StateSpace& space() const { return space_; }
  std::size_t state_count() const { return space_.size(); }
  const SetFamily& family() const { return family_; }
  const std::vector<ProbMeasure>& measures() const { return measures_; }

  const ProbMeasure& measure(Event g) const { return measures_[member_index(g)]; }
  Event support(Event g) const { return supports_[member_index(g)]; }

  /// p_G(E).
  Rational prob(Event g, Event e) const { return measure(g).eval(e); }

  bool has_atoms() const { return atoms_ok_; }

  Event atom(StateIndex s) const {
    require_atoms();
    return atoms_.at(s);
  }
  const std::vector<Event>& atoms() const {
    require_atoms();
    return atoms_;
  }

  /// p_{m(ω)}.
  const ProbMeasure& measure_at(StateIndex s) const {
    require_atoms();
    return measures_[atom_member_.at(s)];
  }
  Event support_at(StateIndex s) const {
    require_atoms();
    return supports_[atom_member_.at(s)];
  }

  std::size_t member_index(Event g) const {
    std::size_t i = family_.index_of(g);
    if (i == family_.size()) throw Error(Errc::NotMember, space_.format(g) + " is not a conditioning event");
    return i;
  }

  bool operator==(const Cps& o) const { return space_ == o.space_ && family_ == o.family_ && measures_ == o.measures_; }

 private:
  void index() {
    supports_.clear();
    for (const auto& m : measures_) supports_.push_back(m.support());
    atoms_ok_ = covers(family_);
    if (!atoms_ok_) return;
    atoms_ = atoms_by_state(family_);
    atom_member_.clear();
    for (Event a : atoms_) {
      std::size_t i = family_.index_of(a);
      if (i == family_.size()) {
        atoms_ok_ = false;
        return;
      }
      atom_member_.push_back(i);
    }
  }

  void require_atoms() const {
    if (!atoms_ok_)
      throw Error(Errc::StructureError, "atoms are undefined: family must cover the space and be intersection-closed");
  }

  StateSpace space_;
  SetFamily family_;
  std::vector<ProbMeasure> measures_;
  std::vector<Event> supports_;
  std::vector<Event> atoms_;
  std::vector<std::size_t> atom_member_;
  bool atoms_ok_ = false;
};

inline void require_same_space(const Cps& a, const Cps& b) {
  if (!(a.space() == b.space())) throw Error(Errc::SpaceMismatch, "the two CPSs are defined over different state spaces");
}

enum class ViolationKind { NotProbability, Concentration, ChainRule };

struct Violation {
  ViolationKind kind;
  Event e;  // singleton {ω} for chain-rule failures
  Event f;
  Event g;
  Rational lhs;
  Rational rhs;

  std::string describe(const StateSpace& space) const {
    switch (kind) {
      case ViolationKind::NotProbability:
        return "measure given " + space.format(g) + " is not a probability measure (total " + lhs.to_string() +
               ", weights must be nonnegative and sum to 1)";
      case ViolationKind::Concentration:
        return "concentration fails for G=" + space.format(g) + ": p_G(G)=" + lhs.to_string() + ", expected 1";
      case ViolationKind::ChainRule:
        return "chain rule fails at (E,F,G)=(" + space.format(e) + "," + space.format(f) + "," + space.format(g) +
               "): p_G(E)=" + lhs.to_string() + " but p_G(F)*p_F(E)=" + rhs.to_string();
    }
    return {};
  }
};

struct ValidationReport {
  std::vector<Violation> violations;
  bool valid() const { return violations.empty(); }
};

/// Structural conditions on a conditioning family: nonempty members, closure
/// under unions and nonempty intersections, covering. Throws StructureError.
inline void check_structure(const StateSpace& space, const SetFamily& family) {
  if (!covers(family)) throw Error(Errc::StructureError, "family does not cover the state space");
  for (Event x : family)
    for (Event y : family) {
      if (!family.contains(x | y))
        throw Error(Errc::StructureError, "family is not closed under unions: " + space.format(x) + " ∪ " +
                                              space.format(y) + " is missing");
      Event m = x & y;
      if (!m.empty() && !family.contains(m))
        throw Error(Errc::StructureError, "family is not closed under nonempty intersections: " + space.format(x) +
                                              " ∩ " + space.format(y) + " is missing");
    }
}

/// Checks probability, concentration and the chain rule. The chain rule is
/// tested on singleton events only: both sides are additive in E, so equality
/// on every {ω} ⊆ F is equivalent to equality on every E ⊆ F.
inline ValidationReport validate(const Cps& cps) {
  check_structure(cps.space(), cps.family());
  ValidationReport report;
  const auto& members = cps.family().members();
  for (std::size_t i = 0; i < members.size(); ++i) {
    const ProbMeasure& p = cps.measures()[i];
    if (!p.is_probability())
      report.violations.push_back({ViolationKind::NotProbability, {}, {}, members[i], p.total(), Rational(1)});
    Rational mass = p.eval(members[i]);
    if (!mass.is_one()) report.violations.push_back({ViolationKind::Concentration, {}, {}, members[i], mass, Rational(1)});
  }
  for (std::size_t gi = 0; gi < members.size(); ++gi) {
    Event g = members[gi];
    const ProbMeasure& pg = cps.measures()[gi];
    for (std::size_t fi = 0; fi < members.size(); ++fi) {
      Event f = members[fi];
      if (!f.proper_subset_of(g)) continue;
      const ProbMeasure& pf = cps.measures()[fi];
      Rational pg_f = pg.eval(f);
      f.for_each([&](StateIndex s) {
        Rational lhs = pg.weight(s);
        Rational rhs = pg_f * pf.weight(s);
        if (lhs != rhs) report.violations.push_back({ViolationKind::ChainRule, Event::singleton(s), f, g, lhs, rhs});
      });
    }
  }
  return report;
}

inline Cps require_valid(const Cps& cps) {
  ValidationReport r;
  try {
    r = validate(cps);
  } catch (const Error& e) {
    throw Error(Errc::InvalidCps, e.what());
  }
  if (!r.valid()) throw Error(Errc::InvalidCps, r.violations.front().describe(cps.space()));
  return cps;
}

/// p_G(E), exact.
inline Rational prob(const Cps& cps, Event g, Event e) { return cps.prob(g, e); }

/// p_{m(ω)}(E) for every state ω.
inline std::vector<Rational> beliefs(const Cps& cps, Event e) {
  std::vector<Rational> out;
  out.reserve(cps.state_count());
  for (StateIndex s = 0; s < cps.state_count(); ++s) out.push_back(cps.measure_at(s).eval(e));
  return out;
}

/// {ω : p_{m(ω)}(E) = 1}. For a nonnegative measure of total 1 this holds
/// exactly when the support lies inside E.
inline Event certainty_event(const Cps& cps, Event e) {
  Event out;
  for (StateIndex s = 0; s < cps.state_count(); ++s)
    if (cps.support_at(s).subset_of(e)) out = out.with(s);
  return out;
}

/// {ω : m(ω) ⊆ E}.
inline Event knowledge_event(const Cps& cps, Event e) {
  Event out;
  for (StateIndex s = 0; s < cps.state_count(); ++s)
    if (cps.atom(s).subset_of(e)) out = out.with(s);
  return out;
}

/// {ω : p_{m(ω)}(E) = q}.
inline Event belief_fiber(const Cps& cps, Event e, const Rational& q) {
  Event out;
  for (StateIndex s = 0; s < cps.state_count(); ++s)
    if (cps.measure_at(s).eval(e) == q) out = out.with(s);
  return out;
}

inline Event belief_fiber(const std::vector<Rational>& belief, const Rational& q) {
  Event out;
  for (StateIndex s = 0; s < belief.size(); ++s)
    if (belief[s] == q) out = out.with(s);
  return out;
}

}  // namespace cpsagree

#endif  // CPSAGREE_CPS_HPP
