#ifndef CPSAGREE_AUGMENTATION_HPP
#define CPSAGREE_AUGMENTATION_HPP

#include <algorithm>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "cpsagree/assumptions.hpp"
#include "cpsagree/cps.hpp"
#include "cpsagree/error.hpp"
#include "cpsagree/event.hpp"
#include "cpsagree/ext_value.hpp"
#include "cpsagree/renyi.hpp"
#include "cpsagree/set_family.hpp"

namespace cpsagree {

/// Smallest family containing every probability-one event that is closed
/// under unions and nonempty intersections. Covering is inherited because the
/// original family is contained in the certain events.
inline SetFamily augment_family(const Cps& cps) {
  require_valid(cps);
  return close_family(certain_events(cps));
}

/// Dimension index used in `AugmentationResult`: 0 is the added bottom level,
/// k + 1 is level k of the input's representation.
using Dimension = std::size_t;
inline constexpr Dimension kBottomDimension = 0;

struct AugmentationResult {
  SetFamily augmented_family;
  Cps extended_cps;
  std::vector<Event> atoms;                     // algebra atoms of the augmented family
  std::vector<Dimension> dimensions;            // per atom
  std::vector<std::optional<Event>> witnesses;  // per atom: an input member witnessing its level
  DimOrderedFamily input_levels;                // representation of the input
  DimOrderedFamily extended_levels;             // bottom level first, then the input levels
};

/// Extends a CPS to its 1-augmented family.
///
/// Each algebra atom H of the augmented family gets a dimension: the active
/// level of any input member K ⊇ H whose active measure charges H, or the
/// bottom level if no such K exists. Level η of the extension puts the level-η
/// measure (uniform for bottom atoms) on atoms of dimension η and +inf on
/// atoms of higher dimension. Every augmented K is then conditioned at the
/// highest dimension among its atoms.
///
/// The output is validated and checked to agree with the input on every
/// original member before it is returned.
inline AugmentationResult extend(const Cps& cps) {
  AugmentationResult r;
  r.input_levels = represent(cps);
  const StateSpace& space = cps.space();
  const std::size_t n = cps.state_count();
  const auto& members = cps.family().members();

  std::vector<std::size_t> gamma;
  gamma.reserve(members.size());
  for (Event k : members) gamma.push_back(*active_level(r.input_levels, k));

  r.augmented_family = augment_family(cps);
  r.atoms = algebra_atoms(r.augmented_family);

  for (Event h : r.atoms) {
    std::optional<Dimension> dim;
    std::optional<Event> witness;
    for (std::size_t i = 0; i < members.size(); ++i) {
      if (!h.subset_of(members[i])) continue;
      if (!r.input_levels.levels[gamma[i]].eval(h).is_finite_positive()) continue;
      Dimension d = gamma[i] + 1;
      if (dim && *dim != d)
        throw Error(Errc::InternalError, "existing witnesses for atom " + space.format(h) + " disagree on level");
      if (!dim) witness = members[i];
      dim = d;
    }
    r.dimensions.push_back(dim.value_or(kBottomDimension));
    r.witnesses.push_back(witness);
  }

  const std::size_t level_count = r.input_levels.levels.size() + 1;
  r.extended_levels.has_bottom_level = true;
  for (Dimension eta = 0; eta < level_count; ++eta) {
    ExtMeasure level(n);
    for (std::size_t i = 0; i < r.atoms.size(); ++i) {
      Event h = r.atoms[i];
      Dimension d = r.dimensions[i];
      h.for_each([&](StateIndex s) {
        if (d == eta)
          level.set(s, d == kBottomDimension ? ExtValue(Rational(1, static_cast<long>(h.size())))
                                             : r.input_levels.levels[d - 1].value(s));
        else if (d > eta)
          level.set(s, ExtValue::infinity());
      });
    }
    r.extended_levels.levels.push_back(std::move(level));
  }

  DofCheck check = verify(r.extended_levels, r.augmented_family);
  if (!check.holds)
    throw Error(Errc::InternalError, "extended levels are not dimensionally ordered at " + space.format(*check.witness) +
                                         ": " + check.reason);

  for (Event k : r.augmented_family) {
    Dimension eta = kBottomDimension;
    for (std::size_t i = 0; i < r.atoms.size(); ++i)
      if (r.atoms[i].subset_of(k)) eta = std::max(eta, r.dimensions[i]);
    if (active_level(r.extended_levels, k) != eta)
      throw Error(Errc::InternalError, "active level of " + space.format(k) + " is not its highest atom dimension");
  }
  for (std::size_t i = 0; i < members.size(); ++i)
    if (*active_level(r.extended_levels, members[i]) != gamma[i] + 1)
      throw Error(Errc::InternalError, "original member " + space.format(members[i]) + " changed level");

  r.extended_cps = regenerate(r.extended_levels, r.augmented_family, space);
  ValidationReport report = validate(r.extended_cps);
  if (!report.valid())
    throw Error(Errc::InternalError, "extension is not a CPS: " + report.violations.front().describe(space));
  for (Event k : members)
    if (!(r.extended_cps.measure(k) == cps.measure(k)))
      throw Error(Errc::InternalError, "extension changed the measure given " + space.format(k));
  return r;
}

struct NoNewOnesResult {
  bool holds = true;
  std::optional<Event> witness;  // a probability-one event of the extension outside the augmented family
};

/// The extension creates no probability-one events beyond the augmented family.
inline NoNewOnesResult verify_no_new_ones(const AugmentationResult& r) {
  NoNewOnesResult out;
  for (Event e : certain_events(r.extended_cps))
    if (!r.augmented_family.contains(e)) {
      out.holds = false;
      out.witness = e;
      break;
    }
  return out;
}

/// Augmenting the extension again adds nothing.
inline bool verify_idempotent(const AugmentationResult& r) {
  return augment_family(r.extended_cps) == r.augmented_family;
}

inline bool verify_idempotent(const Cps& cps) { return verify_idempotent(extend(cps)); }

/// The family is its own augmentation; equivalent to 1-closedness.
inline bool is_fixed_point(const Cps& cps) { return augment_family(cps) == cps.family(); }

}  // namespace cpsagree

#endif  // CPSAGREE_AUGMENTATION_HPP
