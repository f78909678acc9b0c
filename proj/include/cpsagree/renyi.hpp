#ifndef CPSAGREE_RENYI_HPP
#define CPSAGREE_RENYI_HPP

#include <algorithm>
#include <cstddef>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "cpsagree/cps.hpp"
#include "cpsagree/error.hpp"
#include "cpsagree/event.hpp"
#include "cpsagree/ext_value.hpp"
#include "cpsagree/set_family.hpp"

namespace cpsagree {

/// A measure on the power set given by per-state values, possibly infinite.
class ExtMeasure {
 public:
  ExtMeasure() = default;
  explicit ExtMeasure(std::vector<ExtValue> values) : values_(std::move(values)) {}
  explicit ExtMeasure(std::size_t n) : values_(n) {}

  std::size_t size() const { return values_.size(); }
  const ExtValue& value(StateIndex s) const { return values_.at(s); }
  void set(StateIndex s, ExtValue v) { values_.at(s) = std::move(v); }
  const std::vector<ExtValue>& values() const { return values_; }

  ExtValue eval(Event e) const {
    ExtValue sum;
    e.for_each([&](StateIndex s) { sum += values_.at(s); });
    return sum;
  }

  bool operator==(const ExtMeasure&) const = default;

 private:
  std::vector<ExtValue> values_;
};

/// Levels in increasing dominance: position 0 is the most dominated level and
/// the last entry is the top. When `has_bottom_level` is set, level 0 is the
/// extra bottom index added below every original level.
struct DimOrderedFamily {
  std::vector<ExtMeasure> levels;
  bool has_bottom_level = false;
};

enum class Dominance { FirstDominates, SecondDominates, Equivalent };

inline const char* dominance_name(Dominance d) {
  switch (d) {
    case Dominance::FirstDominates: return "first_dominates";
    case Dominance::SecondDominates: return "second_dominates";
    case Dominance::Equivalent: return "equivalent";
  }
  return "";
}

/// Compares two conditioning events through the measure on their union U:
/// equivalent when both receive positive p_U mass, otherwise the one carrying
/// all of it dominates.
inline Dominance dominance(const Cps& cps, Event g, Event h) {
  cps.member_index(g);
  cps.member_index(h);
  Event supp = cps.support(g | h);
  bool g_pos = supp.intersects(g);
  bool h_pos = supp.intersects(h);
  if (g_pos && h_pos) return Dominance::Equivalent;
  if (g_pos) return Dominance::FirstDominates;
  if (h_pos) return Dominance::SecondDominates;
  throw Error(Errc::InvalidCps, "measure on a union gives zero mass to both parts");
}

/// Index of the unique level with 0 < μ(G) < inf, if there is exactly one.
inline std::optional<std::size_t> active_level(const DimOrderedFamily& dof, Event g) {
  std::optional<std::size_t> found;
  for (std::size_t k = 0; k < dof.levels.size(); ++k)
    if (dof.levels[k].eval(g).is_finite_positive()) {
      if (found) return std::nullopt;
      found = k;
    }
  return found;
}

struct DofCheck {
  bool holds = true;
  std::optional<Event> witness;
  std::string reason;
};

/// For every member: exactly one level is finite and positive on it, every
/// earlier level is infinite on it and every later level is zero on it.
inline DofCheck verify(const DimOrderedFamily& dof, const SetFamily& family) {
  for (Event g : family) {
    std::vector<std::size_t> active;
    for (std::size_t k = 0; k < dof.levels.size(); ++k)
      if (dof.levels[k].eval(g).is_finite_positive()) active.push_back(k);
    if (active.size() != 1)
      return {false, g, active.empty() ? "no level is finite and positive" : "more than one level is finite and positive"};
    for (std::size_t k = 0; k < active[0]; ++k)
      if (!dof.levels[k].eval(g).is_infinite()) return {false, g, "a level below the active one is finite"};
    for (std::size_t k = active[0] + 1; k < dof.levels.size(); ++k)
      if (!dof.levels[k].eval(g).is_zero()) return {false, g, "a level above the active one is nonzero"};
  }
  return {};
}

/// p_G(E) = μ_{γ(G)}(E ∩ G) / μ_{γ(G)}(G).
inline Cps regenerate(const DimOrderedFamily& dof, const SetFamily& family, const StateSpace& space) {
  DofCheck check = verify(dof, family);
  if (!check.holds) throw Error(Errc::VerifyFailed, space.format(*check.witness) + ": " + check.reason);
  std::vector<ProbMeasure> measures;
  measures.reserve(family.size());
  for (Event g : family) {
    const ExtMeasure& level = dof.levels[*active_level(dof, g)];
    ExtValue mass = level.eval(g);
    std::vector<Rational> w(space.size());
    g.for_each([&](StateIndex s) { w[s] = level.value(s) / mass; });
    measures.emplace_back(std::move(w));
  }
  return Cps(space, family, std::move(measures));
}

/// Builds a dimensionally ordered family generating `cps`:
///  1. members are grouped into classes of mutually equivalent events;
///  2. classes are ordered by dominance between their unions U_c;
///  3. class c contributes the level p_{U_c}, padded with +inf on the
///     supports of all strictly higher classes.
/// The result is checked against `verify` and regenerates `cps` exactly.
inline DimOrderedFamily represent(const Cps& cps) {
  require_valid(cps);
  const auto& members = cps.family().members();
  const std::size_t count = members.size();
  const std::size_t n = cps.state_count();

  std::vector<std::size_t> parent(count);
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (std::size_t i = 0; i < count; ++i)
    for (std::size_t j = i + 1; j < count; ++j)
      if (dominance(cps, members[i], members[j]) == Dominance::Equivalent) parent[find(i)] = find(j);

  std::vector<std::size_t> class_of(count);
  std::vector<std::size_t> roots;
  for (std::size_t i = 0; i < count; ++i) {
    std::size_t r = find(i);
    auto it = std::find(roots.begin(), roots.end(), r);
    class_of[i] = static_cast<std::size_t>(it - roots.begin());
    if (it == roots.end()) roots.push_back(r);
  }
  const std::size_t classes = roots.size();
  std::vector<Event> unions(classes);
  for (std::size_t i = 0; i < count; ++i) unions[class_of[i]] |= members[i];
  for (std::size_t c = 0; c < classes; ++c)
    if (class_of[cps.member_index(unions[c])] != c)
      throw Error(Errc::InternalOrderError, "class union " + cps.space().format(unions[c]) + " left its class");

  // Rank each class by how many others it dominates; the pairwise check below
  // rejects any relation this does not order consistently.
  std::vector<std::size_t> beaten(classes, 0);
  for (std::size_t x = 0; x < classes; ++x)
    for (std::size_t y = 0; y < classes; ++y)
      if (x != y && dominance(cps, unions[x], unions[y]) == Dominance::FirstDominates) ++beaten[x];
  std::vector<std::size_t> order(classes);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return beaten[x] < beaten[y]; });
  std::vector<std::size_t> rank(classes);
  for (std::size_t k = 0; k < classes; ++k) rank[order[k]] = k;

  // Dominance must be a total preorder consistent with the class order.
  for (std::size_t i = 0; i < count; ++i)
    for (std::size_t j = 0; j < count; ++j) {
      Dominance d = dominance(cps, members[i], members[j]);
      std::size_t ri = rank[class_of[i]];
      std::size_t rj = rank[class_of[j]];
      Dominance expected =
          ri == rj ? Dominance::Equivalent : (ri < rj ? Dominance::SecondDominates : Dominance::FirstDominates);
      if (d != expected)
        throw Error(Errc::InternalOrderError, "dominance is not a total preorder at " + cps.space().format(members[i]) +
                                                  ", " + cps.space().format(members[j]));
    }

  DimOrderedFamily dof;
  Event higher_support;
  dof.levels.resize(classes);
  for (std::size_t k = classes; k-- > 0;) {
    Event u = unions[order[k]];
    const ProbMeasure& p = cps.measure(u);
    if (p.support().intersects(higher_support) || u.intersects(higher_support))
      throw Error(Errc::InternalOrderError, "support of a dominant level meets a dominated class");
    ExtMeasure level(n);
    for (StateIndex s = 0; s < n; ++s)
      level.set(s, higher_support.contains(s) ? ExtValue::infinity() : ExtValue(p.weight(s)));
    dof.levels[k] = std::move(level);
    higher_support |= p.support();
  }

  DofCheck check = verify(dof, cps.family());
  if (!check.holds)
    throw Error(Errc::InternalError, "representation failed verification at " + cps.space().format(*check.witness));
  if (!(regenerate(dof, cps.family(), cps.space()) == cps))
    throw Error(Errc::InternalError, "representation does not regenerate the input CPS");
  return dof;
}

}  // namespace cpsagree

#endif  // CPSAGREE_RENYI_HPP
