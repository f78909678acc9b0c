#ifndef CPSAGREE_SET_FAMILY_HPP
#define CPSAGREE_SET_FAMILY_HPP

#include <algorithm>
#include <bit>
#include <cstddef>
#include <deque>
#include <unordered_set>
#include <vector>

#include "cpsagree/error.hpp"
#include "cpsagree/event.hpp"

namespace cpsagree {

/// A finite family of nonempty events over a space of `state_count` states.
/// Members are deduplicated and kept in canonical order.
class SetFamily {
 public:
  SetFamily() = default;
  SetFamily(std::size_t state_count, std::vector<Event> members) : n_(state_count), members_(std::move(members)) {
    if (n_ == 0 || n_ > kMaxStates) throw Error(Errc::InvalidArgument, "state count out of range");
    for (Event e : members_) {
      if (e.empty()) throw Error(Errc::InvalidArgument, "families never contain the empty event");
      if (!e.subset_of(Event::full(n_))) throw Error(Errc::InvalidArgument, "event references a state outside the space");
    }
    std::sort(members_.begin(), members_.end(), CanonicalOrder{});
    members_.erase(std::unique(members_.begin(), members_.end()), members_.end());
  }

  std::size_t state_count() const { return n_; }
  Event full() const { return Event::full(n_); }
  std::size_t size() const { return members_.size(); }
  bool empty() const { return members_.empty(); }
  const std::vector<Event>& members() const { return members_; }
  auto begin() const { return members_.begin(); }
  auto end() const { return members_.end(); }

  bool contains(Event e) const { return std::binary_search(members_.begin(), members_.end(), e, CanonicalOrder{}); }

  /// Position of `e` in canonical order, or size() if absent.
  std::size_t index_of(Event e) const {
    auto it = std::lower_bound(members_.begin(), members_.end(), e, CanonicalOrder{});
    if (it == members_.end() || *it != e) return members_.size();
    return static_cast<std::size_t>(it - members_.begin());
  }

  Event union_of_members() const {
    Event u;
    for (Event e : members_) u |= e;
    return u;
  }

  bool operator==(const SetFamily&) const = default;

 private:
  std::size_t n_ = 0;
  std::vector<Event> members_;
};

/// Smallest superfamily closed under pairwise unions and nonempty pairwise
/// intersections. Never adds the empty event.
inline SetFamily close_family(const SetFamily& generators) {
  std::unordered_set<Event> seen(generators.begin(), generators.end());
  std::vector<Event> members(generators.begin(), generators.end());
  std::deque<Event> work(generators.begin(), generators.end());
  while (!work.empty()) {
    Event x = work.front();
    work.pop_front();
    // members grows while we scan; index loop keeps the snapshot valid.
    for (std::size_t i = 0; i < members.size(); ++i) {
      Event y = members[i];
      for (Event z : {x | y, x & y}) {
        if (z.empty() || !seen.insert(z).second) continue;
        members.push_back(z);
        work.push_back(z);
      }
    }
  }
  return SetFamily(generators.state_count(), std::move(members));
}

inline bool is_closed(const SetFamily& family) {
  for (Event x : family)
    for (Event y : family) {
      if (!family.contains(x | y)) return false;
      Event meet = x & y;
      if (!meet.empty() && !family.contains(meet)) return false;
    }
  return true;
}

/// True iff the members' union is the whole space.
inline bool covers(const SetFamily& family) { return !family.empty() && family.union_of_members() == family.full(); }

/// Intersection of all members containing `state`.
inline Event atom_of(const SetFamily& family, StateIndex state) {
  Event atom = family.full();
  bool found = false;
  for (Event g : family)
    if (g.contains(state)) {
      atom &= g;
      found = true;
    }
  if (!found) throw Error(Errc::NotCovering, "no member contains state " + std::to_string(state));
  return atom;
}

/// One atom per state, indexed by state.
inline std::vector<Event> atoms_by_state(const SetFamily& family) {
  std::vector<Event> out;
  out.reserve(family.state_count());
  for (StateIndex s = 0; s < family.state_count(); ++s) out.push_back(atom_of(family, s));
  return out;
}

/// Events present in both families.
inline SetFamily meet(const SetFamily& a, const SetFamily& b) {
  if (a.state_count() != b.state_count()) throw Error(Errc::SpaceMismatch, "families over different spaces");
  std::vector<Event> shared;
  for (Event e : a)
    if (b.contains(e)) shared.push_back(e);
  return SetFamily(a.state_count(), std::move(shared));
}

/// Atoms of the algebra generated by the family: states are grouped by their
/// membership signature across all members. Blocks are ordered by their
/// lowest state.
inline std::vector<Event> algebra_atoms(const SetFamily& family) {
  std::vector<Event> blocks{family.full()};
  for (Event g : family) {
    std::vector<Event> refined;
    refined.reserve(blocks.size() * 2);
    for (Event b : blocks) {
      Event inside = b & g;
      Event outside = b - g;
      if (!inside.empty()) refined.push_back(inside);
      if (!outside.empty()) refined.push_back(outside);
    }
    blocks = std::move(refined);
  }
  std::sort(blocks.begin(), blocks.end(), [](Event x, Event y) { return std::countr_zero(x.bits()) < std::countr_zero(y.bits()); });
  return blocks;
}

/// Distinct atoms of the states in `g`, ordered by cardinality then bit
/// pattern, which guarantees that a strictly smaller atom comes first.
inline std::vector<Event> atoms_in(const SetFamily& family, Event g) {
  if (!family.contains(g)) throw Error(Errc::NotMember, "event is not a family member");
  std::vector<Event> out;
  g.for_each([&](StateIndex s) { out.push_back(atom_of(family, s)); });
  std::sort(out.begin(), out.end(), CanonicalOrder{});
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

/// Every state of `e` has its atom inside `e`. Vacuous for the empty event.
inline bool is_saturated(const std::vector<Event>& atoms, Event e) {
  bool ok = true;
  e.for_each([&](StateIndex s) { ok = ok && atoms[s].subset_of(e); });
  return ok;
}

inline bool is_saturated(const SetFamily& family, Event e) {
  bool ok = true;
  e.for_each([&](StateIndex s) { ok = ok && atom_of(family, s).subset_of(e); });
  return ok;
}

}  // namespace cpsagree

#endif  // CPSAGREE_SET_FAMILY_HPP
