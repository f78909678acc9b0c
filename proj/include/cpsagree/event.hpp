#ifndef CPSAGREE_EVENT_HPP
#define CPSAGREE_EVENT_HPP

#include <bit>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "cpsagree/error.hpp"

namespace cpsagree {

inline constexpr std::size_t kMaxStates = 64;

using StateIndex = std::size_t;

/// A subset of state indices stored as one machine word. Equality is
/// extensional; the state space it refers to is carried by the caller.
class Event {
 public:
  constexpr Event() = default;
  constexpr explicit Event(std::uint64_t bits) : bits_(bits) {}
  Event(std::initializer_list<StateIndex> states) {
    for (StateIndex s : states) *this = with(s);
  }

  static constexpr Event full(std::size_t n) {
    return Event(n >= 64 ? ~std::uint64_t{0} : ((std::uint64_t{1} << n) - 1));
  }
  static constexpr Event singleton(StateIndex s) { return Event(std::uint64_t{1} << s); }

  constexpr std::uint64_t bits() const { return bits_; }
  constexpr bool empty() const { return bits_ == 0; }
  constexpr std::size_t size() const { return static_cast<std::size_t>(std::popcount(bits_)); }
  constexpr bool contains(StateIndex s) const { return s < 64 && ((bits_ >> s) & 1U) != 0; }
  constexpr bool subset_of(Event other) const { return (bits_ & ~other.bits_) == 0; }
  constexpr bool proper_subset_of(Event other) const { return subset_of(other) && bits_ != other.bits_; }
  constexpr bool intersects(Event other) const { return (bits_ & other.bits_) != 0; }
  constexpr Event with(StateIndex s) const { return Event(bits_ | (std::uint64_t{1} << s)); }

  constexpr Event operator|(Event o) const { return Event(bits_ | o.bits_); }
  constexpr Event operator&(Event o) const { return Event(bits_ & o.bits_); }
  /// Set difference.
  constexpr Event operator-(Event o) const { return Event(bits_ & ~o.bits_); }
  Event& operator|=(Event o) { bits_ |= o.bits_; return *this; }
  Event& operator&=(Event o) { bits_ &= o.bits_; return *this; }

  constexpr bool operator==(const Event&) const = default;

  /// Member indices in ascending order.
  std::vector<StateIndex> states() const {
    std::vector<StateIndex> out;
    for (std::uint64_t b = bits_; b != 0; b &= b - 1) out.push_back(static_cast<StateIndex>(std::countr_zero(b)));
    return out;
  }

  template <typename F>
  void for_each(F&& f) const {
    for (std::uint64_t b = bits_; b != 0; b &= b - 1) f(static_cast<StateIndex>(std::countr_zero(b)));
  }

  /// Every subset of this event, including the empty one.
  template <typename F>
  void for_each_subset(F&& f) const {
    std::uint64_t sub = 0;
    do {
      f(Event(sub));
      sub = (sub - bits_) & bits_;
    } while (sub != 0);
  }

 private:
  std::uint64_t bits_ = 0;
};

/// Canonical member order used everywhere: cardinality, then bit pattern.
struct CanonicalOrder {
  bool operator()(Event a, Event b) const {
    if (a.size() != b.size()) return a.size() < b.size();
    return a.bits() < b.bits();
  }
};

/// Finite state space with distinct, nonempty labels. Index order is fixed.
class StateSpace {
 public:
  StateSpace() = default;
  explicit StateSpace(std::vector<std::string> labels) : labels_(std::move(labels)) {
    if (labels_.empty()) throw Error(Errc::InvalidArgument, "state space needs at least one state");
    if (labels_.size() > kMaxStates)
      throw Error(Errc::TooLarge, "at most " + std::to_string(kMaxStates) + " states are supported");
    std::set<std::string> seen;
    for (const auto& l : labels_) {
      if (l.empty()) throw Error(Errc::InvalidArgument, "state labels must be nonempty");
      if (!seen.insert(l).second) throw Error(Errc::DuplicateError, "duplicate state label '" + l + "'");
    }
  }

  /// States named "s0", "s1", ... ; used by generators.
  static StateSpace indexed(std::size_t n) {
    std::vector<std::string> labels;
    for (std::size_t i = 0; i < n; ++i) labels.push_back("s" + std::to_string(i));
    return StateSpace(std::move(labels));
  }

  std::size_t size() const { return labels_.size(); }
  const std::vector<std::string>& labels() const { return labels_; }
  const std::string& label(StateIndex i) const { return labels_.at(i); }
  Event full() const { return Event::full(size()); }

  std::optional<StateIndex> find(const std::string& label) const {
    for (std::size_t i = 0; i < labels_.size(); ++i)
      if (labels_[i] == label) return i;
    return std::nullopt;
  }
  StateIndex index_of(const std::string& label) const {
    if (auto i = find(label)) return *i;
    throw Error(Errc::ReferenceError, "unknown state label '" + label + "'");
  }

  Event event(const std::vector<std::string>& labels) const {
    Event e;
    for (const auto& l : labels) e = e.with(index_of(l));
    return e;
  }

  bool valid(Event e) const { return e.subset_of(full()); }

  /// "{a,b}" with members in index order; "{}" for the empty event.
  std::string format(Event e) const {
    std::string out = "{";
    bool first = true;
    e.for_each([&](StateIndex s) {
      if (!first) out += ",";
      out += labels_.at(s);
      first = false;
    });
    return out + "}";
  }

  bool operator==(const StateSpace&) const = default;

 private:
  std::vector<std::string> labels_;
};

}  // namespace cpsagree

template <>
struct std::hash<cpsagree::Event> {
  std::size_t operator()(cpsagree::Event e) const noexcept { return std::hash<std::uint64_t>{}(e.bits()); }
};

#endif  // CPSAGREE_EVENT_HPP
