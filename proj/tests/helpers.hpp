#ifndef CPSAGREE_TESTS_HELPERS_HPP
#define CPSAGREE_TESTS_HELPERS_HPP

#include <sstream>
#include <string>
#include <vector>

#include "cpsagree.hpp"

namespace th {

using namespace cpsagree;

/// "a,b,c" over `sp`; "" is the empty event.
inline Event ev(const StateSpace& sp, const std::string& labels) {
  Event e;
  std::stringstream ss(labels);
  std::string l;
  while (std::getline(ss, l, ','))
    if (!l.empty()) e = e.with(sp.index_of(l));
  return e;
}

inline std::vector<Event> evs(const StateSpace& sp, const std::vector<std::string>& items) {
  std::vector<Event> out;
  for (const auto& s : items) out.push_back(ev(sp, s));
  return out;
}

inline SetFamily fam(const StateSpace& sp, const std::vector<std::string>& items) {
  return SetFamily(sp.size(), evs(sp, items));
}

inline std::vector<std::string> names(const StateSpace& sp, const std::vector<Event>& es) {
  std::vector<std::string> out;
  for (Event e : es) out.push_back(sp.format(e));
  return out;
}

inline std::vector<std::string> names(const StateSpace& sp, const SetFamily& f) { return names(sp, f.members()); }

inline Rational q(long n, long d = 1) { return Rational(n, d); }

}  // namespace th

#endif  // CPSAGREE_TESTS_HELPERS_HPP
