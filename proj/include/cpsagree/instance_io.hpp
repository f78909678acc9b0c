#ifndef CPSAGREE_INSTANCE_IO_HPP
#define CPSAGREE_INSTANCE_IO_HPP

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "cpsagree/cps.hpp"
#include "cpsagree/error.hpp"
#include "cpsagree/event.hpp"
#include "cpsagree/rational.hpp"

namespace cpsagree {

struct AgentSpec {
  std::string name;
  Cps cps;
};

struct Query {
  Event event;
  Rational qa;
  Rational qb;
  std::optional<StateIndex> omega;
};

/// One document: the state space, any number of agents (two-agent commands
/// use the first two) and an optional query.
struct InstanceFile {
  StateSpace space;
  std::vector<AgentSpec> agents;
  std::optional<Query> query;
  std::string comment;

  const AgentSpec& agent(const std::string& name) const {
    for (const auto& a : agents)
      if (a.name == name) return a;
    throw Error(Errc::ReferenceError, "no agent named '" + name + "'");
  }
};

namespace io_detail {

using json = nlohmann::json;

inline std::string line_col(std::string_view text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

[[noreturn]] inline void fail(const std::string& path, const std::string& what) {
  throw Error(Errc::ParseError, path + ": " + what);
}

inline const json& field(const json& obj, const char* key, const std::string& path) {
  auto it = obj.find(key);
  if (it == obj.end()) fail(path, std::string("missing field '") + key + "'");
  return *it;
}

inline std::string as_string(const json& v, const std::string& path) {
  if (!v.is_string()) fail(path, "expected a string");
  return v.get<std::string>();
}

inline Rational as_rational(const json& v, const std::string& path) {
  std::string s = as_string(v, path);
  try {
    return Rational::parse(s);
  } catch (const Error& e) {
    fail(path, "bad rational \"" + s + "\": " + e.what());
  }
}

inline Event as_event(const StateSpace& space, const json& v, const std::string& path) {
  if (!v.is_array()) fail(path, "expected a list of state labels");
  Event e;
  for (std::size_t i = 0; i < v.size(); ++i) e = e.with(space.index_of(as_string(v[i], path + "[" + std::to_string(i) + "]")));
  return e;
}

inline AgentSpec parse_agent(const StateSpace& space, const json& v, const std::string& path) {
  if (!v.is_object()) fail(path, "expected an object");
  AgentSpec agent;
  agent.name = as_string(field(v, "name", path), path + ".name");
  const std::size_t n = space.size();

  const json& fam = field(v, "family", path);
  if (!fam.is_array()) fail(path + ".family", "expected a list of events");
  std::vector<Event> members;
  for (std::size_t i = 0; i < fam.size(); ++i) {
    std::string p = path + ".family[" + std::to_string(i) + "]";
    Event e = as_event(space, fam[i], p);
    if (e.empty()) fail(p, "conditioning events must be nonempty");
    for (Event m : members)
      if (m == e) throw Error(Errc::DuplicateError, p + ": family member " + space.format(e) + " listed twice");
    members.push_back(e);
  }

  const json& ms = field(v, "measures", path);
  if (!ms.is_array()) fail(path + ".measures", "expected a list of measures");
  std::vector<std::optional<ProbMeasure>> given(members.size());
  for (std::size_t i = 0; i < ms.size(); ++i) {
    std::string p = path + ".measures[" + std::to_string(i) + "]";
    if (!ms[i].is_object()) fail(p, "expected an object");
    Event g = as_event(space, field(ms[i], "given", p), p + ".given");
    std::size_t slot = members.size();
    for (std::size_t k = 0; k < members.size(); ++k)
      if (members[k] == g) slot = k;
    if (slot == members.size())
      throw Error(Errc::ReferenceError, p + ": measure given " + space.format(g) + ", which is not in the family");
    if (given[slot]) throw Error(Errc::DuplicateError, p + ": second measure given " + space.format(g));
    const json& weights = field(ms[i], "p", p);
    if (!weights.is_object()) fail(p + ".p", "expected an object mapping labels to rationals");
    std::vector<Rational> w(n);
    for (auto it = weights.begin(); it != weights.end(); ++it)
      w[space.index_of(it.key())] = as_rational(it.value(), p + ".p." + it.key());
    given[slot] = ProbMeasure(std::move(w));
  }

  std::vector<std::pair<Event, ProbMeasure>> entries;
  for (std::size_t k = 0; k < members.size(); ++k) {
    if (!given[k])
      throw Error(Errc::ReferenceError,
                  path + ": agent " + agent.name + " has no measure given " + space.format(members[k]));
    entries.emplace_back(members[k], *given[k]);
  }
  agent.cps = Cps(space, entries);
  return agent;
}

inline nlohmann::ordered_json event_json(const StateSpace& space, Event e) {
  nlohmann::ordered_json out = nlohmann::ordered_json::array();
  e.for_each([&](StateIndex s) { out.push_back(space.label(s)); });
  return out;
}

}  // namespace io_detail

/// Parses an instance document. Structural and referential checks only; the
/// measures are not validated as a CPS here.
inline InstanceFile parse_instance(std::string_view text) {
  using io_detail::json;
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw Error(Errc::ParseError, "malformed JSON at " + io_detail::line_col(text, e.byte == 0 ? 0 : e.byte - 1));
  }
  if (!doc.is_object()) io_detail::fail("$", "expected an object");

  InstanceFile file;
  const json& states = io_detail::field(doc, "states", "$");
  if (!states.is_array()) io_detail::fail("$.states", "expected a list of labels");
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < states.size(); ++i)
    labels.push_back(io_detail::as_string(states[i], "$.states[" + std::to_string(i) + "]"));
  try {
    file.space = StateSpace(std::move(labels));
  } catch (const Error& e) {
    if (e.code() == Errc::DuplicateError) throw;
    io_detail::fail("$.states", e.what());
  }

  const json& agents = io_detail::field(doc, "agents", "$");
  if (!agents.is_array()) io_detail::fail("$.agents", "expected a list of agents");
  for (std::size_t i = 0; i < agents.size(); ++i) {
    AgentSpec a = io_detail::parse_agent(file.space, agents[i], "$.agents[" + std::to_string(i) + "]");
    for (const auto& other : file.agents)
      if (other.name == a.name) throw Error(Errc::DuplicateError, "agent name '" + a.name + "' used twice");
    file.agents.push_back(std::move(a));
  }

  if (auto q = doc.find("query"); q != doc.end() && !q->is_null()) {
    if (!q->is_object()) io_detail::fail("$.query", "expected an object");
    Query query;
    query.event = io_detail::as_event(file.space, io_detail::field(*q, "event", "$.query"), "$.query.event");
    query.qa = io_detail::as_rational(io_detail::field(*q, "qA", "$.query"), "$.query.qA");
    query.qb = io_detail::as_rational(io_detail::field(*q, "qB", "$.query"), "$.query.qB");
    if (auto w = q->find("omega"); w != q->end() && !w->is_null())
      query.omega = file.space.index_of(io_detail::as_string(*w, "$.query.omega"));
    file.query = query;
  }
  if (auto c = doc.find("comment"); c != doc.end() && !c->is_null())
    file.comment = io_detail::as_string(*c, "$.comment");
  return file;
}

inline nlohmann::ordered_json instance_json(const InstanceFile& file) {
  using oj = nlohmann::ordered_json;
  const StateSpace& space = file.space;
  oj doc;
  doc["states"] = space.labels();
  oj agents = oj::array();
  for (const auto& a : file.agents) {
    oj agent;
    agent["name"] = a.name;
    oj family = oj::array();
    oj measures = oj::array();
    for (Event g : a.cps.family()) {
      family.push_back(io_detail::event_json(space, g));
      oj p = oj::object();
      const ProbMeasure& m = a.cps.measure(g);
      for (StateIndex s = 0; s < space.size(); ++s)
        if (!m.weight(s).is_zero()) p[space.label(s)] = m.weight(s).to_string();
      measures.push_back(oj{{"given", io_detail::event_json(space, g)}, {"p", p}});
    }
    agent["family"] = family;
    agent["measures"] = measures;
    agents.push_back(agent);
  }
  doc["agents"] = agents;
  if (file.query) {
    oj q;
    q["event"] = io_detail::event_json(space, file.query->event);
    q["qA"] = file.query->qa.to_string();
    q["qB"] = file.query->qb.to_string();
    if (file.query->omega) q["omega"] = space.label(*file.query->omega);
    doc["query"] = q;
  }
  if (!file.comment.empty()) doc["comment"] = file.comment;
  return doc;
}

/// Canonical text: members in canonical order, labels in index order,
/// reduced rationals, zero weights omitted, trailing newline.
inline std::string serialize_instance(const InstanceFile& file) { return instance_json(file).dump(2) + "\n"; }

inline InstanceFile make_instance(const Cps& a, const Cps& b, std::string comment = {}) {
  require_same_space(a, b);
  return InstanceFile{a.space(), {{"A", a}, {"B", b}}, std::nullopt, std::move(comment)};
}

}  // namespace cpsagree

#endif  // CPSAGREE_INSTANCE_IO_HPP
