#ifndef CPSAGREE_AGREEMENT_HPP
#define CPSAGREE_AGREEMENT_HPP

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "cpsagree/assumptions.hpp"
#include "cpsagree/augmentation.hpp"
#include "cpsagree/cps.hpp"
#include "cpsagree/epistemic.hpp"
#include "cpsagree/error.hpp"
#include "cpsagree/event.hpp"
#include "cpsagree/instances.hpp"
#include "cpsagree/rational.hpp"
#include "cpsagree/renyi.hpp"
#include "cpsagree/set_family.hpp"

namespace cpsagree {

enum class Hypothesis { Reflection, OneClosed, Consistency };

inline const char* hypothesis_name(Hypothesis h) {
  switch (h) {
    case Hypothesis::Reflection: return "reflection";
    case Hypothesis::OneClosed: return "one_closed";
    case Hypothesis::Consistency: return "consistency";
  }
  return "";
}

inline std::optional<Hypothesis> parse_hypothesis(const std::string& s) {
  if (s == "reflection") return Hypothesis::Reflection;
  if (s == "one_closed") return Hypothesis::OneClosed;
  if (s == "consistency") return Hypothesis::Consistency;
  return std::nullopt;
}

enum class Verdict { AgreementConfirmed, HypothesisFailed, NotCommonCertainty, DisagreementUnderHypotheses };

inline const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::AgreementConfirmed: return "AgreementConfirmed";
    case Verdict::HypothesisFailed: return "HypothesisFailed";
    case Verdict::NotCommonCertainty: return "NotCommonCertainty";
    case Verdict::DisagreementUnderHypotheses: return "DISAGREEMENT_UNDER_HYPOTHESES";
  }
  return "";
}

/// Outcome of one agreement check. DisagreementUnderHypotheses means every
/// hypothesis held, ω is in the limit and qA != qB, which
/// should be impossible and points to a defect.
struct AgreementReport {
  RecursionKind kind = RecursionKind::Certainty;
  std::optional<AgentAssumptions> agent_a;  // absent for the knowledge variant
  std::optional<AgentAssumptions> agent_b;
  ConsistencyResult local_consistency;   // meet-atom form at ω; part of the verdict
  ConsistencyResult shared_consistency;  // every shared event containing ω; diagnostic only
  RecursionTrace trace;
  Event event;
  StateIndex omega = 0;
  bool omega_in_limit = false;
  Rational qa;
  Rational qb;
  Verdict verdict = Verdict::NotCommonCertainty;
  std::optional<Hypothesis> failed;

  std::string verdict_text() const {
    std::string v = verdict_name(verdict);
    if (failed) v += std::string("(") + hypothesis_name(*failed) + ")";
    return v;
  }
};

namespace detail {

inline void classify(AgreementReport& r) {
  if (r.agent_a && r.agent_b) {
    if (!r.agent_a->reflection.holds || !r.agent_b->reflection.holds)
      r.failed = Hypothesis::Reflection;
    else if (!r.agent_a->one_closed.holds || !r.agent_b->one_closed.holds)
      r.failed = Hypothesis::OneClosed;
  }
  if (!r.failed && !r.local_consistency.holds) r.failed = Hypothesis::Consistency;
  if (r.failed)
    r.verdict = Verdict::HypothesisFailed;
  else if (!r.omega_in_limit)
    r.verdict = Verdict::NotCommonCertainty;
  else if (r.qa == r.qb)
    r.verdict = Verdict::AgreementConfirmed;
  else
    r.verdict = Verdict::DisagreementUnderHypotheses;
}

}  // namespace detail

/// Agreement under common certainty: requires reflection and 1-closedness
/// for both agents plus local consistency at ω.
inline AgreementReport check_agreement(const Cps& a, const Cps& b, Event e, StateIndex omega, const Rational& qa,
                                       const Rational& qb) {
  require_same_space(a, b);
  AgreementReport r;
  r.kind = RecursionKind::Certainty;
  r.agent_a = assess_agent(a);
  r.agent_b = assess_agent(b);
  r.local_consistency = check_local_consistency(a, b, omega);
  r.shared_consistency = check_shared_consistency(a, b, omega);
  r.trace = common_certainty(a, b, e, qa, qb);
  r.event = e;
  r.omega = omega;
  r.omega_in_limit = member_of_limit(r.trace, omega);
  r.qa = qa;
  r.qb = qb;
  detail::classify(r);
  return r;
}

/// Agreement under common knowledge: local consistency is the only hypothesis.
inline AgreementReport check_knowledge_agreement(const Cps& a, const Cps& b, Event e, StateIndex omega,
                                                 const Rational& qa, const Rational& qb) {
  require_same_space(a, b);
  AgreementReport r;
  r.kind = RecursionKind::Knowledge;
  r.local_consistency = check_local_consistency(a, b, omega);
  r.shared_consistency = check_shared_consistency(a, b, omega);
  r.trace = common_knowledge(a, b, e, qa, qb);
  r.event = e;
  r.omega = omega;
  r.omega_in_limit = member_of_limit(r.trace, omega);
  r.qa = qa;
  r.qb = qb;
  detail::classify(r);
  return r;
}

/// If every atom inside G gives E the same probability q, then p_G(E) = q.
/// Returns true without checking when the atom values differ.
inline bool check_averaging(const Cps& cps, Event g, Event e) {
  cps.member_index(g);
  std::vector<Event> atoms = atoms_in(cps.family(), g);
  Rational q = cps.prob(atoms.front(), e);
  for (Event m : atoms)
    if (cps.prob(m, e) != q) return true;
  return cps.prob(g, e) == q;
}

// ---------------------------------------------------------------------------
// Instance generation

struct GeneratorConfig {
  std::size_t state_count = 4;
  std::uint64_t seed = 1;
  std::size_t trials = 1;
  bool shared_lexicographic = true;
  std::optional<Hypothesis> drop;
};

inline constexpr std::size_t kMaxGeneratedStates = 12;

inline void require_valid_config(const GeneratorConfig& c) {
  if (c.state_count < 1 || c.state_count > kMaxGeneratedStates)
    throw Error(Errc::ConfigError, "state_count must be between 1 and " + std::to_string(kMaxGeneratedStates));
  if (c.drop && c.state_count < 2)
    throw Error(Errc::ConfigError, "a single state cannot violate any hypothesis");
}

namespace gen {

/// Small deterministic generator; draws are reproducible across standard
/// library implementations because only the engine output is used.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  std::uint64_t below(std::uint64_t bound) { return engine_() % bound; }
  std::uint64_t between(std::uint64_t lo, std::uint64_t hi) { return lo + below(hi - lo + 1); }

 private:
  std::mt19937_64 engine_;
};

inline std::uint64_t mix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Measures with pairwise disjoint supports covering Ω, most dominant first;
/// each measure has full support on its block.
struct LexSequence {
  std::vector<Event> blocks;
  std::vector<ProbMeasure> measures;
};

inline ProbMeasure random_full_support(Rng& rng, std::size_t n, Event block) {
  std::vector<long> raw(n, 0);
  long total = 0;
  block.for_each([&](StateIndex s) {
    raw[s] = static_cast<long>(rng.between(1, 3));
    total += raw[s];
  });
  std::vector<Rational> w(n);
  block.for_each([&](StateIndex s) { w[s] = Rational(raw[s], total); });
  return ProbMeasure(std::move(w));
}

inline LexSequence from_blocks(Rng& rng, std::size_t n, std::vector<Event> blocks) {
  LexSequence seq;
  seq.blocks = std::move(blocks);
  for (Event b : seq.blocks) seq.measures.push_back(random_full_support(rng, n, b));
  return seq;
}

inline LexSequence random_sequence(Rng& rng, std::size_t n) {
  std::size_t k = rng.between(1, n);
  std::vector<Event> blocks(k);
  for (StateIndex s = 0; s < n; ++s) blocks[rng.below(k)] |= Event::singleton(s);
  blocks.erase(std::remove_if(blocks.begin(), blocks.end(), [](Event e) { return e.empty(); }), blocks.end());
  return from_blocks(rng, n, std::move(blocks));
}

/// Dominated-first levels: block j carries its measure plus +inf on every
/// more dominant block.
inline DimOrderedFamily as_levels(const LexSequence& seq, std::size_t n) {
  DimOrderedFamily dof;
  Event dominant;
  for (std::size_t j = 0; j < seq.blocks.size(); ++j) {
    ExtMeasure level(n);
    for (StateIndex s = 0; s < n; ++s)
      level.set(s, dominant.contains(s) ? ExtValue::infinity() : ExtValue(seq.measures[j].weight(s)));
    dof.levels.push_back(std::move(level));
    dominant |= seq.blocks[j];
  }
  std::reverse(dof.levels.begin(), dof.levels.end());
  return dof;
}

inline Cps induced(const LexSequence& seq, const StateSpace& space, const SetFamily& family) {
  return regenerate(as_levels(seq, space.size()), family, space);
}

inline SetFamily random_family(Rng& rng, std::size_t n) {
  std::vector<Event> gens{Event::full(n)};
  std::size_t g = rng.between(1, n);
  const std::uint64_t subsets = (std::uint64_t{1} << n) - 1;
  for (std::size_t i = 0; i < g; ++i) gens.emplace_back(rng.between(1, subsets));
  return close_family(SetFamily(n, gens));
}

/// All nonempty unions of a random partition that refines the sequence blocks.
/// Under a single full-support level the induced CPS is 1-closed and, its
/// atoms being disjoint, satisfies reflection.
inline SetFamily partition_family(Rng& rng, std::size_t n, const LexSequence& seq) {
  std::vector<Event> parts;
  for (Event b : seq.blocks) {
    std::size_t k = rng.between(1, b.size());
    std::vector<Event> split(k);
    b.for_each([&](StateIndex s) { split[rng.below(k)] |= Event::singleton(s); });
    for (Event e : split)
      if (!e.empty()) parts.push_back(e);
  }
  std::vector<Event> members;
  for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << parts.size()); ++mask) {
    Event u;
    for (std::size_t i = 0; i < parts.size(); ++i)
      if ((mask >> i) & 1U) u |= parts[i];
    members.push_back(u);
  }
  return SetFamily(n, std::move(members));
}

/// Re-augments until the induced CPS is 1-closed.
inline Cps one_closed_induced(const LexSequence& seq, const StateSpace& space, SetFamily family) {
  for (;;) {
    Cps cps = induced(seq, space, family);
    SetFamily next = augment_family(cps);
    if (next == family) return cps;
    family = std::move(next);
  }
}

/// A 1-closed agent satisfying reflection, induced by `seq`.
inline Cps hypothesis_agent(Rng& rng, const LexSequence& seq, const StateSpace& space) {
  const std::size_t n = space.size();
  for (int attempt = 0; attempt < 8; ++attempt) {
    Cps cps = one_closed_induced(seq, space, random_family(rng, n));
    if (check_reflection_atoms(cps).holds) return cps;
  }
  Cps cps = one_closed_induced(seq, space, partition_family(rng, n, seq));
  if (check_reflection_atoms(cps).holds) return cps;
  // Singleton atoms: nothing can fail.
  std::vector<Event> all;
  space.full().for_each_subset([&](Event e) {
    if (!e.empty()) all.push_back(e);
  });
  return induced(seq, space, SetFamily(n, std::move(all)));
}

inline bool some_state_inconsistent(const Cps& a, const Cps& b) {
  for (StateIndex s = 0; s < a.state_count(); ++s)
    if (!check_local_consistency(a, b, s).holds) return true;
  return false;
}

}  // namespace gen

/// Deterministic pair of CPSs for `config`.
///  - default: agents are 1-closed and satisfy reflection; with a shared
///    sequence they are also locally consistent everywhere;
///  - drop one_closed: shared sequence, no augmentation, and at least one
///    agent is not 1-closed;
///  - drop reflection: A has a nested atom whose enclosing measure also
///    charges its complement; A stays 1-closed, B satisfies everything;
///  - drop consistency: independent sequences whatever `shared_lexicographic`
///    says, and consistency fails at some state while both agents keep the
///    intra-agent hypotheses.
inline instances::AgentPair generate_instance(const GeneratorConfig& config) {
  require_valid_config(config);
  const std::size_t n = config.state_count;
  const StateSpace space = StateSpace::indexed(n);
  gen::Rng rng(gen::mix(config.seed));

  if (!config.drop) {
    gen::LexSequence seq_a = gen::random_sequence(rng, n);
    gen::LexSequence seq_b = config.shared_lexicographic ? seq_a : gen::random_sequence(rng, n);
    Cps a = gen::hypothesis_agent(rng, seq_a, space);
    Cps b = gen::hypothesis_agent(rng, seq_b, space);
    return {std::move(a), std::move(b)};
  }

  switch (*config.drop) {
    case Hypothesis::OneClosed: {
      for (int attempt = 0; attempt < 64; ++attempt) {
        gen::LexSequence seq = gen::random_sequence(rng, n);
        Cps a = gen::induced(seq, space, gen::random_family(rng, n));
        Cps b = gen::induced(seq, space, gen::random_family(rng, n));
        if (!check_one_closed(a).holds || !check_one_closed(b).holds) return {std::move(a), std::move(b)};
      }
      // A dominant singleton block makes the trivial family fail 1-closedness.
      gen::LexSequence seq = gen::from_blocks(rng, n, {Event::singleton(0), space.full() - Event::singleton(0)});
      return {gen::induced(seq, space, SetFamily(n, {space.full()})),
              gen::induced(seq, space, gen::random_family(rng, n))};
    }
    case Hypothesis::Reflection: {
      gen::LexSequence seq = gen::from_blocks(rng, n, {space.full()});
      const std::uint64_t proper = (std::uint64_t{1} << n) - 2;
      Event inner(rng.between(1, proper));
      Cps a = gen::induced(seq, space, SetFamily(n, {inner, space.full()}));
      Cps b = gen::induced(seq, space, gen::partition_family(rng, n, seq));
      return {std::move(a), std::move(b)};
    }
    case Hypothesis::Consistency: {
      for (int attempt = 0; attempt < 64; ++attempt) {
        gen::LexSequence seq_a = gen::random_sequence(rng, n);
        gen::LexSequence seq_b = gen::random_sequence(rng, n);
        Cps a = gen::hypothesis_agent(rng, seq_a, space);
        Cps b = gen::hypothesis_agent(rng, seq_b, space);
        if (gen::some_state_inconsistent(a, b)) return {std::move(a), std::move(b)};
      }
      // Trivial families whose only measures differ.
      gen::LexSequence seq_a = gen::from_blocks(rng, n, {space.full()});
      std::vector<Rational> w(n, Rational(1, static_cast<long>(n + 1)));
      w[0] = Rational(2, static_cast<long>(n + 1));
      gen::LexSequence seq_b{{space.full()}, {ProbMeasure(std::move(w))}};
      if (seq_b.measures[0] == seq_a.measures[0]) seq_b.measures[0] = ProbMeasure::uniform(n, space.full());
      return {gen::induced(seq_a, space, SetFamily(n, {space.full()})),
              gen::induced(seq_b, space, SetFamily(n, {space.full()}))};
    }
  }
  throw Error(Errc::ConfigError, "unknown hypothesis to drop");
}

// ---------------------------------------------------------------------------
// Counterexample search

enum class FindingKind {
  DisagreementUnderHypotheses,  // common certainty, all hypotheses, qA != qB
  KnowledgeDisagreement,        // common knowledge, local consistency, qA != qB
  CertaintyWithoutKnowledge,    // reflection + 1-closed, E common certainty at ω ∈ E, ω not in K-limit
  KnowledgeOutsideCertainty,    // ω in K-limit but not in C-limit
  CommonCertaintyDisagreement,  // ω in C-limit, qA != qB, some hypothesis fails (expected in drop modes)
};

inline const char* finding_name(FindingKind k) {
  switch (k) {
    case FindingKind::DisagreementUnderHypotheses: return "DISAGREEMENT_UNDER_HYPOTHESES";
    case FindingKind::KnowledgeDisagreement: return "KNOWLEDGE_DISAGREEMENT_UNDER_CONSISTENCY";
    case FindingKind::CertaintyWithoutKnowledge: return "CERTAINTY_WITHOUT_KNOWLEDGE";
    case FindingKind::KnowledgeOutsideCertainty: return "KNOWLEDGE_OUTSIDE_CERTAINTY";
    case FindingKind::CommonCertaintyDisagreement: return "COMMON_CERTAINTY_DISAGREEMENT";
  }
  return "";
}

/// True for findings that contradict a proven property; these mean a defect.
inline bool is_defect(FindingKind k) { return k != FindingKind::CommonCertaintyDisagreement; }

struct SearchWitness {
  std::size_t trial = 0;
  FindingKind kind = FindingKind::CommonCertaintyDisagreement;
  Cps a;
  Cps b;
  Event event;
  Rational qa;
  Rational qb;
  StateIndex omega = 0;
  std::optional<Hypothesis> failed;
};

struct SearchCounts {
  std::size_t hypothesis_instances = 0;  // both agents reflective + 1-closed, consistent at every state
  std::size_t candidates = 0;            // (E, qA, qB, ω) tuples examined
  std::size_t candidates_under_hypotheses = 0;
  std::size_t disagreements_under_hypotheses = 0;
  std::size_t common_certainty_disagreements = 0;
  std::size_t knowledge_candidates = 0;  // ω in K-limit with local consistency at ω
  std::size_t knowledge_disagreements = 0;
  std::size_t certainty_to_knowledge_cases = 0;
  std::size_t certainty_without_knowledge = 0;
  std::size_t knowledge_outside_certainty = 0;

  SearchCounts& operator+=(const SearchCounts& o) {
    hypothesis_instances += o.hypothesis_instances;
    candidates += o.candidates;
    candidates_under_hypotheses += o.candidates_under_hypotheses;
    disagreements_under_hypotheses += o.disagreements_under_hypotheses;
    common_certainty_disagreements += o.common_certainty_disagreements;
    knowledge_candidates += o.knowledge_candidates;
    knowledge_disagreements += o.knowledge_disagreements;
    certainty_to_knowledge_cases += o.certainty_to_knowledge_cases;
    certainty_without_knowledge += o.certainty_without_knowledge;
    knowledge_outside_certainty += o.knowledge_outside_certainty;
    return *this;
  }
  bool operator==(const SearchCounts&) const = default;
};

struct SearchReport {
  GeneratorConfig config;
  std::size_t trials = 0;
  SearchCounts counts;
  std::vector<SearchWitness> witnesses;  // at most one per trial and kind, in trial order

  std::size_t defects() const {
    return counts.disagreements_under_hypotheses + counts.knowledge_disagreements +
           counts.certainty_without_knowledge + counts.knowledge_outside_certainty;
  }
};

inline constexpr std::size_t kMaxReportedWitnesses = 16;

namespace detail {

struct TrialResult {
  SearchCounts counts;
  std::vector<SearchWitness> witnesses;
};

inline std::vector<Rational> distinct_values(std::vector<Rational> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

/// Every achieved (E, qA, qB) triple of one instance, every state ω.
inline TrialResult examine_instance(std::size_t trial, const Cps& a, const Cps& b) {
  TrialResult out;
  const std::size_t n = a.state_count();
  AgentAssumptions ha = assess_agent(a, true);
  AgentAssumptions hb = assess_agent(b, true);
  const bool intra = ha.reflection.holds && hb.reflection.holds && ha.one_closed.holds && hb.one_closed.holds;
  std::optional<Hypothesis> intra_failure;
  if (!ha.reflection.holds || !hb.reflection.holds)
    intra_failure = Hypothesis::Reflection;
  else if (!ha.one_closed.holds || !hb.one_closed.holds)
    intra_failure = Hypothesis::OneClosed;

  std::vector<bool> consistent(n);
  bool consistent_everywhere = true;
  for (StateIndex s = 0; s < n; ++s) {
    consistent[s] = check_local_consistency(a, b, s).holds;
    consistent_everywhere = consistent_everywhere && consistent[s];
  }
  if (intra && consistent_everywhere) ++out.counts.hypothesis_instances;

  bool recorded[5] = {false, false, false, false, false};
  auto record = [&](FindingKind kind, Event e, const Rational& qa, const Rational& qb, StateIndex s,
                    std::optional<Hypothesis> failed) {
    auto k = static_cast<std::size_t>(kind);
    if (recorded[k]) return;
    recorded[k] = true;
    out.witnesses.push_back({trial, kind, a, b, e, qa, qb, s, failed});
  };

  auto cert_a = [&](Event x) { return certainty_event(a, x); };
  auto cert_b = [&](Event x) { return certainty_event(b, x); };
  auto know_a = [&](Event x) { return knowledge_event(a, x); };
  auto know_b = [&](Event x) { return knowledge_event(b, x); };

  a.space().full().for_each_subset([&](Event e) {
    std::vector<Rational> bel_a = beliefs(a, e);
    std::vector<Rational> bel_b = beliefs(b, e);
    for (const Rational& qa : distinct_values(bel_a))
      for (const Rational& qb : distinct_values(bel_b)) {
        Event a0 = belief_fiber(bel_a, qa);
        Event b0 = belief_fiber(bel_b, qb);
        RecursionTrace ct = iterate_levels(RecursionKind::Certainty, a0, b0, n, cert_a, cert_b);
        RecursionTrace kt = iterate_levels(RecursionKind::Knowledge, a0, b0, n, know_a, know_b);
        const bool agree = qa == qb;
        const bool both_one = qa.is_one() && qb.is_one();
        for (StateIndex s = 0; s < n; ++s) {
          ++out.counts.candidates;
          const bool all_hyp = intra && consistent[s];
          if (all_hyp) ++out.counts.candidates_under_hypotheses;
          const bool in_c = ct.limit.contains(s);
          const bool in_k = kt.limit.contains(s);
          if (in_k && !in_c) {
            ++out.counts.knowledge_outside_certainty;
            record(FindingKind::KnowledgeOutsideCertainty, e, qa, qb, s, std::nullopt);
          }
          if (in_c && !agree) {
            if (all_hyp) {
              ++out.counts.disagreements_under_hypotheses;
              record(FindingKind::DisagreementUnderHypotheses, e, qa, qb, s, std::nullopt);
            } else {
              ++out.counts.common_certainty_disagreements;
              record(FindingKind::CommonCertaintyDisagreement, e, qa, qb, s,
                     intra_failure ? intra_failure : std::optional<Hypothesis>(Hypothesis::Consistency));
            }
          }
          if (in_k && consistent[s]) {
            ++out.counts.knowledge_candidates;
            if (!agree) {
              ++out.counts.knowledge_disagreements;
              record(FindingKind::KnowledgeDisagreement, e, qa, qb, s, std::nullopt);
            }
          }
          if (intra && both_one && in_c && e.contains(s)) {
            ++out.counts.certainty_to_knowledge_cases;
            if (!in_k) {
              ++out.counts.certainty_without_knowledge;
              record(FindingKind::CertaintyWithoutKnowledge, e, qa, qb, s, std::nullopt);
            }
          }
        }
      }
  });
  return out;
}

inline TrialResult run_trial(const GeneratorConfig& config, std::size_t trial) {
  if (trial == 0 && config.drop == Hypothesis::OneClosed) {
    instances::AgentPair canary = instances::disagreement();
    return examine_instance(trial, canary.a, canary.b);
  }
  GeneratorConfig one = config;
  one.seed = gen::mix(config.seed ^ gen::mix(trial));
  instances::AgentPair pair = generate_instance(one);
  return examine_instance(trial, pair.a, pair.b);
}

}  // namespace detail

/// Runs `config.trials` independent trials. In drop = one_closed mode trial 0
/// is the partition-information disagreement instance, as a canary. Results
/// are merged in trial order, so the report does not depend on `threads`.
inline SearchReport search_counterexamples(const GeneratorConfig& config, std::size_t threads = 1) {
  if (config.trials > 0) require_valid_config(config);
  SearchReport report;
  report.config = config;
  report.trials = config.trials;
  std::vector<detail::TrialResult> results(config.trials);
  threads = std::max<std::size_t>(1, std::min(threads, config.trials));
  if (threads == 1) {
    for (std::size_t t = 0; t < config.trials; ++t) results[t] = detail::run_trial(config, t);
  } else {
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(threads);
    for (std::size_t w = 0; w < threads; ++w)
      pool.emplace_back([&, w] {
        try {
          for (std::size_t t = w; t < config.trials; t += threads) results[t] = detail::run_trial(config, t);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    for (auto& th : pool) th.join();
    for (auto& e : errors)
      if (e) std::rethrow_exception(e);
  }
  for (auto& r : results) {
    report.counts += r.counts;
    for (auto& w : r.witnesses)
      if (report.witnesses.size() < kMaxReportedWitnesses) report.witnesses.push_back(std::move(w));
  }
  return report;
}

}  // namespace cpsagree

#endif  // CPSAGREE_AGREEMENT_HPP
