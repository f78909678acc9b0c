// Acceptance gate: one PASS/FAIL line per criterion.
//   acceptance                 run every criterion
//   acceptance --criterion N   run criterion N only
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "corpus.hpp"
#include "cpsagree.hpp"

using namespace cpsagree;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;

  void check(bool ok, const std::string& what) {
    if (!ok) {
      if (pass) detail.clear();
      pass = false;
      detail += (detail.empty() ? "" : "; ") + what;
    }
  }
};

InstanceFile load(const std::string& rel) {
  std::ifstream in(std::string(CPSAGREE_SOURCE_DIR) + "/" + rel);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_instance(ss.str());
}

Event ev(const StateSpace& sp, const std::vector<std::string>& labels) { return sp.event(labels); }

std::string fmt(const StateSpace& sp, Event e) { return sp.format(e); }

std::vector<Cps> small_corpus() { return corpus::exhaustive_upto(4); }

std::vector<Cps> full_corpus() {
  std::vector<Cps> c = small_corpus();
  std::vector<Cps> r = corpus::random_corpus(20240601, 1000, 1, 8);
  c.insert(c.end(), r.begin(), r.end());
  return c;
}

// 1. Partition-information example: common certainty trace.
Outcome criterion1() {
  Outcome o;
  InstanceFile f = load("instances/example1.json");
  const StateSpace& sp = f.space;
  RecursionTrace t = common_certainty(f.agent("A").cps, f.agent("B").cps, ev(sp, {"b"}), Rational(1), Rational(0));
  std::vector<std::pair<Event, Event>> expected{{ev(sp, {"b", "c"}), sp.full()},
                                                {ev(sp, {"b", "c"}), ev(sp, {"a", "b", "c"})},
                                                {ev(sp, {"b", "c"}), ev(sp, {"a", "b", "c"})}};
  o.check(t.levels == expected, "level trace differs");
  o.check(t.stabilized_at == 1, "stabilized at " + std::to_string(t.stabilized_at));
  o.check(t.limit == ev(sp, {"b", "c"}), "limit " + fmt(sp, t.limit));
  if (o.pass) o.detail = "A^0={b,c} B^0=Ω A^1={b,c} B^1={a,b,c}, limit " + fmt(sp, t.limit);
  return o;
}

// 2. Same example after augmenting both agents.
Outcome criterion2() {
  Outcome o;
  InstanceFile f = load("instances/example1.json");
  const StateSpace& sp = f.space;
  AugmentationResult ra = extend(f.agent("A").cps);
  AugmentationResult rb = extend(f.agent("B").cps);
  SetFamily hat_a(4, {ev(sp, {"b"}), ev(sp, {"c"}), ev(sp, {"d"}), ev(sp, {"a", "d"}), ev(sp, {"b", "c"}),
                      ev(sp, {"b", "d"}), ev(sp, {"c", "d"}), ev(sp, {"a", "b", "d"}), ev(sp, {"a", "c", "d"}),
                      ev(sp, {"b", "c", "d"}), sp.full()});
  std::vector<Event> every;
  for (Event e : corpus::nonempty_subsets(4)) every.push_back(e);
  o.check(ra.augmented_family == hat_a, "augmented family of A differs");
  o.check(rb.augmented_family == SetFamily(4, every), "augmented family of B is not every nonempty event");

  const Cps& a = ra.extended_cps;
  const Cps& b = rb.extended_cps;
  std::vector<Event> atoms_a{ev(sp, {"a", "d"}), ev(sp, {"b"}), ev(sp, {"c"}), ev(sp, {"d"})};
  for (StateIndex s = 0; s < 4; ++s) {
    o.check(a.atom(s) == atoms_a[s], "augmented atom of A at " + sp.label(s) + " is " + fmt(sp, a.atom(s)));
    o.check(b.atom(s) == Event::singleton(s), "augmented atom of B at " + sp.label(s) + " is " + fmt(sp, b.atom(s)));
  }
  o.check(a.measure(ev(sp, {"a", "d"})) == ProbMeasure::dirac(4, 3), "extended A given {a,d} is not δ_d");
  o.check(a.measure(ev(sp, {"b", "c"})) == ProbMeasure::dirac(4, 1), "extended A given {b,c} is not δ_b");

  RecursionTrace t = common_certainty(a, b, ev(sp, {"b"}), Rational(1), Rational(0));
  o.check(t.levels.front() == std::make_pair(ev(sp, {"b"}), ev(sp, {"a", "c", "d"})), "level 0 differs");
  o.check(t.levels.size() > 1 && t.levels[1] == std::make_pair(Event{}, Event{}), "level 1 is not (∅, ∅)");
  o.check(t.limit.empty(), "limit " + fmt(sp, t.limit));

  // Both agents condition on {b,c} and disagree there.
  ConsistencyResult c = check_shared_consistency(a, b, sp.index_of("b"));
  o.check(!c.holds, "shared-event consistency at b holds");
  o.check(c.event == ev(sp, {"b", "c"}), "inconsistency reported on " + fmt(sp, c.event));
  o.check(c.witness && c.witness->measure_a == ProbMeasure::dirac(4, 1) && c.witness->measure_b == ProbMeasure::dirac(4, 2),
          "witness measures are not δ_b vs δ_c");
  if (o.pass)
    o.detail = "11 and 15 members, limit ∅, consistency fails on {b,c}: δ_b vs δ_c (meet-atom form at b: " +
               std::string(check_local_consistency(a, b, 1).holds ? "holds" : "fails") + ")";
  return o;
}

// 3. Agreement example.
Outcome criterion3() {
  Outcome o;
  InstanceFile f = load("instances/example2.json");
  const StateSpace& sp = f.space;
  const Cps& a = f.agent("A").cps;
  const Cps& b = f.agent("B").cps;
  for (const auto& agent : f.agents) {
    const std::string& n = agent.name;
    o.check(validate(agent.cps).valid(), n + " is not a valid CPS");
    OneClosedResult oc = check_one_closed(agent.cps);
    o.check(oc.holds, n + " is not 1-closed (" + (oc.witness ? fmt(sp, *oc.witness) : "") + " has probability one)");
    o.check(check_reflection_direct(agent.cps).holds, n + " fails direct reflection");
    try {
      o.check(check_reflection_atoms(agent.cps).holds, n + " fails atom reflection");
    } catch (const Error& e) {
      o.check(false, n + ": atom reflection checker refused (" + std::string(e.what()) + ")");
    }
  }
  for (StateIndex s = 0; s < 4; ++s)
    o.check(check_local_consistency(a, b, s).holds, "local consistency fails at " + sp.label(s));
  RecursionTrace t = common_certainty(a, b, ev(sp, {"a"}), Rational(1, 2), Rational(1, 2));
  o.check(t.limit == ev(sp, {"a", "b"}), "limit " + fmt(sp, t.limit));
  AgreementReport r = check_agreement(a, b, ev(sp, {"a"}), sp.index_of("a"), Rational(1, 2), Rational(1, 2));
  o.check(r.verdict == Verdict::AgreementConfirmed, "verdict " + r.verdict_text());
  if (o.pass) o.detail = "limit {a,b}, AgreementConfirmed";
  return o;
}

// 4. Extension to the augmented family.
Outcome criterion4() {
  Outcome o;
  std::vector<Cps> cps = full_corpus();
  std::size_t fixed = 0;
  for (const Cps& c : cps) {
    AugmentationResult r = extend(c);
    for (Event g : c.family())
      if (!(r.extended_cps.measure(g) == c.measure(g))) o.check(false, "extension changed a measure");
    o.check(validate(r.extended_cps).valid(), "extension is not a valid CPS");
    o.check(verify_no_new_ones(r).holds, "extension created a probability-one event");
    o.check(verify_idempotent(r), "augmentation is not idempotent");
    bool fp = is_fixed_point(c);
    o.check(fp == check_one_closed(c).holds, "fixed point and 1-closedness disagree");
    fixed += fp;
    if (!o.pass) break;
  }
  if (o.pass)
    o.detail = std::to_string(cps.size()) + " CPSs (" + std::to_string(small_corpus().size()) +
               " exhaustive up to 4 states, 1000 random up to 8), " + std::to_string(fixed) + " fixed points";
  return o;
}

// 5. Representation round trip.
Outcome criterion5() {
  Outcome o;
  std::vector<Cps> cps = full_corpus();
  for (const Cps& c : cps) {
    DimOrderedFamily dof = represent(c);
    o.check(verify(dof, c.family()).holds, "representation fails verification");
    o.check(regenerate(dof, c.family(), c.space()) == c, "round trip changed the CPS");
    if (!o.pass) break;
  }
  if (o.pass) o.detail = std::to_string(cps.size()) + " CPSs round-tripped";
  return o;
}

std::vector<SearchReport> hypothesis_search() {
  std::vector<SearchReport> out;
  for (std::size_t n = 2; n <= 6; ++n) {
    GeneratorConfig c;
    c.state_count = n;
    c.seed = 1000 + n;
    c.trials = 2000;
    out.push_back(search_counterexamples(c));
  }
  return out;
}

// 6. No disagreement under every hypothesis.
Outcome criterion6() {
  Outcome o;
  SearchCounts total;
  std::size_t trials = 0;
  for (const SearchReport& r : hypothesis_search()) {
    total += r.counts;
    trials += r.trials;
  }
  o.check(total.hypothesis_instances >= 10000, "only " + std::to_string(total.hypothesis_instances) + " instances satisfy every hypothesis");
  o.check(total.disagreements_under_hypotheses == 0,
          std::to_string(total.disagreements_under_hypotheses) + " DISAGREEMENT_UNDER_HYPOTHESES");
  if (o.pass)
    o.detail = std::to_string(total.hypothesis_instances) + " instances, " +
               std::to_string(total.candidates_under_hypotheses) + " candidates, 0 disagreements";
  return o;
}

// 7. Certainty to knowledge, and agreement under common knowledge.
Outcome criterion7() {
  Outcome o;
  SearchCounts total;
  for (const SearchReport& r : hypothesis_search()) total += r.counts;
  o.check(total.certainty_to_knowledge_cases > 0, "no case with qA = qB = 1 and ω in the limit and in E");
  o.check(total.certainty_without_knowledge == 0,
          std::to_string(total.certainty_without_knowledge) + " cases certain but not known");
  o.check(total.knowledge_candidates > 0, "no common-knowledge candidate");
  o.check(total.knowledge_disagreements == 0, std::to_string(total.knowledge_disagreements) + " knowledge disagreements");
  o.check(total.knowledge_outside_certainty == 0, "knowledge limit outside certainty limit");
  if (o.pass)
    o.detail = std::to_string(total.certainty_to_knowledge_cases) + " certainty cases, " +
               std::to_string(total.knowledge_candidates) + " knowledge candidates";
  return o;
}

// 8. Both reflection checkers agree on 1-closed CPSs.
Outcome criterion8() {
  Outcome o;
  std::size_t closed = 0, failing = 0;
  for (const Cps& c : small_corpus()) {
    if (!check_one_closed(c).holds) continue;
    ++closed;
    bool direct = check_reflection_direct(c).holds;
    o.check(direct == check_reflection_atoms(c).holds, "checkers disagree");
    failing += !direct;
    if (!o.pass) break;
  }
  if (o.pass)
    o.detail = std::to_string(closed) + " 1-closed CPSs, " + std::to_string(failing) + " without reflection";
  return o;
}

// 9. Ordered decomposition and averaging over atoms, from definitions.
Outcome criterion9() {
  Outcome o;
  std::size_t pairs = 0, averaged = 0;
  for (const Cps& c : small_corpus()) {
    const SetFamily& fam = c.family();
    for (Event g : fam) {
      // Distinct atoms inside G from the definition, then ordered by size.
      std::vector<Event> mu;
      g.for_each([&](StateIndex s) {
        Event m = corpus::naive_atom(fam, s);
        if (std::find(mu.begin(), mu.end(), m) == mu.end()) mu.push_back(m);
      });
      std::stable_sort(mu.begin(), mu.end(), [](Event x, Event y) { return x.size() < y.size(); });
      std::vector<Event> lib = atoms_in(fam, g);
      o.check(std::is_permutation(lib.begin(), lib.end(), mu.begin(), mu.end()), "atoms_in differs from the definition");
      for (const std::vector<Event>* order : {&mu, &lib}) {
        Event u;
        for (std::size_t j = 0; j < order->size(); ++j) {
          Event inner;
          for (std::size_t r = 0; r < j; ++r)
            if ((*order)[r].proper_subset_of((*order)[j])) inner |= (*order)[r];
          o.check((u & (*order)[j]) == inner, "decomposition identity fails");
          u |= (*order)[j];
          o.check(fam.contains(u), "prefix union is not a member");
        }
        o.check(u == g, "atoms do not cover G");
      }
      for (Event e : corpus::subsets_of(c.space().full())) {
        ++pairs;
        Rational q = c.prob(mu.front(), e);
        bool same = std::all_of(mu.begin(), mu.end(), [&](Event m) { return c.prob(m, e) == q; });
        if (same) {
          ++averaged;
          o.check(c.prob(g, e) == q, "averaging fails");
        }
        o.check(check_averaging(c, g, e), "check_averaging fails");
      }
      if (!o.pass) return o;
    }
  }
  o.detail = std::to_string(pairs) + " (G, E) pairs, " + std::to_string(averaged) + " with equal atom values";
  return o;
}

// 10. Dropping 1-closedness reproduces the disagreement.
Outcome criterion10() {
  Outcome o;
  GeneratorConfig c;
  c.state_count = 4;
  c.seed = 7;
  c.trials = 100;
  c.drop = Hypothesis::OneClosed;
  SearchReport first = search_counterexamples(c);
  SearchReport again = search_counterexamples(c);
  SearchReport threaded = search_counterexamples(c, 3);
  o.check(first.counts.common_certainty_disagreements > 0, "no common-certainty disagreement found");
  o.check(!first.witnesses.empty() && first.witnesses.front().trial == 0 &&
              first.witnesses.front().a == instances::disagreement().a,
          "trial 0 is not the partition example");
  o.check(first.defects() == 0, "defects reported");
  o.check(first.counts == again.counts && first.counts == threaded.counts, "counts depend on the run");
  bool same = first.witnesses.size() == again.witnesses.size();
  for (std::size_t i = 0; same && i < first.witnesses.size(); ++i)
    same = first.witnesses[i].trial == again.witnesses[i].trial && first.witnesses[i].a == again.witnesses[i].a &&
           first.witnesses[i].b == again.witnesses[i].b && first.witnesses[i].event == again.witnesses[i].event;
  o.check(same, "witnesses depend on the run");
  if (o.pass)
    o.detail = std::to_string(first.counts.common_certainty_disagreements) +
               " common-certainty disagreements in 100 trials, identical on rerun";
  return o;
}

struct Criterion {
  std::function<Outcome()> run;
  double budget_seconds;
};

}  // namespace

int main(int argc, char** argv) {
  std::vector<Criterion> all{{criterion1, 1},   {criterion2, 1},   {criterion3, 1},  {criterion4, 300},
                             {criterion5, 60},  {criterion6, 600}, {criterion7, 600}, {criterion8, 60},
                             {criterion9, 120}, {criterion10, 60}};
  std::vector<int> which;
  for (int i = 1; i < argc; ++i) {
    std::string arg = argv[i];
    if (arg == "--criterion" && i + 1 < argc) {
      which.push_back(std::atoi(argv[++i]));
    } else {
      std::cerr << "usage: acceptance [--criterion N]\n";
      return 2;
    }
  }
  if (which.empty())
    for (int i = 1; i <= 10; ++i) which.push_back(i);

  int failures = 0;
  for (int k : which) {
    if (k < 1 || k > 10) {
      std::cerr << "no criterion " << k << "\n";
      return 2;
    }
    auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = all[k - 1].run();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (secs > all[k - 1].budget_seconds) {
      o.pass = false;
      o.detail += " (over the " + std::to_string(static_cast<int>(all[k - 1].budget_seconds)) + " s budget)";
    }
    std::ostringstream t;
    t.precision(3);
    t << std::fixed << secs;
    std::cout << "criterion " << k << ": " << (o.pass ? "PASS" : "FAIL") << " [" << t.str() << " s] " << o.detail
              << std::endl;
    failures += !o.pass;
  }
  return failures == 0 ? 0 : 1;
}
