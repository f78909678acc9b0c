#include <gtest/gtest.h>

#include "corpus.hpp"
#include "helpers.hpp"

using namespace cpsagree;
using th::ev;
using th::names;
using th::q;

namespace {

const StateSpace kAbcd = instances::abcd();

std::vector<std::string> text(const DimOrderedFamily& dof) {
  std::vector<std::string> out;
  for (const ExtMeasure& m : dof.levels) {
    std::string s;
    for (const ExtValue& v : m.values()) s += (s.empty() ? "" : " ") + v.to_string();
    out.push_back(s);
  }
  return out;
}

}  // namespace

TEST(Augment, DisagreementExampleAgentA) {
  auto ex1 = instances::disagreement();
  AugmentationResult r = extend(ex1.a);
  EXPECT_EQ(names(kAbcd, r.augmented_family),
            (std::vector<std::string>{"{b}", "{c}", "{d}", "{b,c}", "{a,d}", "{b,d}", "{c,d}", "{a,b,d}", "{a,c,d}",
                                      "{b,c,d}", "{a,b,c,d}"}));
  EXPECT_EQ(names(kAbcd, r.atoms), (std::vector<std::string>{"{a}", "{b}", "{c}", "{d}"}));
  EXPECT_EQ(r.dimensions, (std::vector<Dimension>{0, 1, 0, 2}));
  EXPECT_FALSE(r.witnesses[0]);
  EXPECT_EQ(*r.witnesses[1], ev(kAbcd, "b,c"));
  EXPECT_EQ(*r.witnesses[3], ev(kAbcd, "a,d"));
  EXPECT_TRUE(r.extended_levels.has_bottom_level);
  EXPECT_EQ(text(r.extended_levels), (std::vector<std::string>{"1 inf 1 inf", "0 1 0 inf", "0 0 0 1"}));
  EXPECT_EQ(r.extended_cps.measure(ev(kAbcd, "c")), ProbMeasure::dirac(4, 2));
  EXPECT_EQ(r.extended_cps.measure(ev(kAbcd, "b,c")), ProbMeasure::dirac(4, 1));
  EXPECT_EQ(r.extended_cps.measure(ev(kAbcd, "a,c,d")), ProbMeasure::dirac(4, 3));
}

TEST(Augment, DisagreementExampleAgentB) {
  auto ex1 = instances::disagreement();
  AugmentationResult r = extend(ex1.b);
  EXPECT_EQ(r.augmented_family.size(), 15u);
  EXPECT_EQ(r.dimensions, (std::vector<Dimension>{0, 0, 1, 2}));
  EXPECT_EQ(text(r.extended_levels), (std::vector<std::string>{"1 1 inf inf", "0 0 1 inf", "0 0 0 1"}));
  EXPECT_EQ(r.extended_cps.measure(ev(kAbcd, "b,c")), ProbMeasure::dirac(4, 2));
  EXPECT_EQ(r.extended_cps.measure(ev(kAbcd, "a,b")), instances::weights4(q(1, 2), q(1, 2), 0, 0));
}

TEST(Augment, OneClosedInputIsAFixedPoint) {
  auto ex2 = instances::agreement();
  EXPECT_TRUE(is_fixed_point(ex2.a));
  AugmentationResult r = extend(ex2.a);
  EXPECT_EQ(r.augmented_family, ex2.a.family());
  EXPECT_EQ(r.extended_cps, ex2.a);
}

TEST(Augment, AgreementExampleAgentB) {
  auto ex2 = instances::agreement();
  EXPECT_FALSE(is_fixed_point(ex2.b));
  AugmentationResult r = extend(ex2.b);
  EXPECT_EQ(names(kAbcd, r.augmented_family),
            (std::vector<std::string>{"{a}", "{b}", "{a,b}", "{c,d}", "{a,c,d}", "{b,c,d}", "{a,b,c,d}"}));
  EXPECT_EQ(names(kAbcd, r.atoms), (std::vector<std::string>{"{a}", "{b}", "{c,d}"}));
  EXPECT_EQ(r.dimensions, (std::vector<Dimension>{1, 1, 2}));
  EXPECT_EQ(r.extended_cps.measure(ev(kAbcd, "a")), ProbMeasure::dirac(4, 0));
  EXPECT_EQ(r.extended_cps.measure(ev(kAbcd, "a,c,d")), instances::weights4(0, 0, q(1, 2), q(1, 2)));
  EXPECT_TRUE(check_one_closed(r.extended_cps).holds);
}

TEST(Augment, FamilyIsClosureOfCertainEvents) {
  auto ex1 = instances::disagreement();
  for (const Cps* c : {&ex1.a, &ex1.b})
    EXPECT_EQ(augment_family(*c).members(), corpus::naive_close(corpus::naive_certain_events(*c)));
}

TEST(Augment, InvariantsOnCorpus) {
  auto cps = corpus::exhaustive_upto(4, 5);
  auto rnd = corpus::random_corpus(7, 300, 5, 8);
  cps.insert(cps.end(), rnd.begin(), rnd.end());
  for (const Cps& c : cps) {
    AugmentationResult r = extend(c);
    ASSERT_EQ(r.augmented_family.members(), corpus::naive_close(corpus::naive_certain_events(c)));
    for (Event g : c.family()) {
      ASSERT_TRUE(r.augmented_family.contains(g));
      ASSERT_EQ(r.extended_cps.measure(g), c.measure(g));
    }
    ASSERT_TRUE(corpus::naive_valid(r.extended_cps) || c.state_count() > 5);
    ASSERT_TRUE(validate(r.extended_cps).valid());
    ASSERT_TRUE(verify_no_new_ones(r).holds);
    ASSERT_TRUE(check_one_closed(r.extended_cps).holds);
    ASSERT_TRUE(verify_idempotent(r));
    ASSERT_EQ(r.dimensions.size(), r.atoms.size());
    ASSERT_EQ(is_fixed_point(c), check_one_closed(c).holds);
  }
}
