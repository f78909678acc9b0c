#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include "helpers.hpp"

using namespace cpsagree;
using th::ev;
using th::q;

namespace {

std::string slurp(const std::string& rel) {
  std::ifstream in(std::string(CPSAGREE_SOURCE_DIR) + "/" + rel);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Errc code_of(const std::string& text) {
  try {
    parse_instance(text);
  } catch (const Error& e) {
    return e.code();
  }
  return Errc::InternalError;
}

std::string message_of(const std::string& text) {
  try {
    parse_instance(text);
  } catch (const Error& e) {
    return e.what();
  }
  return {};
}

const char* kTiny = R"({
  "states": ["x", "y"],
  "agents": [
    {"name": "A", "family": [["y", "x"]], "measures": [{"given": ["x", "y"], "p": {"y": "4/6", "x": "2/6"}}]}
  ],
  "query": {"event": ["x"], "qA": "1/3", "qB": "2/6", "omega": "y"},
  "comment": "t"
})";

const char* kTinyCanonical = R"({
  "states": [
    "x",
    "y"
  ],
  "agents": [
    {
      "name": "A",
      "family": [
        [
          "x",
          "y"
        ]
      ],
      "measures": [
        {
          "given": [
            "x",
            "y"
          ],
          "p": {
            "x": "1/3",
            "y": "2/3"
          }
        }
      ]
    }
  ],
  "query": {
    "event": [
      "x"
    ],
    "qA": "1/3",
    "qB": "1/3",
    "omega": "y"
  },
  "comment": "t"
}
)";

std::string agent_doc(const std::string& family, const std::string& measures) {
  return R"({"states": ["a", "b"], "agents": [{"name": "A", "family": )" + family + R"(, "measures": )" + measures +
         "}]}";
}

}  // namespace

TEST(InstanceIo, ParsesShippedExamples) {
  InstanceFile f1 = parse_instance(slurp("instances/example1.json"));
  auto ex1 = instances::disagreement();
  ASSERT_EQ(f1.agents.size(), 2u);
  EXPECT_EQ(f1.agent("A").cps, ex1.a);
  EXPECT_EQ(f1.agent("B").cps, ex1.b);
  ASSERT_TRUE(f1.query);
  EXPECT_EQ(f1.query->event, Event{1});
  EXPECT_EQ(f1.query->qa, q(1));
  EXPECT_EQ(f1.query->qb, q(0));
  EXPECT_EQ(f1.query->omega, 1u);

  InstanceFile f2 = parse_instance(slurp("instances/example2.json"));
  auto ex2 = instances::agreement();
  EXPECT_EQ(f2.agents[0].cps, ex2.a);
  EXPECT_EQ(f2.agents[1].cps, ex2.b);
  EXPECT_EQ(f2.query->qa, q(1, 2));
  EXPECT_THROW(f2.agent("C"), Error);
}

TEST(InstanceIo, CanonicalSerialization) {
  InstanceFile f = parse_instance(kTiny);
  EXPECT_EQ(serialize_instance(f), kTinyCanonical);
  EXPECT_EQ(serialize_instance(parse_instance(kTinyCanonical)), kTinyCanonical);
}

TEST(InstanceIo, RoundTripsByteIdentically) {
  auto ex1 = instances::disagreement();
  auto ex2 = instances::agreement();
  for (const auto* p : {&ex1, &ex2}) {
    InstanceFile f = make_instance(p->a, p->b, "round trip");
    f.query = Query{Event{0, 1}, q(1, 2), q(3, 7), 2};
    std::string once = serialize_instance(f);
    InstanceFile back = parse_instance(once);
    EXPECT_EQ(back.agents[0].cps, p->a);
    EXPECT_EQ(back.agents[1].cps, p->b);
    EXPECT_EQ(back.query->qb, q(3, 7));
    EXPECT_EQ(back.comment, "round trip");
    EXPECT_EQ(serialize_instance(back), once);
  }
  for (const char* path : {"instances/example1.json", "instances/example2.json"}) {
    std::string canon = serialize_instance(parse_instance(slurp(path)));
    EXPECT_EQ(serialize_instance(parse_instance(canon)), canon);
  }
}

TEST(InstanceIo, QueryAndCommentAreOptional) {
  InstanceFile f = parse_instance(agent_doc(R"([["a","b"]])", R"([{"given":["a","b"],"p":{"a":"1"}}])"));
  EXPECT_FALSE(f.query);
  EXPECT_TRUE(f.comment.empty());
  EXPECT_EQ(f.agents[0].cps.measure(Event{0, 1}), ProbMeasure::dirac(2, 0));
  std::string s = serialize_instance(f);
  EXPECT_EQ(s.find("query"), std::string::npos);
  EXPECT_EQ(s.find("comment"), std::string::npos);
}

TEST(InstanceIo, MalformedJsonReportsLine) {
  std::string text = "{\n  \"states\": [\"a\"],\n  oops\n}";
  EXPECT_EQ(code_of(text), Errc::ParseError);
  EXPECT_NE(message_of(text).find("line 3"), std::string::npos) << message_of(text);
}

TEST(InstanceIo, BadRationals) {
  std::string zero = agent_doc(R"([["a","b"]])", R"([{"given":["a","b"],"p":{"a":"1/0"}}])");
  EXPECT_EQ(code_of(zero), Errc::ParseError);
  EXPECT_NE(message_of(zero).find("$.agents[0].measures[0].p.a"), std::string::npos);
  EXPECT_EQ(code_of(agent_doc(R"([["a","b"]])", R"([{"given":["a","b"],"p":{"a":"0.5"}}])")), Errc::ParseError);
  EXPECT_EQ(code_of(agent_doc(R"([["a","b"]])", R"([{"given":["a","b"],"p":{"a":1}}])")), Errc::ParseError);
}

TEST(InstanceIo, StructuralErrors) {
  EXPECT_EQ(code_of("[]"), Errc::ParseError);
  EXPECT_EQ(code_of(R"({"agents": []})"), Errc::ParseError);
  EXPECT_EQ(code_of(agent_doc(R"([[]])", "[]")), Errc::ParseError);
  std::string missing = R"({"states": ["a"], "agents": [{"name": "A", "family": [["a"]]}]})";
  EXPECT_NE(message_of(missing).find("$.agents[0]: missing field 'measures'"), std::string::npos);
}

TEST(InstanceIo, ReferenceErrors) {
  EXPECT_EQ(code_of(agent_doc(R"([["a","z"]])", "[]")), Errc::ReferenceError);
  EXPECT_EQ(code_of(agent_doc(R"([["a","b"]])", R"([{"given":["a","b"],"p":{"z":"1"}}])")), Errc::ReferenceError);
  EXPECT_EQ(code_of(agent_doc(R"([["a","b"]])", R"([{"given":["a"],"p":{"a":"1"}}])")), Errc::ReferenceError);
  std::string no_measure = agent_doc(R"([["a"],["a","b"]])", R"([{"given":["a","b"],"p":{"a":"1"}}])");
  EXPECT_EQ(code_of(no_measure), Errc::ReferenceError);
  EXPECT_NE(message_of(no_measure).find("no measure given {a}"), std::string::npos);
}

TEST(InstanceIo, DuplicateErrors) {
  EXPECT_EQ(code_of(agent_doc(R"([["a","b"],["b","a"]])", "[]")), Errc::DuplicateError);
  EXPECT_EQ(code_of(agent_doc(R"([["a","b"]])",
                              R"([{"given":["a","b"],"p":{"a":"1"}},{"given":["b","a"],"p":{"b":"1"}}])")),
            Errc::DuplicateError);
  EXPECT_EQ(code_of(R"({"states": ["a", "a"], "agents": []})"), Errc::DuplicateError);
  std::string agent = R"({"name": "A", "family": [["a"]], "measures": [{"given": ["a"], "p": {"a": "1"}}]})";
  EXPECT_EQ(code_of(R"({"states": ["a"], "agents": [)" + agent + "," + agent + "]}"), Errc::DuplicateError);
}

TEST(InstanceIo, MeasuresAreNotValidatedWhileParsing) {
  InstanceFile f = parse_instance(agent_doc(R"([["a","b"]])", R"([{"given":["a","b"],"p":{"a":"1/2","b":"1/3"}}])"));
  ValidationReport r = validate(f.agents[0].cps);
  ASSERT_FALSE(r.valid());
  EXPECT_EQ(r.violations.front().kind, ViolationKind::NotProbability);
}
