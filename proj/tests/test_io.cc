/*
 * Copyright (c) 2026, The cwall Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
*/

#include <gtest/gtest.h>

#include <sstream>

#include "cwall/corpus.hh"
#include "cwall/report.hh"
#include "cwall/session.hh"
#include "fixtures.hh"
#include "json.hpp"

namespace cwall {
namespace {

using namespace testing;

std::string scenario(const std::string& name) {
  return std::string(CWALL_SCENARIO_DIR) + "/" + name;
}

std::size_t parse_error_line(std::string_view text) {
  try {
    parse_policy(text);
  } catch (const ParseError& e) {
    return e.line();
  }
  return 0;
}

TEST(PolicyText, ErrorsCarryLineNumbers) {
  EXPECT_EQ(parse_error_line("[coics]\nc0\n[bogus]\n"), 3u);
  EXPECT_EQ(parse_error_line("c0\n"), 1u);
  EXPECT_EQ(parse_error_line("[coics]\nc0\nc0\n"), 3u);
  EXPECT_EQ(parse_error_line("# note\n[coics]\nc0\n[datasets]\nd0 : c9\n"), 5u);
  EXPECT_EQ(parse_error_line("[coics]\nc0\n[datasets]\nd0 c0\n"), 4u);
  EXPECT_EQ(parse_error_line(
                "[coics]\nc0\n[datasets]\nd0 : c0\n[objects]\no0 : d7\n"),
            6u);
  EXPECT_EQ(parse_error_line("[coics]\na sanitized\nb sanitized\n"), 3u);
}

TEST(PolicyText, ValidationErrorsAreDistinct) {
  // A dataset bound to two CoICs parses but fails validation.
  EXPECT_THROW(load_policy_text("[coics]\nc0\nc1\n[datasets]\nd0 : c0\n"
                                "d0 : c1\n[objects]\n[subjects]\n"),
               ValidationError);
}

TEST(PolicyText, RoundTripsThroughRender) {
  for (const Policy& p : {banks_and_oil(2), with_sanitized(), relay()}) {
    const Policy q = load_policy_text(render_policy(p));
    EXPECT_EQ(render_policy(q), render_policy(p));
    EXPECT_EQ(q.object_count(), p.object_count());
    for (std::uint32_t o = 0; o < p.object_count(); ++o) {
      EXPECT_EQ(q.label(ObjectId{o}), p.label(ObjectId{o}));
    }
  }
  for (const auto& p : micro_corpus()) {
    EXPECT_EQ(render_policy(load_policy_text(render_policy(p))),
              render_policy(p));
  }
}

TEST(StateText, RoundTrip) {
  const Policy p = relay();
  const auto s = st(p, "N={(s0,o1),(s1,o3)} W={(s1,o3)}");
  EXPECT_EQ(parse_state(p, format_state(p, s)), s);
  EXPECT_THROW(parse_state(p, "N={(s0,o9)} W={}"), ParseError);
  EXPECT_THROW(parse_state(p, "N={(s0,o1) W={}"), ParseError);
  EXPECT_THROW(parse_state(p, "W={}"), ParseError);
}

TEST(TraceText, Suffixes) {
  const Policy p = banks_and_oil();
  const auto t = parse_trace(p,
                             "# comment\n"
                             "read s0 o1 !rule xR*\n"
                             "\n"
                             "read s0 o2 !revokes s0 o1\n"
                             "write s0 o0 !deny\n"
                             "rw s0 o2 !consent\n"
                             "read s0 o0 !revokes none\n"
                             "expect-state N={} W={}\n"
                             "expect-violation starProp\n");
  ASSERT_EQ(t.size(), 7u);
  EXPECT_EQ(t[0].line, 2u);
  EXPECT_EQ(t[0].rule, RuleId::kXRStar);
  EXPECT_FALSE(t[0].request.consent_to_revoke);
  EXPECT_EQ(t[1].line, 4u);
  EXPECT_TRUE(t[1].request.consent_to_revoke);
  EXPECT_EQ(t[1].expect_revokes, std::vector<Access>{acc(p, "s0", "o1")});
  EXPECT_TRUE(t[2].expect_deny);
  EXPECT_EQ(t[2].request.mode, Mode::kWriteOnly);
  EXPECT_EQ(t[3].request.mode, Mode::kReadWrite);
  EXPECT_TRUE(t[3].request.consent_to_revoke);
  ASSERT_TRUE(t[4].expect_revokes);
  EXPECT_TRUE(t[4].expect_revokes->empty());
  EXPECT_EQ(t[5].kind, TraceEntry::Kind::kExpectState);
  EXPECT_EQ(t[6].kind, TraceEntry::Kind::kExpectViolation);
  EXPECT_EQ(t[6].invariant, InvariantName::kStarProp);
}

TEST(TraceText, Errors) {
  const Policy p = banks_and_oil();
  auto line_of = [&](std::string_view text) -> std::size_t {
    try {
      parse_trace(p, text);
    } catch (const ParseError& e) {
      return e.line();
    }
    return 0;
  };
  EXPECT_EQ(line_of("read s0 o1\nfly s0 o1\n"), 2u);
  EXPECT_EQ(line_of("read s9 o1\n"), 1u);
  EXPECT_EQ(line_of("\n\nread s0 o1 !rule zz\n"), 3u);
  EXPECT_EQ(line_of("read s0 o1 !deny !revokes s0 o1\n"), 1u);
  EXPECT_EQ(line_of("read s0 o1 !sometimes\n"), 1u);
  EXPECT_EQ(line_of("expect-violation nothing\n"), 1u);
}

TEST(Replay, RevokingRead) {
  const Policy p = banks_and_oil();
  const auto t = parse_trace(p,
                             "read s0 o1\n"
                             "rw s0 o1\n"
                             "read s0 o2 !revokes s0 o1\n"
                             "expect-state N={(s0,o1),(s0,o2)} W={}\n");
  const auto r = replay(p, t);
  EXPECT_TRUE(r.expectations_met()) << render_text(p, r);
  EXPECT_TRUE(r.invariants_hold());
  EXPECT_EQ(r.final_state, st(p, "N={(s0,o1),(s0,o2)} W={}"));
  EXPECT_EQ(r.final_sds, sds_from_reads(p, r.final_state.read));
  ASSERT_TRUE(r.steps[2].decision);
  EXPECT_EQ(r.steps[2].decision->rule, RuleId::kXR);
}

TEST(Replay, MismatchesAreCounted) {
  const Policy p = banks_and_oil();
  const auto t = parse_trace(p,
                             "read s0 o1\n"
                             "rw s0 o1\n"
                             "read s0 o2 !revokes none\n"
                             "read s0 o0 !deny\n"
                             "read s0 o1 !rule xRstar\n"
                             "expect-state N={} W={}\n");
  const auto r = replay(p, t);
  // Line 3 is granted with a revocation; line 5 picks mR; line 6 differs.
  EXPECT_EQ(r.mismatch_count(), 3u) << render_text(p, r);
  EXPECT_TRUE(r.steps[3].denied);
  EXPECT_TRUE(r.steps[3].mismatches.empty());
}

TEST(Replay, ExplicitStrategyNeedsRules) {
  const Policy p = banks_and_oil();
  const auto t = parse_trace(p, "read s0 o1\n");
  EXPECT_THROW(replay(p, t, {.explicit_rules = true}), ParseError);
  const auto ok = parse_trace(p, "read s0 o1 !rule xR\n");
  EXPECT_TRUE(replay(p, ok, {.explicit_rules = true}).expectations_met());
}

TEST(Replay, StartMustComeFirst) {
  const Policy p = banks_and_oil();
  EXPECT_THROW(replay(p, parse_trace(p, "read s0 o1\nstart N={} W={}\n")),
               ParseError);
}

TEST(Replay, InvariantFailuresAreReported) {
  const Policy p = banks_and_oil(2);
  const auto t = parse_trace(p,
                             "rw s0 o1\n"
                             "read s0 o2 !rule wkRead\n"
                             "expect-violation starProp\n");
  const auto r = replay(p, t, {.engine = {true}});
  EXPECT_TRUE(r.expectations_met()) << render_text(p, r);
  EXPECT_FALSE(r.invariants_hold());
  const auto without = replay(p, t);
  EXPECT_FALSE(without.expectations_met());
}

TEST(Replay, Deterministic) {
  const Policy p = load_policy_file(scenario("relay.policy"));
  const auto t = load_trace_file(p, scenario("relay.trace"));
  const auto a = replay(p, t);
  const auto b = replay(p, t);
  EXPECT_EQ(render_text(p, a), render_text(p, b));
  EXPECT_EQ(render_machine(p, a), render_machine(p, b));
  const auto j = nlohmann::json::parse(render_machine(p, a));
  EXPECT_EQ(j["steps"].size(), t.size());
  EXPECT_EQ(j["steps"][0]["rule"], "xRstar");
}

struct ScenarioCase {
  const char* policy;
  const char* trace;
  bool weak;
};

class Scenarios : public ::testing::TestWithParam<ScenarioCase> {};

TEST_P(Scenarios, ReplayWithExpectationsMet) {
  const auto& c = GetParam();
  const Policy p = load_policy_file(scenario(c.policy));
  const auto t = load_trace_file(p, scenario(c.trace));
  ReplayOptions o;
  o.engine.allow_wkread = c.weak;
  const auto r = replay(p, t, o);
  EXPECT_TRUE(r.expectations_met()) << render_text(p, r);
  if (!c.weak) EXPECT_TRUE(r.invariants_hold()) << render_text(p, r);
}

INSTANTIATE_TEST_SUITE_P(
    All, Scenarios,
    ::testing::Values(
        ScenarioCase{"three_companies.policy", "revoking_read.trace", false},
        ScenarioCase{"three_companies.policy", "revoking_read_refused.trace",
                     false},
        ScenarioCase{"three_companies.policy", "write_then_read.trace", false},
        ScenarioCase{"sanitized.policy", "sanitized_read.trace", false},
        ScenarioCase{"sanitized_rw.policy", "sanitized_rw.trace", false},
        ScenarioCase{"two_subjects.policy", "weak_read.trace", true},
        ScenarioCase{"relay.policy", "relay.trace", false},
        ScenarioCase{"blocked_relay.policy", "blocked_relay.trace", false}));

TEST(Scenarios, WeakReadTraceNeedsTheFlag) {
  const Policy p = load_policy_file(scenario("two_subjects.policy"));
  const auto t = load_trace_file(p, scenario("weak_read.trace"));
  EXPECT_FALSE(replay(p, t).expectations_met());
}

std::string run_session(const Policy& p, const std::string& input,
                        SessionOptions o = {}) {
  Session s(p, o);
  std::istringstream in(input);
  std::ostringstream out;
  s.run(in, out, false);
  return out.str();
}

TEST(Session, WarnsBeforeRevoking) {
  const Policy p = banks_and_oil();
  Session s(p);
  std::istringstream in("y\n");
  std::ostringstream out;
  s.handle("rw s0 o1", in, out);
  s.handle("read s0 o2", in, out);
  const auto text = out.str();
  EXPECT_NE(text.find("warning: read s0 o2 is only permitted by revoking "
                      "write access: (s0,o1)"),
            std::string::npos)
      << text;
  EXPECT_NE(text.find("proceed? [y/N]"), std::string::npos);
  EXPECT_EQ(s.state(), st(p, "N={(s0,o1),(s0,o2)} W={}"));
}

TEST(Session, RefusingKeepsTheState) {
  const Policy p = banks_and_oil();
  Session s(p);
  std::istringstream in("n\n");
  std::ostringstream out;
  s.handle("rw s0 o1", in, out);
  const State before = s.state();
  s.handle("read s0 o2", in, out);
  EXPECT_EQ(s.state(), before);
  EXPECT_NE(out.str().find("not applied"), std::string::npos);
}

TEST(Session, UpfrontConsentSkipsTheQuestion) {
  const Policy p = banks_and_oil();
  const auto text = run_session(p, "rw s0 o1\nread s0 o2\n", {.consent = true});
  EXPECT_EQ(text.find("proceed?"), std::string::npos);
  EXPECT_NE(text.find("permitted by xR; revoked"), std::string::npos) << text;
}

TEST(Session, UndoAndCheck) {
  const Policy p = banks_and_oil();
  Session s(p);
  std::istringstream in;
  std::ostringstream out;
  s.handle("read s0 o1", in, out);
  s.handle("rw s0 o1", in, out);
  EXPECT_EQ(s.undo_depth(), 2u);
  s.handle("undo", in, out);
  EXPECT_EQ(s.state(), st(p, "N={(s0,o1)} W={}"));
  s.handle("undo", in, out);
  s.handle("undo", in, out);
  EXPECT_EQ(s.state(), State::initial(p));
  EXPECT_NE(out.str().find("nothing to undo"), std::string::npos);
  std::ostringstream checked;
  s.handle("check", in, checked);
  EXPECT_NE(checked.str().find("simpSec: pass"), std::string::npos)
      << checked.str();
  EXPECT_FALSE(s.handle("quit", in, checked));
}

TEST(Session, DeniedRequestsExplainThemselves) {
  const Policy p = banks_and_oil();
  const auto text = run_session(p, "read s0 o0\nread s0 o1\n");
  EXPECT_NE(text.find("denied: read s0 o1"), std::string::npos) << text;
  EXPECT_NE(text.find("simple-security"), std::string::npos) << text;
}

TEST(Session, FlowsAndErrors) {
  const Policy p = relay();
  const auto text = run_session(
      p, "flows o1 o3\nflows o1 o0\nflows o1\nflows o1 o9\nfly s0 o1\n");
  EXPECT_NE(text.find("flow o1 -> o3"), std::string::npos) << text;
  EXPECT_NE(text.find("no flow within"), std::string::npos) << text;
  EXPECT_NE(text.find("error: expected 'flows <object> <object>'"),
            std::string::npos);
  EXPECT_NE(text.find("error: unknown object 'o9'"), std::string::npos);
  EXPECT_NE(text.find("error: "), std::string::npos);
}

}  // namespace
}  // namespace cwall
