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

// Acceptance run: one PASS/FAIL line per criterion, each within its time
// limit. Exits nonzero if any criterion fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>

#include "cwall/corpus.hh"
#include "cwall/flow.hh"
#include "cwall/graph.hh"
#include "cwall/implicit.hh"
#include "cwall/invariants.hh"
#include "cwall/model_checker.hh"
#include "fixtures.hh"
#include "random_model.hh"

namespace cwall {
namespace {

using namespace testing;

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void fail(const std::string& why) {
    if (pass) detail << "first failure: " << why << "; ";
    pass = false;
  }
  void require(bool ok, const std::string& why) {
    if (!ok) fail(why);
  }
};

bool run(const char* title, double limit_s,
         const std::function<void(Outcome&)>& body) {
  Outcome out;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    body(out);
  } catch (const std::exception& e) {
    out.fail(std::string("exception: ") + e.what());
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  if (secs > limit_s) out.fail("time limit exceeded");
  std::printf("%s %s (%.2f s, limit %.0f s) %s\n",
              out.pass ? "PASS" : "FAIL", title, secs, limit_s,
              out.detail.str().c_str());
  std::fflush(stdout);
  return out.pass;
}

const std::vector<Policy>& corpus() {
  static const std::vector<Policy> c = policy_corpus({2, 4, 3, 2});
  return c;
}

// Steps one request and checks the rule and after-state exactly.
State expect_step(Outcome& out, const Policy& p, const State& s,
                  const Request& r, RuleId rule, const State& after,
                  const std::vector<Access>& revoked) {
  const auto res = step(p, s, r);
  const auto* d = std::get_if<Decision>(&res);
  if (!d) {
    out.fail(describe(p, r) + " denied");
    return s;
  }
  out.require(d->rule == rule, describe(p, r) + " fired " + to_string(d->rule));
  out.require(d->after == after, describe(p, r) + " reached " +
                                     format_state(p, d->after));
  out.require(d->revoked == revoked, describe(p, r) + " revoked the wrong set");
  return d->after;
}

void worked_examples(Outcome& out) {
  {
    const Policy p = banks_and_oil();
    const State left = st(p, "N={(s0,o1)} W={(s0,o1)}");
    out.require(std::holds_alternative<Denied>(step(p, left, rd(p, "s0", "o2"))),
                "revoking read granted without consent");
    expect_step(out, p, left, rd(p, "s0", "o2", true), RuleId::kXR,
                st(p, "N={(s0,o1),(s0,o2)} W={}"), {acc(p, "s0", "o1")});
  }
  {
    const Policy p = banks_and_oil();
    const State s0 = st(p, "N={} W={(s0,o0),(s0,o2)}");
    const State s1 =
        expect_step(out, p, s0, wr(p, "s0", "o1"), RuleId::kXW,
                    st(p, "N={} W={(s0,o0),(s0,o1),(s0,o2)}"), {});
    expect_step(out, p, s1, rd(p, "s0", "o1", true), RuleId::kXR,
                st(p, "N={(s0,o1)} W={(s0,o1)}"),
                {acc(p, "s0", "o0"), acc(p, "s0", "o2")});
  }
  {
    const Policy p = with_sanitized();
    const State s0 = st(p, "N={} W={(s0,o1)}");
    const State s1 = expect_step(out, p, s0, rd(p, "s0", "o2"), RuleId::kXRBot,
                                 st(p, "N={(s0,o2)} W={(s0,o1)}"), {});
    expect_step(out, p, s1, wr(p, "s0", "o0"), RuleId::kXW,
                st(p, "N={(s0,o2)} W={(s0,o0),(s0,o1)}"), {});
  }
  {
    const Policy p = sanitized_and_one();
    const State s0 = st(p, "N={(s0,o2)} W={(s0,o2)}");
    expect_step(out, p, s0, rw(p, "s0", "o1"), RuleId::kXRW,
                st(p, "N={(s0,o1),(s0,o2)} W={(s0,o1)}"),
                {acc(p, "s0", "o2")});
  }
  out.detail << "4 worked sequences exact";
}

void simple_security_everywhere(Outcome& out) {
  std::size_t states = 0, max_depth = 0;
  for (const auto& p : corpus()) {
    const auto g = explore(p);
    out.require(!g.truncated && g.fixpoint, "exploration incomplete");
    max_depth = std::max(max_depth, g.depth);
    for (const auto& s : g.states) {
      ++states;
      out.require(check_simp_sec(p, s.read).passed(), "simpSec violated");
      out.require(coi_exclusivity_consequent(p, s.read).passed(),
                  "CoI exclusivity violated");
    }
  }
  std::size_t lemmas = 0;
  const auto micro = micro_corpus();
  for (const auto& p : micro) {
    for (auto rule : kSoundRules) {
      for (auto inv : {InvariantName::kSimpSec, InvariantName::kStarProp}) {
        ++lemmas;
        const auto r = check_invariance_lemma(p, inv, rule,
                                              {.mode = LemmaMode::kSynthesized});
        out.require(r.holds(), std::string("lemma ") + to_string(inv) + "/" +
                                   to_string(rule) + " has a counterexample");
      }
    }
  }
  out.detail << corpus().size() << " policies explored to fixpoint (deepest "
             << max_depth << " steps), " << states << " states; " << lemmas
             << " synthesized lemmas on " << micro.size()
             << " micro policies";
}

void weak_read_counterexample(Outcome& out) {
  const Policy p = banks_and_oil(2);
  const auto r = check_invariance_lemma(p, InvariantName::kStarProp,
                                        RuleId::kWkRead);
  out.require(!r.holds(), "no counterexample");
  if (r.holds()) return;
  out.require(counterexample_replays(p, InvariantName::kStarProp,
                                     RuleId::kWkRead, *r.counterexample),
              "counterexample does not replay");
  const State target = st(p, "N={(s0,o1),(s1,o0),(s1,o2)} W={(s0,o1)}");
  const State target_after =
      st(p, "N={(s0,o1),(s0,o2),(s1,o0),(s1,o2)} W={(s0,o1)}");
  std::size_t matches = 0;
  const auto all =
      lemma_counterexamples(p, InvariantName::kStarProp, RuleId::kWkRead);
  for (const auto& c : all) {
    if (equal_up_to_renaming(p, c.before, target) &&
        equal_up_to_renaming(p, c.after, target_after)) {
      ++matches;
    }
  }
  out.require(matches > 0, "weak-read configuration not among counterexamples");
  EngineOptions weak{true};
  const auto conf = check_flow_confinement(p, State::initial(p), {2, 2}, weak);
  bool cross = false;
  for (const auto& w : conf.violations) {
    cross = cross || (!p.is_sanitized(w.source()) &&
                      p.ds(w.source()) != p.ds(w.sink()) &&
                      !verify_witness(p, w, std::nullopt, weak));
  }
  out.require(cross, "no cross-dataset flow with the weak read");
  out.detail << "first counterexample " << format_state(p, r.counterexample->before)
             << " + " << describe(p, r.counterexample->request) << "; "
             << matches << " of " << all.size()
             << " counterexamples match the two-subject configuration up to "
                "renaming; "
             << conf.violations.size() << " leaking flows";
}

bool read_grant(const ReachEdge& e) { return e.request.mode != Mode::kWriteOnly; }

void subject_bound(Outcome& out) {
  std::size_t states = 0;
  for (const auto& p : corpus()) {
    const auto g = explore(p);
    out.require(!g.truncated, "exploration truncated");
    // Sds carried along the edge that discovered each state.
    std::vector<Sds> sds(g.states.size());
    std::vector<bool> done(g.states.size(), false);
    done[0] = true;
    for (const auto& e : g.edges) {
      if (done[e.to]) continue;
      done[e.to] = true;
      sds[e.to] = read_grant(e) ? update_sds(p, sds[e.from], e.request.subject,
                                             e.request.object)
                                : sds[e.from];
    }
    for (std::size_t i = 0; i < g.states.size(); ++i) {
      ++states;
      const auto& n = g.states[i].read;
      const bool direct = check_min_subjects(p, n).passed();
      out.require(direct, "cardinality bound violated");
      out.require(check_sds_alignment(p, sds[i], n).passed(),
                  "sds out of alignment");
      out.require(min_subjects_via_sds(p, sds[i], n) == direct,
                  "sds route disagrees");
      out.require(check_min_subjects_strict(p, n).passed(),
                  "active-subject bound violated");
    }
  }
  out.detail << states << " states, both routes agree";
}

void confinement(Outcome& out) {
  const FlowBounds bounds{3, 2, std::nullopt};
  std::size_t starts = 0, flows = 0;
  for (const auto& p : corpus()) {
    StateGraph graph(p, {});
    const auto g = explore(p);
    FlowAnalyzer analyzer(graph, bounds);
    for (const auto& s : g.states) {
      out.require(check_star_prop(p, s).passed(), "reachable state breaks *");
      const auto report = check_flow_confinement(analyzer, graph.intern(s));
      ++starts;
      flows += report.pairs_with_flow;
      out.require(report.passed(), "unconfined flow");
    }
  }
  // The relay example: o1 reaches o3 through s0 and s1 in five actions.
  const Policy relay_p = relay();
  FlowQuery q{State::initial(relay_p), relay_p.object("o1"),
              relay_p.object("o3"), {2, 1, 5}};
  q.subject_chain = {relay_p.subject("s0"), relay_p.subject("s1")};
  q.object_chain = {relay_p.object("o1"), relay_p.object("o2"),
                    relay_p.object("o3")};
  const std::vector<Request> paper_run = {
      rd(relay_p, "s0", "o1"), rw(relay_p, "s0", "o2"),
      rd(relay_p, "s1", "o2"), rd(relay_p, "s0", "o0", true),
      rw(relay_p, "s1", "o3")};
  bool found = false;
  for_each_witness(relay_p, q, [&](const FlowWitness& w) {
    bool same = w.steps.size() == paper_run.size();
    for (std::size_t i = 0; same && i < w.steps.size(); ++i) {
      same = w.steps[i].request == paper_run[i];
    }
    if (same && !verify_witness(relay_p, w, q.bounds)) found = true;
    return !found;
  });
  out.require(found, "relay witness not found");
  out.require(run_flows(relay_p, State::initial(relay_p), paper_run)
                  .contains({relay_p.object("o1"), relay_p.object("o3")}),
              "relay run does not carry o1 into o3");

  // The blocked relay: s1 gives up its write grant, so nothing from o0
  // passes through s1 into o2.
  const Policy b = blocked_relay();
  State cur = st(b, "N={(s0,o0),(s1,o1),(s1,o2)} W={(s1,o2)}");
  const std::vector<Request> blocked_run = {rd(b, "s1", "o3", true),
                                            rw(b, "s0", "o1")};
  out.require(!run_flows(b, cur, blocked_run)
                   .contains({b.object("o0"), b.object("o2")}),
              "blocked run carries o0 into o2");
  for (const auto& r : blocked_run) cur = std::get<Decision>(step(b, cur, r)).after;
  FlowQuery bq{cur, b.object("o0"), b.object("o2"), bounds};
  bq.subject_chain = {b.subject("s0"), b.subject("s1")};
  const auto none = find_flow(b, bq);
  out.require(std::holds_alternative<NoFlowWithinBounds>(none),
              "relay through s1 found after the blocked run");
  FlowQuery open{cur, b.object("o0"), b.object("o2"), bounds};
  const bool direct = std::holds_alternative<FlowWitness>(find_flow(b, open));
  out.detail << starts << " start states, " << flows
             << " flows all confined; relay witness found; blocked relay "
                "exhausted ("
             << std::get<NoFlowWithinBounds>(none).states_explored
             << " states)"
             << (direct ? "; unrestricted o0->o2 exists within dataset d0" : "");
}

void oracle_equivalence(Outcome& out) {
  std::size_t compared = 0, disagreements = 0;
  for (const auto& p : corpus()) {
    const State start = State::initial(p);
    for (std::size_t budget = 0; budget <= 6; ++budget) {
      const FlowBounds b{budget / 2, budget, budget};
      const auto taint = taint_flows(p, start, budget);
      StateGraph graph(p, {});
      FlowAnalyzer analyzer(graph, b);
      const auto rel = analyzer.relation(graph.intern(start));
      for (std::uint32_t a = 0; a < p.object_count(); ++a) {
        for (std::uint32_t c = 0; c < p.object_count(); ++c) {
          const std::pair<ObjectId, ObjectId> pair{ObjectId{a}, ObjectId{c}};
          const bool found = std::holds_alternative<FlowWitness>(
              find_flow(p, {start, pair.first, pair.second, b}));
          ++compared;
          if (found != taint.contains(pair) || found != rel.contains(pair)) {
            ++disagreements;
          }
        }
      }
    }
  }
  out.require(disagreements == 0,
              std::to_string(disagreements) + " disagreements");
  out.detail << compared << " (policy, budget, pair) comparisons";
}

void bisimulation(Outcome& out) {
  std::size_t pairs = 0;
  for (const auto& p : corpus()) {
    const auto r = check_bisimulation(p, {.depth = 6});
    pairs += r.pairs_explored;
    if (!r.equivalent()) out.fail(describe(p, *r.counterexample));
  }
  out.detail << corpus().size() << " policies at depth 6, " << pairs
             << " state pairs";
}

void monotonicity(Outcome& out) {
  Rng rng(0x5eed);
  constexpr int kTriples = 20000;
  std::size_t fired = 0;
  RuleSet seen;
  for (int t = 0; t < kTriples; ++t) {
    const Policy p = random_policy(rng);
    const State s = random_reachable_state(rng, p);
    const Request r = random_request(rng, p);
    const Access a{r.subject, r.object};
    for (auto rule : enabled_rules(p, s, r).to_vector()) {
      ++fired;
      seen.insert(rule);
      const State after = rule_effect(p, s, r, rule);
      out.require(s.read.is_subset_of(after.read), "N shrank");
      if (r.mode != Mode::kWriteOnly) {
        out.require(after.read.contains(a), "read grant missing from N");
      }
      if (r.mode != Mode::kRead) {
        out.require(after.write.contains(a), "write grant missing from W");
      }
      out.require(check_star_prop(p, after).passed(),
                  std::string("* broken by ") + to_string(rule));
    }
  }
  for (auto rule : kSoundRules) {
    out.require(seen.contains(rule), std::string("rule never fired: ") +
                                         to_string(rule));
  }
  out.detail << kTriples << " triples, " << fired << " rule applications";
}

}  // namespace
}  // namespace cwall

int main() {
  using namespace cwall;
  bool ok = true;
  ok &= run("worked-example transitions", 1, worked_examples);
  ok &= run("simple security and CoI exclusivity", 300, simple_security_everywhere);
  ok &= run("weak-read counterexample", 60, weak_read_counterexample);
  ok &= run("subject bound on accessed datasets", 300, subject_bound);
  ok &= run("flow confinement", 600, confinement);
  ok &= run("flow search agrees with taint oracle", 600, oracle_equivalence);
  ok &= run("implicit/explicit correspondence", 300, bisimulation);
  ok &= run("monotonicity of every rule", 60, monotonicity);
  return ok ? 0 : 1;
}
