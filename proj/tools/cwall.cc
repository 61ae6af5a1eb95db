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

// cwall: command-line front end for Chinese Wall policies.

#include <cstdlib>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "cwall/flow.hh"
#include "cwall/implicit.hh"
#include "cwall/invariants.hh"
#include "cwall/limits.hh"
#include "cwall/model_checker.hh"
#include "cwall/report.hh"
#include "cwall/session.hh"
#include "cwall/text_format.hh"

namespace {

using nlohmann::json;
using namespace cwall;

enum Exit { kPass = 0, kFail = 1, kInput = 2, kCap = 3 };

struct Common {
  std::string policy_path;
  std::optional<std::size_t> depth;
  std::size_t hops = 2;
  std::size_t padding = 2;
  std::string strategy = "prefer";
  bool consent = false;
  bool unsound_wkread = false;
  std::size_t state_cap = default_state_cap();
  std::string format = "text";

  bool machine() const { return format == "machine"; }
  EngineOptions engine() const { return EngineOptions{unsound_wkread}; }
  FlowBounds bounds() const { return FlowBounds{hops, padding, std::nullopt}; }
};

void emit(const Common& c, const json& doc, const std::string& text) {
  if (c.machine()) {
    std::cout << doc.dump(2) << '\n';
  } else {
    std::cout << text;
  }
}

json witness_json(const Policy& policy, const FlowWitness& w) {
  json steps = json::array();
  for (const auto& st : w.steps) {
    std::string marker = "pad";
    if (st.marker.kind == Marker::Kind::kRead) {
      marker = "R" + std::to_string(st.marker.hop + 1);
    } else if (st.marker.kind == Marker::Kind::kWrite) {
      marker = "W" + std::to_string(st.marker.hop + 1);
    }
    steps.push_back({{"request", describe(policy, st.request)},
                     {"rule", to_string(st.rule)},
                     {"marker", marker}});
  }
  json objects = json::array();
  for (auto o : w.objects) objects.push_back(policy.object_name(o));
  json subjects = json::array();
  for (auto s : w.subjects) subjects.push_back(policy.subject_name(s));
  return {{"start", format_state(policy, w.start)},
          {"objects", objects},
          {"subjects", subjects},
          {"steps", steps}};
}

int cmd_validate(const Common& c) {
  const auto raw = parse_policy(read_file(c.policy_path));
  const auto violations = axiom_violations(raw);
  json list = json::array();
  std::ostringstream text;
  for (const auto& v : violations) {
    list.push_back({{"kind", to_string(v.kind)}, {"detail", v.describe()}});
    text << v.describe() << '\n';
  }
  if (violations.empty()) {
    const Policy p = validate_policy(raw);
    text << "valid: " << p.subject_count() << " subject(s), "
         << p.object_count() << " object(s), " << p.dataset_count()
         << " dataset(s), " << p.coic_count() << " CoIC(s)\n";
  }
  emit(c, {{"valid", violations.empty()}, {"violations", list}}, text.str());
  return violations.empty() ? kPass : kFail;
}

int cmd_replay(const Common& c, const std::string& trace_path) {
  const Policy policy = load_policy_file(c.policy_path);
  const auto trace = load_trace_file(policy, trace_path);
  ReplayOptions options;
  options.explicit_rules = c.strategy == "explicit";
  options.consent = c.consent;
  options.engine = c.engine();
  const auto report = replay(policy, trace, options);
  std::cout << (c.machine() ? render_machine(policy, report)
                            : render_text(policy, report));
  return report.expectations_met() ? kPass : kFail;
}

int cmd_repl(const Common& c) {
  const Policy policy = load_policy_file(c.policy_path);
  SessionOptions options;
  options.consent = c.consent;
  options.engine = c.engine();
  options.flow_bounds = c.bounds();
  Session session(policy, options);
  session.run(std::cin, std::cout, true);
  return kPass;
}

int cmd_check(const Common& c, const std::string& state_text) {
  const Policy policy = load_policy_file(c.policy_path);
  const State st = parse_state(policy, state_text);
  const auto reports =
      check_state_invariants(policy, st, sds_from_reads(policy, st.read));
  json doc = json::object();
  std::ostringstream text;
  bool ok = true;
  for (const auto& r : reports) {
    ok = ok && r.passed();
    json w = json::array();
    for (const auto& wit : r.witnesses) w.push_back(describe(policy, wit));
    doc[to_string(r.kind)] = {{"passed", r.passed()}, {"witnesses", w}};
    text << describe(policy, r) << '\n';
  }
  emit(c, doc, text.str());
  return ok ? kPass : kFail;
}

int cmd_theorems(const Common& c) {
  const Policy policy = load_policy_file(c.policy_path);
  TheoremOptions options;
  options.depth = c.depth;
  if (c.unsound_wkread) options.rules.insert(RuleId::kWkRead);
  options.state_cap = c.state_cap;
  options.flow_bounds = c.bounds();
  const auto report = check_theorems(policy, options);
  json checks = json::array();
  std::ostringstream text;
  text << report.states << " state(s), depth " << report.depth
       << (report.truncated ? " (truncated by state cap)" : "") << '\n';
  for (const auto& ch : report.checks) {
    checks.push_back({{"name", ch.name},
                      {"states_checked", ch.states_checked},
                      {"violations", ch.violations},
                      {"first_violation", ch.first_violation}});
    text << ch.name << ": "
         << (ch.violations == 0 ? "pass"
                                : "FAIL (" + std::to_string(ch.violations) +
                                      ")")
         << '\n';
    if (ch.violations) text << "  " << ch.first_violation << '\n';
  }
  emit(c,
       {{"states", report.states},
        {"depth", report.depth},
        {"truncated", report.truncated},
        {"checks", checks},
        {"passed", report.passed()}},
       text.str());
  if (report.truncated) return kCap;
  return report.passed() ? kPass : kFail;
}

int cmd_lemmas(const Common& c, const std::vector<std::string>& rules,
               const std::vector<std::string>& invariants,
               const std::string& mode) {
  const Policy policy = load_policy_file(c.policy_path);
  std::vector<RuleId> rule_ids;
  if (rules.empty()) {
    rule_ids.assign(kSoundRules.begin(), kSoundRules.end());
    if (c.unsound_wkread) rule_ids.push_back(RuleId::kWkRead);
  }
  for (const auto& r : rules) {
    auto id = parse_rule(r);
    if (!id) throw ParseError(0, "unknown rule '" + r + "'");
    rule_ids.push_back(*id);
  }
  std::vector<InvariantName> inv_ids;
  if (invariants.empty()) {
    inv_ids = {InvariantName::kSimpSec, InvariantName::kStarProp,
               InvariantName::kMinSub, InvariantName::kSdsAlignment};
  }
  for (const auto& i : invariants) {
    auto id = parse_invariant(i);
    if (!id) throw ParseError(0, "unknown invariant '" + i + "'");
    inv_ids.push_back(*id);
  }
  LemmaOptions options;
  options.mode = mode == "synthesized" ? LemmaMode::kSynthesized
                                       : LemmaMode::kReachable;
  options.depth = c.depth;
  options.state_cap = c.state_cap;
  json results = json::array();
  std::ostringstream text;
  bool all_hold = true;
  for (auto inv : inv_ids) {
    for (auto rule : rule_ids) {
      const auto r = check_invariance_lemma(policy, inv, rule, options);
      all_hold = all_hold && r.holds();
      json j = {{"invariant", to_string(inv)},
                {"rule", to_string(rule)},
                {"holds", r.holds()},
                {"states_checked", r.states_checked}};
      text << to_string(inv) << " / " << to_string(rule) << ": "
           << (r.holds() ? "holds" : "COUNTEREXAMPLE") << '\n';
      if (r.counterexample) {
        j["before"] = format_state(policy, r.counterexample->before);
        j["request"] = describe(policy, r.counterexample->request);
        j["after"] = format_state(policy, r.counterexample->after);
        std::istringstream lines(describe(policy, *r.counterexample));
        for (std::string l; std::getline(lines, l);) text << "  " << l << '\n';
      }
      results.push_back(std::move(j));
    }
  }
  emit(c, {{"mode", to_string(options.mode)}, {"results", results}},
       text.str());
  return all_hold ? kPass : kFail;
}

std::vector<std::string> split_commas(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  for (std::string part; std::getline(ss, part, ',');) {
    if (!part.empty()) out.push_back(part);
  }
  return out;
}

int cmd_flow(const Common& c, const std::string& from, const std::string& to,
             const std::string& start, const std::string& via) {
  const Policy policy = load_policy_file(c.policy_path);
  FlowQuery q{start.empty() ? State::initial(policy) : parse_state(policy, start),
              policy.object(from), policy.object(to), c.bounds(), {}, {}};
  if (!via.empty()) {
    std::vector<SubjectId> chain;
    for (const auto& s : split_commas(via)) chain.push_back(policy.subject(s));
    q.subject_chain = chain;
  }
  const auto result = find_flow(policy, q, c.engine(), c.state_cap);
  if (const auto* w = std::get_if<FlowWitness>(&result)) {
    emit(c, {{"flow", true}, {"witness", witness_json(policy, *w)}},
         describe(policy, *w) + "\n");
    return kPass;
  }
  emit(c, {{"flow", false}},
       "no flow from " + from + " to " + to + " within " +
           std::to_string(c.hops) + " hop(s), padding " +
           std::to_string(c.padding) + "\n");
  return kFail;
}

int cmd_confine(const Common& c, const std::string& start) {
  const Policy policy = load_policy_file(c.policy_path);
  const State st =
      start.empty() ? State::initial(policy) : parse_state(policy, start);
  const auto report =
      check_flow_confinement(policy, st, c.bounds(), c.engine(), c.state_cap);
  json violations = json::array();
  std::ostringstream text;
  text << report.pairs_with_flow << " flow(s) between distinct objects\n";
  for (const auto& w : report.violations) {
    violations.push_back(witness_json(policy, w));
    text << "VIOLATION " << describe(policy, w) << '\n';
  }
  text << (report.passed() ? "confinement holds\n" : "confinement fails\n");
  emit(c,
       {{"passed", report.passed()},
        {"flows", report.pairs_with_flow},
        {"violations", violations}},
       text.str());
  return report.passed() ? kPass : kFail;
}

int cmd_bisim(const Common& c) {
  const Policy policy = load_policy_file(c.policy_path);
  BisimOptions options;
  options.depth = c.depth.value_or(4);
  options.state_cap = c.state_cap;
  options.engine = c.engine();
  const auto result = check_bisimulation(policy, options);
  json doc = {{"equivalent", result.equivalent()},
              {"depth", options.depth},
              {"pairs", result.pairs_explored}};
  std::string text = result.equivalent()
                         ? "equivalent up to depth " +
                               std::to_string(options.depth) + " (" +
                               std::to_string(result.pairs_explored) +
                               " pairs)\n"
                         : describe(policy, *result.counterexample) + "\n";
  if (result.counterexample) {
    doc["counterexample"] = describe(policy, *result.counterexample);
  }
  emit(c, doc, text);
  return result.equivalent() ? kPass : kFail;
}

int cmd_explore(const Common& c) {
  const Policy policy = load_policy_file(c.policy_path);
  ExploreOptions options;
  options.depth = c.depth;
  if (c.unsound_wkread) options.rules.insert(RuleId::kWkRead);
  options.state_cap = c.state_cap;
  const auto g = explore(policy, options);
  emit(c,
       {{"states", g.states.size()},
        {"edges", g.edges.size()},
        {"depth", g.depth},
        {"fixpoint", g.fixpoint},
        {"truncated", g.truncated}},
       std::to_string(g.states.size()) + " state(s), " +
           std::to_string(g.edges.size()) + " edge(s), depth " +
           std::to_string(g.depth) +
           (g.truncated ? " (truncated by state cap)"
                        : g.fixpoint ? " (fixpoint)" : "") +
           "\n");
  return g.truncated ? kCap : kPass;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Chinese Wall policy simulator and bounded checker"};
  app.require_subcommand(1);
  Common c;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("policy", c.policy_path, "policy file")->required();
    sub->add_option("--format", c.format, "output format")
        ->check(CLI::IsMember({"text", "machine"}));
    sub->add_option("--state-cap", c.state_cap, "maximum number of states")
        ->check(CLI::PositiveNumber);
    sub->add_flag("--unsound-wkread", c.unsound_wkread,
                  "enable the wkRead rule, which breaks the *-property");
  };
  auto add_depth = [&](CLI::App* sub) {
    sub->add_option("--depth", c.depth, "exploration depth")
        ->check(CLI::NonNegativeNumber);
  };
  auto add_flow_bounds = [&](CLI::App* sub) {
    sub->add_option("--hops", c.hops, "maximum flow hops")
        ->check(CLI::PositiveNumber);
    sub->add_option("--padding", c.padding, "extra steps per big step")
        ->check(CLI::NonNegativeNumber);
  };

  auto* validate = app.add_subcommand("validate", "check a policy file");
  validate->add_option("policy", c.policy_path, "policy file")->required();
  validate->add_option("--format", c.format, "output format")
      ->check(CLI::IsMember({"text", "machine"}));

  std::string trace_path;
  auto* replay_cmd = app.add_subcommand("replay", "replay a trace");
  add_common(replay_cmd);
  replay_cmd->add_option("trace", trace_path, "trace file")->required();
  replay_cmd->add_option("--strategy", c.strategy, "rule choice")
      ->check(CLI::IsMember({"prefer", "explicit"}));
  replay_cmd->add_flag("--consent", c.consent, "consent to write revocation");

  auto* repl = app.add_subcommand("repl", "interactive session");
  add_common(repl);
  add_flow_bounds(repl);
  repl->add_flag("--consent", c.consent, "consent to write revocation");

  std::string state_text;
  auto* check = app.add_subcommand("check", "check invariants of one state");
  add_common(check);
  check->add_option("--state", state_text, "state as 'N={...} W={...}'")
      ->required();

  auto* theorems = app.add_subcommand("theorems", "check every reachable state");
  add_common(theorems);
  add_depth(theorems);
  add_flow_bounds(theorems);

  std::vector<std::string> rules, invariants;
  std::string mode = "reachable";
  auto* lemmas = app.add_subcommand("lemmas", "check invariance lemmas");
  add_common(lemmas);
  add_depth(lemmas);
  lemmas->add_option("--rule", rules, "rule(s) to check");
  lemmas->add_option("--invariant", invariants, "invariant(s) to check");
  lemmas->add_option("--mode", mode, "state source")
      ->check(CLI::IsMember({"reachable", "synthesized"}));

  std::string from, to, start, via;
  auto* flow = app.add_subcommand("flow", "search for an information flow");
  add_common(flow);
  add_flow_bounds(flow);
  flow->add_option("--from", from, "source object")->required();
  flow->add_option("--to", to, "sink object")->required();
  flow->add_option("--start", start, "start state");
  flow->add_option("--via", via, "comma-separated subject chain");

  auto* confine = app.add_subcommand("confine", "check flow confinement");
  add_common(confine);
  add_flow_bounds(confine);
  confine->add_option("--start", start, "start state");

  auto* bisim = app.add_subcommand("bisim", "compare explicit and implicit models");
  add_common(bisim);
  add_depth(bisim);

  auto* explore_cmd = app.add_subcommand("explore", "enumerate reachable states");
  add_common(explore_cmd);
  add_depth(explore_cmd);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kPass : kInput;
  }

  try {
    if (*validate) return cmd_validate(c);
    if (*replay_cmd) return cmd_replay(c, trace_path);
    if (*repl) return cmd_repl(c);
    if (*check) return cmd_check(c, state_text);
    if (*theorems) return cmd_theorems(c);
    if (*lemmas) return cmd_lemmas(c, rules, invariants, mode);
    if (*flow) return cmd_flow(c, from, to, start, via);
    if (*confine) return cmd_confine(c, start);
    if (*bisim) return cmd_bisim(c);
    if (*explore_cmd) return cmd_explore(c);
  } catch (const StateSpaceCapExceeded& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kCap;
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    for (const auto& v : e.violations()) std::cerr << "  " << v.describe() << '\n';
    return kFail;
  } catch (const PremiseViolated& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInput;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInput;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInput;
  }
  return kInput;
}
