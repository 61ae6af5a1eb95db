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

#include "cwall/model_checker.hh"

#include <algorithm>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

#include "cwall/graph.hh"

namespace cwall {

namespace {

Sds sds_after(const Policy& policy, const State& before, const Sds& sds,
              const State& after) {
  Sds out = sds;
  for (const auto& a : after.read.minus(before.read)) {
    out = update_sds(policy, std::move(out), a.subject, a.object);
  }
  return out;
}

bool all_hold(const Policy& policy, const std::vector<InvariantName>& names,
              const State& state, const Sds& sds) {
  return std::all_of(names.begin(), names.end(), [&](InvariantName n) {
    return invariant_holds(policy, n, state, &sds);
  });
}

// Checks one before-state against the lemma; appends counterexamples.
// Returns false once `first_only` is satisfied.
bool check_state(const Policy& policy, InvariantName invariant, RuleId rule,
                 const std::vector<InvariantName>& assumed, const State& before,
                 const Sds& sds, bool first_only,
                 std::vector<LemmaCounterexample>& out) {
  if (!all_hold(policy, assumed, before, sds)) return true;
  const EngineOptions engine{rule == RuleId::kWkRead};
  const auto mode = rule_mode(rule);
  for (std::uint32_t s = 0; s < policy.subject_count(); ++s) {
    for (std::uint32_t o = 0; o < policy.object_count(); ++o) {
      Request req{SubjectId{s}, ObjectId{o}, mode, true};
      if (!rule_enabled(policy, before, req, rule, engine)) continue;
      const State after = rule_effect(policy, before, req, rule);
      const Sds next_sds = sds_after(policy, before, sds, after);
      if (!invariant_holds(policy, invariant, after, &next_sds)) {
        req.consent_to_revoke =
            rule == RuleId::kXR &&
            !revocation_set(policy, before, req.subject, req.object).empty();
        out.push_back({before, req, after});
        if (first_only) return false;
      }
    }
  }
  return true;
}

std::vector<LemmaCounterexample> search_lemma(const Policy& policy,
                                              InvariantName invariant,
                                              RuleId rule,
                                              const LemmaOptions& options,
                                              bool first_only,
                                              std::size_t* checked) {
  std::vector<InvariantName> assumed{invariant};
  assumed.insert(assumed.end(), options.assume.begin(), options.assume.end());
  std::vector<LemmaCounterexample> out;
  *checked = 0;
  if (options.mode == LemmaMode::kReachable) {
    ExploreOptions eo;
    eo.depth = options.depth;
    eo.state_cap = options.state_cap;
    eo.rules.insert(rule);
    const auto graph = explore(policy, eo);
    require_complete(graph);
    for (const auto& st : graph.states) {
      ++*checked;
      if (!check_state(policy, invariant, rule, assumed, st,
                       sds_from_reads(policy, st.read), first_only, out)) {
        break;
      }
    }
    return out;
  }
  const std::size_t cells = policy.subject_count() * policy.object_count();
  if (2 * cells > 20) {
    throw std::invalid_argument(
        "synthesized mode needs at most 10 subject-object cells");
  }
  const std::uint32_t limit = 1U << cells;
  auto matrix = [&](std::uint32_t bits) {
    AccessMatrix m(policy.subject_count(), policy.object_count());
    for (std::uint32_t i = 0; i < cells; ++i) {
      if (bits >> i & 1U) {
        m.insert(SubjectId{static_cast<std::uint32_t>(i / policy.object_count())},
                 ObjectId{static_cast<std::uint32_t>(i % policy.object_count())});
      }
    }
    return m;
  };
  for (std::uint32_t n = 0; n < limit; ++n) {
    const auto read = matrix(n);
    const Sds sds = sds_from_reads(policy, read);
    for (std::uint32_t w = 0; w < limit; ++w) {
      ++*checked;
      if (!check_state(policy, invariant, rule, assumed, State(read, matrix(w)),
                       sds, first_only, out)) {
        return out;
      }
    }
  }
  return out;
}

}  // namespace

EngineOptions engine_options_for(const RuleSet& rules) {
  return EngineOptions{rules.contains(RuleId::kWkRead)};
}

ReachGraph explore(const Policy& policy, const ExploreOptions& options) {
  ReachGraph g;
  const auto engine = engine_options_for(options.rules);
  std::unordered_map<State, std::uint32_t> index;
  const State start =
      options.custom_start ? options.start : State::initial(policy);
  g.states.push_back(start);
  g.depth_of.push_back(0);
  index.emplace(start, 0);
  for (std::size_t i = 0; i < g.states.size(); ++i) {
    if (options.depth && g.depth_of[i] >= *options.depth) continue;
    const State from = g.states[i];
    for (const auto& [req, rule] : enabled_moves(policy, from, engine)) {
      if (!options.rules.contains(rule)) continue;
      State to = rule_effect(policy, from, req, rule);
      auto it = index.find(to);
      if (it == index.end()) {
        if (g.states.size() >= options.state_cap) {
          g.truncated = true;
          return g;
        }
        it = index.emplace(to, static_cast<std::uint32_t>(g.states.size()))
                 .first;
        g.states.push_back(std::move(to));
        g.depth_of.push_back(g.depth_of[i] + 1);
        g.depth = std::max(g.depth, g.depth_of.back());
      }
      g.edges.push_back({static_cast<std::uint32_t>(i), req, rule, it->second});
    }
  }
  // No state at the bound discovered anything new beyond it.
  g.fixpoint = !options.depth || g.depth < *options.depth;
  return g;
}

void require_complete(const ReachGraph& graph) {
  if (graph.truncated) {
    throw StateSpaceCapExceeded(graph.states.size(), graph.depth);
  }
}

bool invariant_holds(const Policy& policy, InvariantName invariant,
                     const State& state, const Sds* sds) {
  switch (invariant) {
    case InvariantName::kSimpSec:
      return check_simp_sec(policy, state.read).passed();
    case InvariantName::kStarProp:
      return check_star_prop(policy, state).passed();
    case InvariantName::kMinSub: {
      // Each sds image is a partial function; that forces the bound too.
      const Sds rebuilt =
          sds == nullptr ? sds_from_reads(policy, state.read) : Sds{};
      const Sds& images = sds == nullptr ? rebuilt : *sds;
      return check_sds_functional(policy, images).passed() &&
             check_min_subjects(policy, state.read).passed();
    }
    case InvariantName::kSdsAlignment: {
      if (sds != nullptr) {
        return check_sds_alignment(policy, *sds, state.read).passed();
      }
      return check_sds_alignment(policy, sds_from_reads(policy, state.read),
                                 state.read)
          .passed();
    }
  }
  return false;
}

const char* to_string(LemmaMode mode) {
  return mode == LemmaMode::kReachable ? "reachable" : "synthesized";
}

LemmaResult check_invariance_lemma(const Policy& policy,
                                   InvariantName invariant, RuleId rule,
                                   const LemmaOptions& options) {
  LemmaResult result{invariant, rule, std::nullopt, 0};
  auto found =
      search_lemma(policy, invariant, rule, options, true, &result.states_checked);
  if (!found.empty()) result.counterexample = std::move(found.front());
  return result;
}

std::vector<LemmaCounterexample> lemma_counterexamples(
    const Policy& policy, InvariantName invariant, RuleId rule,
    const LemmaOptions& options) {
  std::size_t checked = 0;
  return search_lemma(policy, invariant, rule, options, false, &checked);
}

bool counterexample_replays(const Policy& policy, InvariantName invariant,
                            RuleId rule, const LemmaCounterexample& cex) {
  const EngineOptions engine{rule == RuleId::kWkRead};
  if (!invariant_holds(policy, invariant, cex.before)) return false;
  if (!rule_enabled(policy, cex.before, cex.request, rule, engine)) return false;
  const State after = rule_effect(policy, cex.before, cex.request, rule);
  if (after != cex.after) return false;
  const Sds sds = sds_after(policy, cex.before,
                            sds_from_reads(policy, cex.before.read), after);
  return !invariant_holds(policy, invariant, after, &sds);
}

std::vector<std::vector<ObjectId>> object_automorphisms(const Policy& policy) {
  const auto n = policy.object_count();
  if (n > 8) throw std::invalid_argument("too many objects to permute");
  std::vector<std::uint32_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0U);
  std::vector<std::vector<ObjectId>> out;
  do {
    bool ok = true;
    for (std::uint32_t a = 0; a < n && ok; ++a) {
      const ObjectId oa{a};
      const ObjectId pa{perm[a]};
      if (policy.is_sanitized(oa) != policy.is_sanitized(pa)) ok = false;
      for (std::uint32_t b = a + 1; b < n && ok; ++b) {
        const ObjectId ob{b};
        const ObjectId pb{perm[b]};
        ok = (policy.ds(oa) == policy.ds(ob)) == (policy.ds(pa) == policy.ds(pb)) &&
             (policy.coi(oa) == policy.coi(ob)) ==
                 (policy.coi(pa) == policy.coi(pb));
      }
    }
    if (ok) {
      std::vector<ObjectId> m;
      for (auto p : perm) m.push_back(ObjectId{p});
      out.push_back(std::move(m));
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return out;
}

bool equal_up_to_renaming(const Policy& policy, const State& a,
                          const State& b) {
  if (a.read.size() != b.read.size() || a.write.size() != b.write.size()) {
    return false;
  }
  const auto autos = object_automorphisms(policy);
  std::vector<std::uint32_t> sperm(policy.subject_count());
  std::iota(sperm.begin(), sperm.end(), 0U);
  auto maps = [&](const AccessMatrix& from, const AccessMatrix& to,
                  const std::vector<ObjectId>& operm) {
    for (const auto& e : from.entries()) {
      if (!to.contains(SubjectId{sperm[e.subject.value]},
                       operm[e.object.value])) {
        return false;
      }
    }
    return true;
  };
  do {
    for (const auto& operm : autos) {
      if (maps(a.read, b.read, operm) && maps(a.write, b.write, operm)) {
        return true;
      }
    }
  } while (std::next_permutation(sperm.begin(), sperm.end()));
  return false;
}

bool TheoremReport::passed() const {
  return !truncated &&
         std::all_of(checks.begin(), checks.end(),
                     [](const CheckSummary& c) { return c.violations == 0; });
}

TheoremReport check_theorems(const Policy& policy,
                             const TheoremOptions& options) {
  ExploreOptions eo;
  eo.depth = options.depth;
  eo.rules = options.rules;
  eo.state_cap = options.state_cap;
  const auto graph = explore(policy, eo);

  // sds is carried along first-discovery edges, as the rules update it.
  std::vector<std::optional<Sds>> sds(graph.states.size());
  sds[0] = Sds{};
  for (const auto& e : graph.edges) {
    if (!sds[e.to] && sds[e.from]) {
      sds[e.to] = sds_after(policy, graph.states[e.from], *sds[e.from],
                            graph.states[e.to]);
    }
  }

  TheoremReport report;
  report.states = graph.states.size();
  report.depth = graph.depth;
  report.truncated = graph.truncated;

  auto summary = [](const char* name) {
    CheckSummary c;
    c.name = name;
    return c;
  };
  CheckSummary simp = summary("simple-security"),
               star = summary("star-property"),
               excl = summary("coi-exclusivity"),
               minsub = summary("min-subjects"),
               strict = summary("min-subjects-active"),
               align = summary("sds-alignment"),
               route = summary("sds-route-agrees");
  auto note = [&](CheckSummary& c, bool ok, const State& st,
                  const std::string& detail) {
    ++c.states_checked;
    if (ok) return;
    if (c.violations++ == 0) {
      c.first_violation = format_state(policy, st) +
                          (detail.empty() ? "" : ": " + detail);
    }
  };
  auto first = [&](const ViolationReport& r) {
    return r.passed() ? std::string() : describe(policy, r.witnesses.front());
  };
  for (std::size_t i = 0; i < graph.states.size(); ++i) {
    const auto& st = graph.states[i];
    const auto& state_sds = sds[i] ? *sds[i] : sds_from_reads(policy, st.read);
    const auto simp_r = check_simp_sec(policy, st.read);
    note(simp, simp_r.passed(), st, first(simp_r));
    const auto star_r = check_star_prop(policy, st);
    note(star, star_r.passed(), st, first(star_r));
    if (simp_r.passed()) {
      const auto r = check_coi_exclusivity(policy, st.read);
      note(excl, r.passed(), st, first(r));
    }
    const auto min_r = check_min_subjects(policy, st.read);
    note(minsub, min_r.passed(), st, first(min_r));
    const auto strict_r = check_min_subjects_strict(policy, st.read);
    note(strict, strict_r.passed(), st, first(strict_r));
    const auto align_r = check_sds_alignment(policy, state_sds, st.read);
    note(align, align_r.passed(), st, first(align_r));
    note(route,
         min_subjects_via_sds(policy, state_sds, st.read) == min_r.passed(), st,
         "sds argument and direct count disagree");
  }
  report.checks = {simp, star, excl, minsub, strict, align, route};

  CheckSummary flow = summary("flow-confinement");
  if (!graph.truncated) {
    const auto conf = check_flow_confinement(
        policy, State::initial(policy), options.flow_bounds,
        engine_options_for(options.rules), options.state_cap);
    flow.states_checked = 1;
    flow.violations = conf.violations.size();
    if (!conf.passed()) {
      flow.first_violation = describe(policy, conf.violations.front());
    }
  }
  report.checks.push_back(flow);
  return report;
}

std::string describe(const Policy& policy, const LemmaCounterexample& cex) {
  std::ostringstream os;
  os << "before: " << format_state(policy, cex.before) << '\n'
     << "request: " << describe(policy, cex.request) << '\n'
     << "after: " << format_state(policy, cex.after);
  return os.str();
}

}  // namespace cwall
