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

#ifndef CWALL_MODEL_CHECKER_HH_
#define CWALL_MODEL_CHECKER_HH_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cwall/flow.hh"
#include "cwall/invariants.hh"
#include "cwall/limits.hh"
#include "cwall/policy.hh"
#include "cwall/state.hh"
#include "cwall/transition.hh"

namespace cwall {

struct ReachEdge {
  std::uint32_t from;
  Request request;
  RuleId rule;
  std::uint32_t to;
};

/**
 * Reachable fragment of the explicit transition system. states[0] is the
 * initial state; states appear in breadth-first discovery order, which is
 * deterministic because moves are generated in a fixed order.
 */
struct ReachGraph {
  std::vector<State> states;
  std::vector<std::size_t> depth_of;
  std::vector<ReachEdge> edges;
  /// Largest depth of any state in the graph.
  std::size_t depth = 0;
  /// True when the state cap stopped the expansion.
  bool truncated = false;
  /// True when exploration ran out of new states before any depth bound.
  bool fixpoint = false;
};

struct ExploreOptions {
  /// Step bound; unset explores to a fixpoint.
  std::optional<std::size_t> depth;
  /// Rules that may fire. Including kWkRead enables it.
  RuleSet rules{RuleId::kMR,  RuleId::kMW,     RuleId::kXRBot, RuleId::kXRStar,
                RuleId::kXR,  RuleId::kXW,     RuleId::kXRWBot, RuleId::kXRW};
  std::size_t state_cap = kDefaultStateCap;
  State start;
  /// When false, start is the initial state.
  bool custom_start = false;
};

/// All states reachable within the bound. Never throws on the cap; check
/// ReachGraph::truncated instead.
ReachGraph explore(const Policy& policy, const ExploreOptions& options = {});

/// Throws StateSpaceCapExceeded if the graph is truncated.
void require_complete(const ReachGraph& graph);

/// Rules of a RuleSet plus the engine options needed to fire them.
EngineOptions engine_options_for(const RuleSet& rules);

/**
 * True when the invariant holds in the state; sds defaults to the one
 * rebuilt from N. minSub asks for every sds image to be a partial function
 * and for the subject bound on accessed datasets.
 */
bool invariant_holds(const Policy& policy, InvariantName invariant,
                     const State& state, const Sds* sds = nullptr);

enum class LemmaMode { kReachable, kSynthesized };

const char* to_string(LemmaMode mode);

struct LemmaCounterexample {
  State before;
  Request request;
  State after;
};

struct LemmaOptions {
  LemmaMode mode = LemmaMode::kReachable;
  /// Exploration bound in reachable mode; unset explores to a fixpoint.
  std::optional<std::size_t> depth;
  std::size_t state_cap = kDefaultStateCap;
  /// Further invariants assumed of every before-state.
  std::vector<InvariantName> assume;
};

struct LemmaResult {
  InvariantName invariant;
  RuleId rule;
  std::optional<LemmaCounterexample> counterexample;
  std::size_t states_checked = 0;

  bool holds() const { return !counterexample.has_value(); }
};

/**
 * Searches for a before-state satisfying the invariant (and the assumed
 * ones), a request the rule applies to, and an after-state breaking the
 * invariant. Reachable mode walks states reachable under the sound rules
 * plus `rule`; synthesized mode enumerates every (N, W) pair, which needs
 * a small policy (at most 20 matrix cells in total).
 */
LemmaResult check_invariance_lemma(const Policy& policy,
                                   InvariantName invariant, RuleId rule,
                                   const LemmaOptions& options = {});

/// Every counterexample, in search order.
std::vector<LemmaCounterexample> lemma_counterexamples(
    const Policy& policy, InvariantName invariant, RuleId rule,
    const LemmaOptions& options = {});

/// Re-checks a counterexample against the lemma it claims to refute.
bool counterexample_replays(const Policy& policy, InvariantName invariant,
                            RuleId rule, const LemmaCounterexample& cex);

/**
 * Object permutations that preserve the policy's structure: equal datasets,
 * equal CoICs and sanitized objects map to their like. Includes identity.
 */
std::vector<std::vector<ObjectId>> object_automorphisms(const Policy& policy);

/// True if some subject permutation and object automorphism maps a to b.
bool equal_up_to_renaming(const Policy& policy, const State& a,
                          const State& b);

struct CheckSummary {
  std::string name;
  std::size_t states_checked = 0;
  std::size_t violations = 0;
  std::string first_violation;
};

struct TheoremReport {
  std::vector<CheckSummary> checks;
  std::size_t states = 0;
  std::size_t depth = 0;
  bool truncated = false;

  bool passed() const;
};

struct TheoremOptions {
  std::optional<std::size_t> depth;
  RuleSet rules = ExploreOptions{}.rules;
  std::size_t state_cap = kDefaultStateCap;
  FlowBounds flow_bounds{2, 2, std::nullopt};
};

/**
 * Runs the state invariants on every reachable state (simple security,
 * *-property, CoI exclusivity, the subject bound, sds alignment) and flow
 * confinement from the initial state.
 */
TheoremReport check_theorems(const Policy& policy,
                             const TheoremOptions& options = {});

std::string describe(const Policy& policy, const LemmaCounterexample& cex);

}  // namespace cwall

#endif  // CWALL_MODEL_CHECKER_HH_
