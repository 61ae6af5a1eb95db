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

#ifndef CWALL_FLOW_HH_
#define CWALL_FLOW_HH_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "cwall/graph.hh"
#include "cwall/invariants.hh"
#include "cwall/limits.hh"
#include "cwall/policy.hh"
#include "cwall/state.hh"
#include "cwall/transition.hh"

namespace cwall {

/**
 * Action label of the transition system. A request in Read mode carries a
 * read label; WriteOnly and ReadWrite requests both carry a write label.
 */
struct ActionLabel {
  enum class Kind : std::uint8_t { kRead, kWrite };
  Kind kind;
  SubjectId subject;
  ObjectId object;

  bool operator==(const ActionLabel&) const = default;
};

ActionLabel label_of(const Request& req);
bool has_label(const Request& req, const ActionLabel& label);

/**
 * All states reachable by at most `padding` arbitrary permitted steps
 * followed by one step carrying `label`, over every rule choice.
 */
std::set<State> big_step_successors(const Policy& policy, const State& state,
                                    const ActionLabel& label,
                                    std::size_t padding,
                                    const EngineOptions& options = {},
                                    std::size_t state_cap = kDefaultStateCap);

/// Role of one step inside a flow witness.
struct Marker {
  enum class Kind : std::uint8_t { kPadding, kRead, kWrite };
  Kind kind = Kind::kPadding;
  /// Zero-based hop the marked step belongs to.
  std::size_t hop = 0;

  bool operator==(const Marker&) const = default;
};

struct FlowStep {
  Request request;
  RuleId rule;
  Marker marker;
};

/**
 * Evidence that information flows from objects.front() to objects.back():
 * for each hop i, a marked read of objects[i] by subjects[i] and a later
 * marked write of objects[i+1] by the same subject, interleaved with
 * unmarked padding steps.
 */
struct FlowWitness {
  State start;
  std::vector<ObjectId> objects;
  std::vector<SubjectId> subjects;
  std::vector<FlowStep> steps;

  std::size_t hops() const { return subjects.size(); }
  ObjectId source() const { return objects.front(); }
  ObjectId sink() const { return objects.back(); }
};

struct FlowBounds {
  std::size_t max_hops = 2;
  std::size_t max_padding = 2;
  /// Optional bound on the total number of steps of a witness.
  std::optional<std::size_t> max_actions;
};

struct FlowQuery {
  State start;
  ObjectId source;
  ObjectId sink;
  FlowBounds bounds;
  /// When set, the witness must use exactly these subjects, in order.
  std::optional<std::vector<SubjectId>> subject_chain;
  /// When set, the witness must visit exactly these objects, in order.
  std::optional<std::vector<ObjectId>> object_chain;
};

struct NoFlowWithinBounds {
  std::size_t states_explored = 0;
};

using FlowResult = std::variant<FlowWitness, NoFlowWithinBounds>;

/// Breadth-first search for a shortest witness (fewest steps).
FlowResult find_flow(const Policy& policy, const FlowQuery& query,
                     const EngineOptions& options = {},
                     std::size_t state_cap = kDefaultStateCap);

/**
 * Calls `visit` on every witness within the query's bounds, which must
 * include max_actions. Stops early when `visit` returns false.
 */
void for_each_witness(const Policy& policy, const FlowQuery& query,
                      const std::function<bool(const FlowWitness&)>& visit,
                      const EngineOptions& options = {});

/**
 * Replays a witness: every step must be permitted under its rule and the
 * markers must spell out the hop structure. With `bounds`, also enforces
 * the hop, padding and action limits. Returns an explanation on failure.
 */
std::optional<std::string> verify_witness(
    const Policy& policy, const FlowWitness& witness,
    const std::optional<FlowBounds>& bounds = std::nullopt,
    const EngineOptions& options = {});

/// State reached after all steps of a witness.
State witness_end(const Policy& policy, const FlowWitness& witness);

/**
 * Joins a witness of o to o' with one of o' to o'' that starts where the
 * first ends. Throws std::invalid_argument if they do not line up.
 */
FlowWitness concatenate(const Policy& policy, const FlowWitness& first,
                        const FlowWitness& second);

/**
 * Memoized flow relation over one state graph. The memo is shared across
 * queries, so asking for many start states of the same graph is cheap.
 */
class FlowAnalyzer {
 public:
  FlowAnalyzer(StateGraph& graph, FlowBounds bounds);

  /// Objects reachable by a flow from `source` starting at the state.
  std::uint64_t sinks(std::uint32_t state, ObjectId source);

  /// Ordered pairs (source, sink) with a flow from the state.
  std::set<std::pair<ObjectId, ObjectId>> relation(std::uint32_t state);

  const FlowBounds& bounds() const { return bounds_; }
  StateGraph& graph() const { return graph_; }

 private:
  std::uint64_t solve(std::uint32_t state, bool at_subject,
                      std::uint32_t carrier, std::size_t hops_left,
                      std::size_t pad_used, std::size_t actions_left);

  StateGraph& graph_;
  FlowBounds bounds_;
  std::unordered_map<std::uint64_t, std::uint64_t> memo_;
};

/// Maximum object count supported by FlowAnalyzer and taint_flows.
inline constexpr std::size_t kMaxFlowObjects = 64;

/// Flow relation from a start state.
std::set<std::pair<ObjectId, ObjectId>> flow_relation(
    const Policy& policy, const State& start, const FlowBounds& bounds,
    const EngineOptions& options = {},
    std::size_t state_cap = kDefaultStateCap);

struct ConfinementReport {
  /// One witness per offending (source, sink) pair.
  std::vector<FlowWitness> violations;
  /// Pairs (o, o') with o != o' and a flow found.
  std::size_t pairs_with_flow = 0;

  bool passed() const { return violations.empty(); }
};

/**
 * Every flow found within bounds from `start` must leave a sanitized object
 * or stay in one dataset. Throws PremiseViolated when `start` breaks the
 * *-property.
 */
ConfinementReport check_flow_confinement(
    const Policy& policy, const State& start, const FlowBounds& bounds,
    const EngineOptions& options = {},
    std::size_t state_cap = kDefaultStateCap);

/// Same check for an already indexed start state, reusing the analyzer.
ConfinementReport check_flow_confinement(FlowAnalyzer& analyzer,
                                         std::uint32_t start);

/**
 * Independent oracle: runs every permitted action sequence of at most
 * `action_budget` steps, propagating taint. A read adds the object's taint
 * to the subject; a write adds the subject's taint to the object. Objects
 * start tainted with themselves. Returns pairs (source, sink) with source
 * in the taint of sink in some run.
 */
std::set<std::pair<ObjectId, ObjectId>> taint_flows(
    const Policy& policy, const State& start, std::size_t action_budget,
    const EngineOptions& options = {},
    std::size_t state_cap = kDefaultStateCap);

/**
 * Taint along one fixed run of requests, each decided by `strategy`. This
 * equals the set of pairs with a witness whose steps are exactly the run.
 * Throws std::invalid_argument when a request is denied.
 */
std::set<std::pair<ObjectId, ObjectId>> run_flows(
    const Policy& policy, const State& start,
    const std::vector<Request>& run,
    const Strategy& strategy = PreferNonRevoking{},
    const EngineOptions& options = {});

std::string describe(const Policy& policy, const FlowWitness& witness);

}  // namespace cwall

#endif  // CWALL_FLOW_HH_
