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

#ifndef CWALL_GRAPH_HH_
#define CWALL_GRAPH_HH_

#include <cstddef>
#include <cstdint>
#include <deque>
#include <optional>
#include <unordered_map>
#include <vector>

#include "cwall/limits.hh"
#include "cwall/policy.hh"
#include "cwall/state.hh"
#include "cwall/transition.hh"

namespace cwall {

/// One enabled rule application; `target` indexes the owning StateGraph.
struct Edge {
  Request request;
  RuleId rule;
  std::uint32_t target;
};

/**
 * Interned explicit states with lazily computed outgoing edges. Edges cover
 * every subject, object, mode and enabled rule, in that order. Requests that
 * need consent to revoke carry it; other requests do not, since consent
 * never disables a rule.
 */
class StateGraph {
 public:
  StateGraph(const Policy& policy, EngineOptions options,
             std::size_t state_cap = kDefaultStateCap);

  const Policy& policy() const { return *policy_; }
  const EngineOptions& options() const { return options_; }
  std::size_t state_cap() const { return cap_; }

  /// Index of the state, adding it if new. Throws StateSpaceCapExceeded.
  std::uint32_t intern(const State& state);
  std::optional<std::uint32_t> find(const State& state) const;

  const State& state(std::uint32_t index) const { return nodes_[index].state; }
  std::size_t size() const { return nodes_.size(); }

  /// Outgoing edges, computed on first use.
  const std::vector<Edge>& edges(std::uint32_t index);
  bool expanded(std::uint32_t index) const { return nodes_[index].expanded; }

 private:
  struct Node {
    State state;
    std::vector<Edge> edges;
    bool expanded = false;
  };

  const Policy* policy_;
  EngineOptions options_;
  std::size_t cap_;
  std::deque<Node> nodes_;
  std::unordered_map<State, std::uint32_t> index_;
};

/// Every enabled (request, rule) pair from a state, in StateGraph order.
std::vector<std::pair<Request, RuleId>> enabled_moves(
    const Policy& policy, const State& state, const EngineOptions& options);

}  // namespace cwall

#endif  // CWALL_GRAPH_HH_
