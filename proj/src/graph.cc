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

#include "cwall/graph.hh"

namespace cwall {

std::vector<std::pair<Request, RuleId>> enabled_moves(
    const Policy& policy, const State& state, const EngineOptions& options) {
  std::vector<std::pair<Request, RuleId>> out;
  for (std::uint32_t s = 0; s < policy.subject_count(); ++s) {
    for (std::uint32_t o = 0; o < policy.object_count(); ++o) {
      for (auto mode : {Mode::kRead, Mode::kWriteOnly, Mode::kReadWrite}) {
        Request req{SubjectId{s}, ObjectId{o}, mode, true};
        for (auto rule : rule_priority(mode)) {
          if (!rule_enabled(policy, state, req, rule, options)) continue;
          Request recorded = req;
          recorded.consent_to_revoke =
              rule == RuleId::kXR &&
              !revocation_set(policy, state, req.subject, req.object).empty();
          out.emplace_back(recorded, rule);
        }
      }
    }
  }
  return out;
}

StateGraph::StateGraph(const Policy& policy, EngineOptions options,
                       std::size_t state_cap)
    : policy_(&policy), options_(options), cap_(state_cap) {}

std::uint32_t StateGraph::intern(const State& state) {
  if (auto it = index_.find(state); it != index_.end()) return it->second;
  if (nodes_.size() >= cap_) throw StateSpaceCapExceeded(cap_, 0);
  const auto idx = static_cast<std::uint32_t>(nodes_.size());
  nodes_.push_back({state, {}, false});
  index_.emplace(state, idx);
  return idx;
}

std::optional<std::uint32_t> StateGraph::find(const State& state) const {
  if (auto it = index_.find(state); it != index_.end()) return it->second;
  return std::nullopt;
}

const std::vector<Edge>& StateGraph::edges(std::uint32_t index) {
  if (!nodes_[index].expanded) {
    // Copy: interning may grow the deque, but never moves existing nodes.
    const State from = nodes_[index].state;
    std::vector<Edge> out;
    for (const auto& [req, rule] : enabled_moves(*policy_, from, options_)) {
      out.push_back(
          {req, rule, intern(rule_effect(*policy_, from, req, rule))});
    }
    nodes_[index].edges = std::move(out);
    nodes_[index].expanded = true;
  }
  return nodes_[index].edges;
}

}  // namespace cwall
