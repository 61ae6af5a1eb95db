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

#include "cwall/implicit.hh"

#include <deque>
#include <sstream>
#include <unordered_map>

namespace cwall {

ImplicitState ImplicitState::initial(const Policy& policy) {
  return {AccessMatrix(policy.subject_count(), policy.object_count())};
}

const char* to_string(ImplicitRule rule) {
  switch (rule) {
    case ImplicitRule::kIR:
      return "iR";
    case ImplicitRule::kIW:
      return "iW";
    case ImplicitRule::kIRW:
      return "iRW";
  }
  return "?";
}

ImplicitRule implicit_rule_for(Mode mode) {
  switch (mode) {
    case Mode::kRead:
      return ImplicitRule::kIR;
    case Mode::kWriteOnly:
      return ImplicitRule::kIW;
    case Mode::kReadWrite:
      return ImplicitRule::kIRW;
  }
  return ImplicitRule::kIR;
}

ImplicitResult implicit_step(const Policy& policy, const ImplicitState& state,
                             const Request& req) {
  check_request(policy, req);
  const auto rule = implicit_rule_for(req.mode);
  const auto s = req.subject;
  const auto o = req.object;
  std::vector<Access> blockers;
  for (auto other : state.read.row(s)) {
    const bool ok =
        rule == ImplicitRule::kIR
            ? policy.ds(other) == policy.ds(o) ||
                  policy.coi(other) != policy.coi(o)
            : policy.ds(other) == policy.ds(o) || policy.is_sanitized(other);
    if (!ok) blockers.push_back({s, other});
  }
  if (!blockers.empty()) {
    return ImplicitDenied{
        req, rule,
        {rule == ImplicitRule::kIR ? "simple-security" : "star-property",
         std::move(blockers)}};
  }
  ImplicitState next = state;
  if (rule != ImplicitRule::kIW) next.read.insert(s, o);
  return next;
}

namespace {

struct Node {
  State state;
  std::size_t parent;
  std::size_t depth;
  BisimStep via;
};

std::vector<BisimStep> trace_to(const std::vector<Node>& nodes,
                                std::size_t index) {
  std::vector<BisimStep> out;
  while (index != 0) {
    out.push_back(nodes[index].via);
    index = nodes[index].parent;
  }
  return {out.rbegin(), out.rend()};
}

}  // namespace

BisimResult check_bisimulation(const Policy& policy,
                               const BisimOptions& options) {
  BisimResult result;
  std::vector<Node> nodes;
  std::unordered_map<State, std::size_t> index;
  nodes.push_back({State::initial(policy), 0, 0, {}});
  index.emplace(nodes[0].state, 0);

  auto diverge = [&](std::size_t at, const Request& req, std::string reason) {
    BisimCounterexample cex;
    cex.trace = trace_to(nodes, at);
    cex.request = req;
    cex.explicit_state = nodes[at].state;
    cex.implicit_state = {nodes[at].state.read};
    cex.reason = std::move(reason);
    result.counterexample = std::move(cex);
  };

  std::vector<RuleId> rules(kSoundRules.begin(), kSoundRules.end());
  if (options.engine.allow_wkread) rules.push_back(RuleId::kWkRead);

  for (std::size_t i = 0; i < nodes.size(); ++i) {
    ++result.pairs_explored;
    if (nodes[i].depth >= options.depth) continue;
    const State current = nodes[i].state;
    // Pairs are related by construction: the implicit side is current.read.
    const ImplicitState implicit{current.read};
    for (std::uint32_t s = 0; s < policy.subject_count(); ++s) {
      for (std::uint32_t o = 0; o < policy.object_count(); ++o) {
        for (auto mode : {Mode::kRead, Mode::kWriteOnly, Mode::kReadWrite}) {
          const Request req{SubjectId{s}, ObjectId{o}, mode, true};
          const auto imp = implicit_step(policy, implicit, req);
          const auto* imp_next = std::get_if<ImplicitState>(&imp);
          bool any_explicit = false;
          for (auto rule : rules) {
            if (rule_mode(rule) != mode ||
                !rule_enabled(policy, current, req, rule, options.engine)) {
              continue;
            }
            any_explicit = true;
            State next = rule_effect(policy, current, req, rule);
            if (imp_next == nullptr) {
              diverge(i, req,
                      std::string("explicit rule ") + to_string(rule) +
                          " fires but " + to_string(implicit_rule_for(mode)) +
                          " is denied");
              return result;
            }
            if (next.read != imp_next->read) {
              diverge(i, req,
                      std::string("explicit rule ") + to_string(rule) +
                          " and " + to_string(implicit_rule_for(mode)) +
                          " reach different read matrices");
              return result;
            }
            if (!index.contains(next)) {
              if (nodes.size() >= options.state_cap) {
                throw StateSpaceCapExceeded(options.state_cap,
                                            nodes[i].depth);
              }
              index.emplace(next, nodes.size());
              nodes.push_back({std::move(next), i, nodes[i].depth + 1,
                               {req, rule}});
            }
          }
          if (!any_explicit && imp_next != nullptr) {
            diverge(i, req,
                    std::string(to_string(implicit_rule_for(mode))) +
                        " permits the request but no explicit rule fires");
            return result;
          }
        }
      }
    }
  }
  return result;
}

std::string describe(const Policy& policy, const BisimCounterexample& cex) {
  std::ostringstream os;
  os << "divergence after " << cex.trace.size() << " step(s)\n";
  for (const auto& st : cex.trace) {
    os << "  " << describe(policy, st.request) << " [" << to_string(st.rule)
       << "]\n";
  }
  os << "  explicit: " << format_state(policy, cex.explicit_state) << '\n'
     << "  implicit: N=" << format_matrix(policy, cex.implicit_state.read)
     << '\n'
     << "  on " << describe(policy, cex.request) << ": " << cex.reason;
  return os.str();
}

}  // namespace cwall
