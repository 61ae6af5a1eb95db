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

#include "cwall/flow.hh"

#include <bit>
#include <deque>
#include <sstream>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

namespace cwall {

namespace {

constexpr std::uint64_t bit(std::uint32_t i) { return std::uint64_t{1} << i; }

void require_flow_size(const Policy& policy) {
  if (policy.object_count() > kMaxFlowObjects ||
      policy.subject_count() > kMaxFlowObjects) {
    throw std::invalid_argument(
        "flow analysis supports at most 64 objects and 64 subjects");
  }
}

bool is_read(const Request& req) { return req.mode == Mode::kRead; }

std::size_t required_hops(const FlowQuery& q, bool* pinned) {
  *pinned = false;
  std::optional<std::size_t> hops;
  if (q.subject_chain) hops = q.subject_chain->size();
  if (q.object_chain) {
    if (q.object_chain->empty()) {
      throw std::invalid_argument("object chain must name the source");
    }
    const auto n = q.object_chain->size() - 1;
    if (hops && *hops != n) {
      throw std::invalid_argument("subject and object chains disagree");
    }
    hops = n;
    if (q.object_chain->front() != q.source ||
        q.object_chain->back() != q.sink) {
      throw std::invalid_argument("object chain must run from source to sink");
    }
  }
  if (hops) {
    *pinned = true;
    return *hops;
  }
  return q.bounds.max_hops;
}

// Search position inside a witness: which marker comes next, what carries
// the information, and how far along the current big step is.
struct Position {
  std::uint32_t state;
  bool at_subject;
  std::uint32_t carrier;
  std::uint32_t hops_done;
  std::uint32_t pad;

  std::uint64_t key() const {
    return (std::uint64_t{state} << 32) | (std::uint64_t{at_subject} << 31) |
           (std::uint64_t{carrier} << 16) | (std::uint64_t{hops_done} << 8) |
           pad;
  }
};

// Moves available from a position, shared by the BFS and the enumerator.
template <class Fn>
void for_each_move(StateGraph& graph, const FlowQuery& q, std::size_t hops,
                   bool pinned, const Position& at, Fn&& fn) {
  const auto& edges = graph.edges(at.state);
  for (std::size_t i = 0; i < edges.size(); ++i) {
    const Edge e = graph.edges(at.state)[i];
    if (at.pad < q.bounds.max_padding) {
      fn(e, Marker{}, Position{e.target, at.at_subject, at.carrier,
                               at.hops_done, at.pad + 1},
         false);
    }
    if (!at.at_subject) {
      if (at.hops_done >= hops || !is_read(e.request) ||
          e.request.object.value != at.carrier) {
        continue;
      }
      if (q.subject_chain &&
          (*q.subject_chain)[at.hops_done] != e.request.subject) {
        continue;
      }
      fn(e, Marker{Marker::Kind::kRead, at.hops_done},
         Position{e.target, true, e.request.subject.value, at.hops_done, 0},
         false);
    } else {
      if (is_read(e.request) || e.request.subject.value != at.carrier) {
        continue;
      }
      const auto next_hops = at.hops_done + 1;
      if (q.object_chain &&
          (*q.object_chain)[next_hops] != e.request.object) {
        continue;
      }
      const bool done = e.request.object == q.sink &&
                        (!pinned || next_hops == hops);
      if (!done && next_hops >= hops) continue;
      fn(e, Marker{Marker::Kind::kWrite, at.hops_done},
         Position{e.target, false, e.request.object.value, next_hops, 0},
         done);
    }
  }
}

FlowWitness trivial_witness(const FlowQuery& q) {
  FlowWitness w;
  w.start = q.start;
  w.objects = {q.source};
  return w;
}

void fill_chains(FlowWitness& w) {
  for (const auto& st : w.steps) {
    if (st.marker.kind == Marker::Kind::kRead) {
      w.subjects.push_back(st.request.subject);
    } else if (st.marker.kind == Marker::Kind::kWrite) {
      w.objects.push_back(st.request.object);
    }
  }
}

}  // namespace

ActionLabel label_of(const Request& req) {
  return {is_read(req) ? ActionLabel::Kind::kRead : ActionLabel::Kind::kWrite,
          req.subject, req.object};
}

bool has_label(const Request& req, const ActionLabel& label) {
  return label_of(req) == label;
}

std::set<State> big_step_successors(const Policy& policy, const State& state,
                                    const ActionLabel& label,
                                    std::size_t padding,
                                    const EngineOptions& options,
                                    std::size_t state_cap) {
  StateGraph graph(policy, options, state_cap);
  std::vector<std::uint32_t> frontier{graph.intern(state)};
  std::unordered_set<std::uint32_t> seen(frontier.begin(), frontier.end());
  std::vector<std::uint32_t> all = frontier;
  for (std::size_t layer = 0; layer < padding && !frontier.empty(); ++layer) {
    std::vector<std::uint32_t> next;
    for (auto idx : frontier) {
      for (const auto& e : graph.edges(idx)) {
        if (seen.insert(e.target).second) next.push_back(e.target);
      }
    }
    all.insert(all.end(), next.begin(), next.end());
    frontier = std::move(next);
  }
  std::set<State> out;
  for (auto idx : all) {
    for (const auto& e : graph.edges(idx)) {
      if (has_label(e.request, label)) out.insert(graph.state(e.target));
    }
  }
  return out;
}

FlowResult find_flow(const Policy& policy, const FlowQuery& query,
                     const EngineOptions& options, std::size_t state_cap) {
  check_request(policy, {SubjectId{0}, query.source});
  check_request(policy, {SubjectId{0}, query.sink});
  bool pinned = false;
  const auto hops = required_hops(query, &pinned);
  if (query.source == query.sink && (!pinned || hops == 0)) {
    return trivial_witness(query);
  }
  if (hops == 0) return NoFlowWithinBounds{};

  StateGraph graph(policy, options, state_cap);
  struct Node {
    Position at;
    std::size_t parent;
    FlowStep step;
    std::size_t actions;
  };
  std::vector<Node> nodes;
  std::unordered_set<std::uint64_t> visited;
  const Position root{graph.intern(query.start), false, query.source.value, 0,
                      0};
  nodes.push_back({root, 0, {}, 0});
  visited.insert(root.key());

  auto build = [&](std::size_t idx, const FlowStep& last) {
    FlowWitness w;
    w.start = query.start;
    w.objects = {query.source};
    std::vector<FlowStep> rev{last};
    for (; idx != 0; idx = nodes[idx].parent) rev.push_back(nodes[idx].step);
    w.steps.assign(rev.rbegin(), rev.rend());
    fill_chains(w);
    return w;
  };

  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const Node cur = nodes[i];
    if (query.bounds.max_actions && cur.actions >= *query.bounds.max_actions) {
      continue;
    }
    std::optional<FlowWitness> found;
    for_each_move(graph, query, hops, pinned, cur.at,
                  [&](const Edge& e, Marker m, Position next, bool done) {
                    if (found) return;
                    FlowStep step{e.request, e.rule, m};
                    if (done) {
                      found = build(i, step);
                      return;
                    }
                    if (!visited.insert(next.key()).second) return;
                    nodes.push_back({next, i, step, cur.actions + 1});
                  });
    if (found) return *found;
  }
  return NoFlowWithinBounds{graph.size()};
}

void for_each_witness(const Policy& policy, const FlowQuery& query,
                      const std::function<bool(const FlowWitness&)>& visit,
                      const EngineOptions& options) {
  if (!query.bounds.max_actions) {
    throw std::invalid_argument("witness enumeration needs an action bound");
  }
  bool pinned = false;
  const auto hops = required_hops(query, &pinned);
  if (query.source == query.sink && (!pinned || hops == 0)) {
    if (!visit(trivial_witness(query))) return;
  }
  if (hops == 0) return;
  StateGraph graph(policy, options);
  std::vector<FlowStep> path;
  bool stop = false;
  std::function<void(const Position&)> dfs = [&](const Position& at) {
    if (stop || path.size() >= *query.bounds.max_actions) return;
    for_each_move(graph, query, hops, pinned, at,
                  [&](const Edge& e, Marker m, Position next, bool done) {
                    if (stop) return;
                    path.push_back({e.request, e.rule, m});
                    if (done) {
                      FlowWitness w;
                      w.start = query.start;
                      w.objects = {query.source};
                      w.steps = path;
                      fill_chains(w);
                      if (!visit(w)) stop = true;
                    }
                    // Pinned chains may pass the sink before the last hop.
                    if (!stop && next.hops_done < hops) dfs(next);
                    path.pop_back();
                  });
  };
  dfs({graph.intern(query.start), false, query.source.value, 0, 0});
}

std::optional<std::string> verify_witness(const Policy& policy,
                                          const FlowWitness& witness,
                                          const std::optional<FlowBounds>& bounds,
                                          const EngineOptions& options) {
  const auto n = witness.subjects.size();
  if (witness.objects.size() != n + 1) {
    return "object chain must be one longer than subject chain";
  }
  State cur = witness.start;
  std::size_t hop = 0;
  bool expect_write = false;
  std::size_t run = 0;
  std::size_t max_run = 0;
  for (std::size_t i = 0; i < witness.steps.size(); ++i) {
    const auto& st = witness.steps[i];
    const std::string where = "step " + std::to_string(i + 1) + ": ";
    try {
      check_request(policy, st.request);
    } catch (const Error& e) {
      return where + e.what();
    }
    if (rule_mode(st.rule) != st.request.mode) {
      return where + "rule does not answer this mode";
    }
    if (!rule_enabled(policy, cur, st.request, st.rule, options)) {
      return where + "rule " + to_string(st.rule) + " is not enabled";
    }
    cur = rule_effect(policy, cur, st.request, st.rule);
    if (st.marker.kind == Marker::Kind::kPadding) {
      ++run;
      continue;
    }
    max_run = std::max(max_run, run);
    run = 0;
    if (hop >= n || st.marker.hop != hop) return where + "marker out of order";
    if (!expect_write) {
      if (st.marker.kind != Marker::Kind::kRead || !is_read(st.request) ||
          st.request.subject != witness.subjects[hop] ||
          st.request.object != witness.objects[hop]) {
        return where + "expected the read of hop " + std::to_string(hop + 1);
      }
      expect_write = true;
    } else {
      if (st.marker.kind != Marker::Kind::kWrite || is_read(st.request) ||
          st.request.subject != witness.subjects[hop] ||
          st.request.object != witness.objects[hop + 1]) {
        return "step " + std::to_string(i + 1) + ": expected the write of hop " +
               std::to_string(hop + 1);
      }
      expect_write = false;
      ++hop;
    }
  }
  if (hop != n || expect_write) return "witness ends before its last write";
  if (run != 0) return "witness ends with unmarked steps";
  if (bounds) {
    if (n > bounds->max_hops) return "too many hops";
    if (max_run > bounds->max_padding) return "too much padding in a big step";
    if (bounds->max_actions && witness.steps.size() > *bounds->max_actions) {
      return "too many actions";
    }
  }
  return std::nullopt;
}

State witness_end(const Policy& policy, const FlowWitness& witness) {
  State cur = witness.start;
  for (const auto& st : witness.steps) {
    cur = rule_effect(policy, cur, st.request, st.rule);
  }
  return cur;
}

FlowWitness concatenate(const Policy& policy, const FlowWitness& first,
                        const FlowWitness& second) {
  if (first.sink() != second.source()) {
    throw std::invalid_argument("witnesses do not share the middle object");
  }
  if (witness_end(policy, first) != second.start) {
    throw std::invalid_argument("second witness does not start where first ends");
  }
  FlowWitness out = first;
  out.objects.insert(out.objects.end(), second.objects.begin() + 1,
                     second.objects.end());
  out.subjects.insert(out.subjects.end(), second.subjects.begin(),
                      second.subjects.end());
  for (auto st : second.steps) {
    if (st.marker.kind != Marker::Kind::kPadding) st.marker.hop += first.hops();
    out.steps.push_back(st);
  }
  return out;
}

namespace {

constexpr std::size_t kUnbounded = 63;

}  // namespace

FlowAnalyzer::FlowAnalyzer(StateGraph& graph, FlowBounds bounds)
    : graph_(graph), bounds_(bounds) {
  require_flow_size(graph.policy());
  if (bounds.max_hops > 31 || bounds.max_padding > 31 ||
      (bounds.max_actions && *bounds.max_actions >= kUnbounded)) {
    throw std::invalid_argument("flow bounds too large");
  }
}

std::uint64_t FlowAnalyzer::solve(std::uint32_t state, bool at_subject,
                                  std::uint32_t carrier, std::size_t hops_left,
                                  std::size_t pad_used,
                                  std::size_t actions_left) {
  const std::uint64_t key =
      (std::uint64_t{state} << 32) | (std::uint64_t{at_subject} << 31) |
      (std::uint64_t{carrier} << 24) | (hops_left << 16) | (pad_used << 8) |
      actions_left;
  if (auto it = memo_.find(key); it != memo_.end()) return it->second;

  std::uint64_t result = at_subject ? 0 : bit(carrier);
  if (actions_left != 0) {
    const auto next_actions =
        actions_left == kUnbounded ? kUnbounded : actions_left - 1;
    const auto& edges = graph_.edges(state);
    for (std::size_t i = 0; i < edges.size(); ++i) {
      const Edge e = graph_.edges(state)[i];
      if (pad_used < bounds_.max_padding) {
        result |= solve(e.target, at_subject, carrier, hops_left, pad_used + 1,
                        next_actions);
      }
      if (!at_subject) {
        if (hops_left > 0 && is_read(e.request) &&
            e.request.object.value == carrier) {
          result |= solve(e.target, true, e.request.subject.value, hops_left, 0,
                          next_actions);
        }
      } else if (!is_read(e.request) && e.request.subject.value == carrier) {
        result |= solve(e.target, false, e.request.object.value, hops_left - 1,
                        0, next_actions);
      }
    }
  }
  memo_.emplace(key, result);
  return result;
}

std::uint64_t FlowAnalyzer::sinks(std::uint32_t state, ObjectId source) {
  return solve(state, false, source.value, bounds_.max_hops, 0,
               bounds_.max_actions ? *bounds_.max_actions : kUnbounded);
}

std::set<std::pair<ObjectId, ObjectId>> FlowAnalyzer::relation(
    std::uint32_t state) {
  std::set<std::pair<ObjectId, ObjectId>> out;
  const auto objects = graph_.policy().object_count();
  for (std::uint32_t o = 0; o < objects; ++o) {
    auto mask = sinks(state, ObjectId{o});
    while (mask) {
      const auto t = static_cast<std::uint32_t>(std::countr_zero(mask));
      mask &= mask - 1;
      out.emplace(ObjectId{o}, ObjectId{t});
    }
  }
  return out;
}

std::set<std::pair<ObjectId, ObjectId>> flow_relation(
    const Policy& policy, const State& start, const FlowBounds& bounds,
    const EngineOptions& options, std::size_t state_cap) {
  StateGraph graph(policy, options, state_cap);
  FlowAnalyzer analyzer(graph, bounds);
  return analyzer.relation(graph.intern(start));
}

ConfinementReport check_flow_confinement(FlowAnalyzer& analyzer,
                                         std::uint32_t start) {
  auto& graph = analyzer.graph();
  const auto& policy = graph.policy();
  const State start_state = graph.state(start);
  if (!check_star_prop(policy, start_state).passed()) {
    throw PremiseViolated(
        "flow confinement premise fails: the start state breaks the "
        "*-property");
  }
  ConfinementReport report;
  for (const auto& [o, t] : analyzer.relation(start)) {
    if (o == t) continue;
    ++report.pairs_with_flow;
    if (policy.is_sanitized(o) || policy.ds(o) == policy.ds(t)) continue;
    FlowQuery q{start_state, o, t, analyzer.bounds(), {}, {}};
    auto found = find_flow(policy, q, graph.options(), graph.state_cap());
    if (auto* w = std::get_if<FlowWitness>(&found)) {
      report.violations.push_back(std::move(*w));
    } else {
      throw std::logic_error("flow relation and witness search disagree");
    }
  }
  return report;
}

ConfinementReport check_flow_confinement(const Policy& policy,
                                         const State& start,
                                         const FlowBounds& bounds,
                                         const EngineOptions& options,
                                         std::size_t state_cap) {
  StateGraph graph(policy, options, state_cap);
  FlowAnalyzer analyzer(graph, bounds);
  return check_flow_confinement(analyzer, graph.intern(start));
}

namespace {

struct Taint {
  std::vector<std::uint64_t> subjects;
  std::vector<std::uint64_t> objects;

  void apply(const Request& req) {
    if (is_read(req)) {
      subjects[req.subject.value] |= objects[req.object.value];
    } else {
      objects[req.object.value] |= subjects[req.subject.value];
    }
  }

  void collect(std::set<std::pair<ObjectId, ObjectId>>& out) const {
    for (std::uint32_t t = 0; t < objects.size(); ++t) {
      auto mask = objects[t];
      while (mask) {
        const auto o = static_cast<std::uint32_t>(std::countr_zero(mask));
        mask &= mask - 1;
        out.emplace(ObjectId{o}, ObjectId{t});
      }
    }
  }
};

Taint initial_taint(const Policy& policy) {
  Taint t{std::vector<std::uint64_t>(policy.subject_count(), 0),
          std::vector<std::uint64_t>(policy.object_count(), 0)};
  for (std::uint32_t o = 0; o < policy.object_count(); ++o) t.objects[o] = bit(o);
  return t;
}

struct VectorHash {
  std::size_t operator()(const std::vector<std::uint64_t>& v) const noexcept {
    std::size_t h = v.size();
    for (auto w : v) {
      h ^= std::hash<std::uint64_t>()(w) + 0x9e3779b97f4a7c15ULL + (h << 6) +
           (h >> 2);
    }
    return h;
  }
};

}  // namespace

std::set<std::pair<ObjectId, ObjectId>> taint_flows(
    const Policy& policy, const State& start, std::size_t action_budget,
    const EngineOptions& options, std::size_t state_cap) {
  require_flow_size(policy);
  StateGraph graph(policy, options, state_cap);
  std::set<std::pair<ObjectId, ObjectId>> out;
  // Best remaining budget seen per (state, taint) configuration.
  std::unordered_map<std::vector<std::uint64_t>, std::size_t, VectorHash> best;

  std::function<void(std::uint32_t, const Taint&, std::size_t)> dfs =
      [&](std::uint32_t state, const Taint& taint, std::size_t budget) {
        std::vector<std::uint64_t> key{state};
        key.insert(key.end(), taint.subjects.begin(), taint.subjects.end());
        key.insert(key.end(), taint.objects.begin(), taint.objects.end());
        auto [it, inserted] = best.try_emplace(std::move(key), budget);
        if (!inserted) {
          if (it->second >= budget) return;
          it->second = budget;
        }
        if (best.size() > state_cap) {
          throw StateSpaceCapExceeded(state_cap, action_budget - budget);
        }
        taint.collect(out);
        if (budget == 0) return;
        const auto& edges = graph.edges(state);
        for (std::size_t i = 0; i < edges.size(); ++i) {
          const Edge e = graph.edges(state)[i];
          Taint next = taint;
          next.apply(e.request);
          dfs(e.target, next, budget - 1);
        }
      };
  dfs(graph.intern(start), initial_taint(policy), action_budget);
  return out;
}

std::set<std::pair<ObjectId, ObjectId>> run_flows(
    const Policy& policy, const State& start, const std::vector<Request>& run,
    const Strategy& strategy, const EngineOptions& options) {
  require_flow_size(policy);
  State cur = start;
  Taint taint = initial_taint(policy);
  for (std::size_t i = 0; i < run.size(); ++i) {
    auto result = step(policy, cur, run[i], strategy, options);
    auto* d = std::get_if<Decision>(&result);
    if (d == nullptr) {
      throw std::invalid_argument("run step " + std::to_string(i + 1) +
                                  " is denied: " + describe(policy, run[i]));
    }
    cur = d->after;
    taint.apply(run[i]);
  }
  std::set<std::pair<ObjectId, ObjectId>> out;
  taint.collect(out);
  return out;
}

std::string describe(const Policy& policy, const FlowWitness& witness) {
  std::ostringstream os;
  os << "flow " << policy.object_name(witness.source()) << " -> "
     << policy.object_name(witness.sink()) << " in " << witness.hops()
     << " hop(s)";
  if (!witness.subjects.empty()) {
    os << " via";
    for (auto s : witness.subjects) os << ' ' << policy.subject_name(s);
  }
  os << "\n  start " << format_state(policy, witness.start);
  for (std::size_t i = 0; i < witness.steps.size(); ++i) {
    const auto& st = witness.steps[i];
    os << "\n  " << i + 1 << ". " << describe(policy, st.request) << " ["
       << to_string(st.rule) << "]";
    if (st.marker.kind == Marker::Kind::kRead) {
      os << " R" << st.marker.hop + 1;
    } else if (st.marker.kind == Marker::Kind::kWrite) {
      os << " W" << st.marker.hop + 1;
    }
  }
  return os.str();
}

}  // namespace cwall
