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

#include "cwall/session.hh"

#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "cwall/report.hh"
#include "cwall/text_format.hh"

namespace cwall {

namespace {

std::vector<std::string> words(std::string_view line) {
  std::istringstream is{std::string(line)};
  std::vector<std::string> out;
  for (std::string w; is >> w;) out.push_back(w);
  return out;
}

constexpr const char* kHelp =
    "commands:\n"
    "  read|write|rw <subject> <object> [!consent] [!rule <name>]\n"
    "  state          show N and W\n"
    "  check          run the invariant checks on the current state\n"
    "  undo           return to the previous state\n"
    "  flows <o> <o'> search for an information flow from o to o'\n"
    "  quit\n";

}  // namespace

Session::Session(const Policy& policy, SessionOptions options)
    : policy_(policy),
      options_(options),
      state_(State::initial(policy)) {}

void Session::run(std::istream& in, std::ostream& out, bool prompt) {
  std::string line;
  while (true) {
    if (prompt) out << "cwall> " << std::flush;
    if (!std::getline(in, line)) break;
    if (!handle(line, in, out)) break;
  }
}

bool Session::handle(std::string_view line, std::istream& in,
                     std::ostream& out) {
  const auto hash = line.find('#');
  if (hash != std::string_view::npos) line = line.substr(0, hash);
  const auto w = words(line);
  if (w.empty()) return true;
  try {
    if (w[0] == "quit" || w[0] == "exit") return false;
    if (w[0] == "help") {
      out << kHelp;
    } else if (w[0] == "state") {
      out << format_state(policy_, state_) << '\n';
    } else if (w[0] == "check") {
      for (const auto& r : check_state_invariants(policy_, state_, sds_)) {
        out << describe(policy_, r) << '\n';
      }
    } else if (w[0] == "undo") {
      if (history_.empty()) {
        out << "nothing to undo\n";
      } else {
        std::tie(state_, sds_) = history_.back();
        history_.pop_back();
        out << format_state(policy_, state_) << '\n';
      }
    } else if (w[0] == "flows") {
      if (w.size() != 3) {
        out << "error: expected 'flows <object> <object>'\n";
        return true;
      }
      auto from = policy_.find_object(w[1]);
      auto to = policy_.find_object(w[2]);
      if (!from || !to) {
        out << "error: unknown object '" << (from ? w[2] : w[1]) << "'\n";
        return true;
      }
      FlowQuery q{state_, *from, *to, options_.flow_bounds, {}, {}};
      auto found = find_flow(policy_, q, options_.engine);
      if (auto* wit = std::get_if<FlowWitness>(&found)) {
        out << describe(policy_, *wit) << '\n';
      } else {
        out << "no flow within " << q.bounds.max_hops << " hop(s) and padding "
            << q.bounds.max_padding << '\n';
      }
    } else {
      act(line, in, out);
    }
  } catch (const Error& e) {
    out << "error: " << e.what() << '\n';
  }
  return true;
}

void Session::act(std::string_view line, std::istream& in, std::ostream& out) {
  auto entry = parse_trace_line(policy_, line);
  Request req = entry.request;
  if (options_.consent) req.consent_to_revoke = true;
  Strategy strategy = PreferNonRevoking{};
  if (entry.rule) strategy = ExplicitRule{*entry.rule};
  auto result = step(policy_, state_, req, strategy, options_.engine);

  if (auto* denied = std::get_if<Denied>(&result)) {
    // Only the revoking read is left: warn and ask before revoking.
    Request consenting = req;
    consenting.consent_to_revoke = true;
    if (!req.consent_to_revoke && req.mode == Mode::kRead &&
        (!entry.rule || *entry.rule == RuleId::kXR) &&
        rule_enabled(policy_, state_, consenting, RuleId::kXR,
                     options_.engine)) {
      const auto revoked =
          revocation_set(policy_, state_, req.subject, req.object);
      out << "warning: " << describe(policy_, req)
          << " is only permitted by revoking write access:";
      for (const auto& a : revoked) out << ' ' << format_access(policy_, a);
      out << "\nproceed? [y/N] " << std::flush;
      std::string answer;
      if (std::getline(in, answer) && !answer.empty() &&
          (answer[0] == 'y' || answer[0] == 'Y')) {
        commit(apply_rule(policy_, state_, consenting, RuleId::kXR,
                          options_.engine),
               out);
      } else {
        out << "not applied\n";
      }
      return;
    }
    out << "denied: " << describe(policy_, req) << '\n';
    for (const auto& c : denied->candidates) {
      out << "  " << to_string(c.rule) << ':';
      for (const auto& f : c.failures) out << ' ' << describe(policy_, f);
      out << '\n';
    }
    return;
  }
  commit(std::get<Decision>(result), out);
}

void Session::commit(const Decision& d, std::ostream& out) {
  history_.emplace_back(state_, sds_);
  for (const auto& a : d.after.read.minus(d.before.read)) {
    sds_ = update_sds(policy_, std::move(sds_), a.subject, a.object);
  }
  state_ = d.after;
  out << "permitted by " << to_string(d.rule);
  if (!d.revoked.empty()) {
    out << "; revoked";
    for (const auto& a : d.revoked) out << ' ' << format_access(policy_, a);
  }
  out << '\n' << format_state(policy_, state_) << '\n';
}

}  // namespace cwall
