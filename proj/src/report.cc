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

#include "cwall/report.hh"

#include <algorithm>
#include <sstream>

#include "json.hpp"

namespace cwall {

namespace {

using nlohmann::json;

std::vector<Access> sorted(std::vector<Access> v) {
  std::sort(v.begin(), v.end());
  return v;
}

std::string access_list(const Policy& policy, const std::vector<Access>& v) {
  if (v.empty()) return "none";
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ",";
    out += format_access(policy, v[i]);
  }
  return out;
}

json access_json(const Policy& policy, const std::vector<Access>& v) {
  json out = json::array();
  for (const auto& a : v) {
    out.push_back({policy.subject_name(a.subject), policy.object_name(a.object)});
  }
  return out;
}

json state_json(const Policy& policy, const State& st) {
  return {{"N", access_json(policy, st.read.entries())},
          {"W", access_json(policy, st.write.entries())},
          {"text", format_state(policy, st)}};
}

json request_json(const Policy& policy, const Request& req) {
  return {{"mode", to_string(req.mode)},
          {"subject", policy.subject_name(req.subject)},
          {"object", policy.object_name(req.object)},
          {"consent", req.consent_to_revoke}};
}

const char* kind_name(TraceEntry::Kind kind) {
  switch (kind) {
    case TraceEntry::Kind::kAction:
      return "action";
    case TraceEntry::Kind::kStart:
      return "start";
    case TraceEntry::Kind::kExpectState:
      return "expect-state";
    case TraceEntry::Kind::kExpectViolation:
      return "expect-violation";
  }
  return "?";
}

Sds advance(const Policy& policy, Sds sds, const State& before,
            const State& after) {
  for (const auto& a : after.read.minus(before.read)) {
    sds = update_sds(policy, std::move(sds), a.subject, a.object);
  }
  return sds;
}

}  // namespace

std::size_t RunReport::mismatch_count() const {
  std::size_t n = 0;
  for (const auto& s : steps) n += s.mismatches.size();
  return n;
}

bool RunReport::invariants_hold() const {
  return std::all_of(invariants.begin(), invariants.end(),
                     [](const ViolationReport& r) { return r.passed(); });
}

std::vector<ViolationReport> check_state_invariants(const Policy& policy,
                                                    const State& state,
                                                    const Sds& sds) {
  std::vector<ViolationReport> out;
  out.push_back(check_simp_sec(policy, state.read));
  out.push_back(check_star_prop(policy, state));
  if (out.front().passed()) {
    out.push_back(check_coi_exclusivity(policy, state.read));
  }
  out.push_back(check_min_subjects(policy, state.read));
  out.push_back(check_sds_alignment(policy, sds, state.read));
  return out;
}

RunReport replay(const Policy& policy, const std::vector<TraceEntry>& trace,
                 const ReplayOptions& options) {
  RunReport report;
  report.start = State::initial(policy);
  State cur = report.start;
  Sds sds;
  bool acted = false;
  for (const auto& entry : trace) {
    StepRecord rec;
    rec.entry = entry;
    switch (entry.kind) {
      case TraceEntry::Kind::kStart:
        if (acted) {
          throw ParseError(entry.line, "'start' must precede every action");
        }
        cur = entry.state;
        report.start = cur;
        sds = sds_from_reads(policy, cur.read);
        break;
      case TraceEntry::Kind::kExpectState:
        if (cur != entry.state) {
          rec.mismatches.push_back("expected state " +
                                   format_state(policy, entry.state) +
                                   ", got " + format_state(policy, cur));
        }
        break;
      case TraceEntry::Kind::kExpectViolation: {
        bool violated = false;
        switch (entry.invariant) {
          case InvariantName::kSimpSec:
            violated = !check_simp_sec(policy, cur.read).passed();
            break;
          case InvariantName::kStarProp:
            violated = !check_star_prop(policy, cur).passed();
            break;
          case InvariantName::kMinSub:
            violated = !check_min_subjects(policy, cur.read).passed();
            break;
          case InvariantName::kSdsAlignment:
            violated = !check_sds_alignment(policy, sds, cur.read).passed();
            break;
        }
        if (!violated) {
          rec.mismatches.push_back(std::string("expected ") +
                                   to_string(entry.invariant) +
                                   " to be violated");
        }
        break;
      }
      case TraceEntry::Kind::kAction: {
        acted = true;
        Request req = entry.request;
        if (options.consent) req.consent_to_revoke = true;
        Strategy strategy = PreferNonRevoking{};
        if (options.explicit_rules) {
          if (!entry.rule) {
            throw ParseError(entry.line,
                             "explicit strategy needs '!rule <name>'");
          }
          strategy = ExplicitRule{*entry.rule};
        }
        auto result = step(policy, cur, req, strategy, options.engine);
        if (auto* d = std::get_if<Decision>(&result)) {
          sds = advance(policy, std::move(sds), d->before, d->after);
          cur = d->after;
          if (entry.expect_deny) {
            rec.mismatches.push_back(std::string("expected denial, rule ") +
                                     to_string(d->rule) + " fired");
          }
          if (entry.expect_revokes &&
              sorted(*entry.expect_revokes) != sorted(d->revoked)) {
            rec.mismatches.push_back(
                "expected revocations " +
                access_list(policy, sorted(*entry.expect_revokes)) + ", got " +
                access_list(policy, sorted(d->revoked)));
          }
          if (entry.rule && !options.explicit_rules && entry.rule != d->rule) {
            rec.mismatches.push_back(std::string("expected rule ") +
                                     to_string(*entry.rule) + ", got " +
                                     to_string(d->rule));
          }
          rec.decision = std::move(*d);
        } else {
          auto& denied = std::get<Denied>(result);
          if (!entry.expect_deny && (entry.expect_revokes || entry.rule)) {
            rec.mismatches.push_back("request denied");
          }
          rec.denied = std::move(denied);
        }
        break;
      }
    }
    rec.after = cur;
    report.steps.push_back(std::move(rec));
  }
  report.final_state = cur;
  report.final_sds = sds;
  report.invariants = check_state_invariants(policy, cur, sds);
  return report;
}

std::string render_text(const Policy& policy, const RunReport& report) {
  std::ostringstream os;
  os << "start: " << format_state(policy, report.start) << '\n';
  for (const auto& rec : report.steps) {
    const auto& e = rec.entry;
    os << "line " << e.line << ": ";
    switch (e.kind) {
      case TraceEntry::Kind::kStart:
        os << "start " << format_state(policy, e.state);
        break;
      case TraceEntry::Kind::kExpectState:
        os << "expect-state";
        break;
      case TraceEntry::Kind::kExpectViolation:
        os << "expect-violation " << to_string(e.invariant);
        break;
      case TraceEntry::Kind::kAction:
        os << describe(policy, e.request);
        if (rec.decision) {
          os << " -> " << to_string(rec.decision->rule);
          if (!rec.decision->revoked.empty()) {
            os << ", revoked " << access_list(policy, rec.decision->revoked);
          }
          os << "\n    " << format_state(policy, rec.after);
        } else if (rec.denied) {
          os << " -> denied";
          for (const auto& c : rec.denied->candidates) {
            os << "\n    " << to_string(c.rule) << ":";
            for (const auto& f : c.failures) os << ' ' << describe(policy, f);
          }
        }
        break;
    }
    for (const auto& m : rec.mismatches) os << "\n    MISMATCH: " << m;
    os << '\n';
  }
  os << "final: " << format_state(policy, report.final_state) << '\n';
  for (const auto& r : report.invariants) os << describe(policy, r) << '\n';
  os << (report.expectations_met() ? "expectations met"
                                   : std::to_string(report.mismatch_count()) +
                                         " expectation(s) not met")
     << '\n';
  return os.str();
}

std::string render_machine(const Policy& policy, const RunReport& report) {
  json steps = json::array();
  for (const auto& rec : report.steps) {
    json j = {{"line", rec.entry.line}, {"kind", kind_name(rec.entry.kind)}};
    if (rec.entry.kind == TraceEntry::Kind::kAction) {
      j["request"] = request_json(policy, rec.entry.request);
      if (rec.decision) {
        j["verdict"] = "permitted";
        j["rule"] = to_string(rec.decision->rule);
        j["revoked"] = access_json(policy, rec.decision->revoked);
      } else if (rec.denied) {
        j["verdict"] = "denied";
        json reasons = json::array();
        for (const auto& c : rec.denied->candidates) {
          json fails = json::array();
          for (const auto& f : c.failures) {
            fails.push_back({{"premise", f.premise},
                             {"witnesses", access_json(policy, f.witnesses)}});
          }
          reasons.push_back({{"rule", to_string(c.rule)}, {"failures", fails}});
        }
        j["reasons"] = reasons;
      }
    }
    j["mismatches"] = rec.mismatches;
    j["state"] = format_state(policy, rec.after);
    steps.push_back(std::move(j));
  }
  json invariants = json::object();
  for (const auto& r : report.invariants) {
    json w = json::array();
    for (const auto& wit : r.witnesses) w.push_back(describe(policy, wit));
    invariants[to_string(r.kind)] = {{"passed", r.passed()}, {"witnesses", w}};
  }
  json doc = {{"start", state_json(policy, report.start)},
              {"steps", steps},
              {"final", state_json(policy, report.final_state)},
              {"invariants", invariants},
              {"mismatches", report.mismatch_count()},
              {"expectations_met", report.expectations_met()}};
  return doc.dump(2) + "\n";
}

}  // namespace cwall
