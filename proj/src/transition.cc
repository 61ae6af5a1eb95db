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

#include "cwall/transition.hh"

#include <bit>

namespace cwall {

namespace {

void check_pair(const Policy& policy, SubjectId s, ObjectId o) {
  if (!policy.contains(s)) throw UnknownSubject("#" + std::to_string(s.value));
  if (!policy.contains(o)) throw UnknownObject("#" + std::to_string(o.value));
}

// Reads of s that break simple security for a request on o.
std::vector<Access> simple_security_conflicts(const Policy& policy, SubjectId s,
                                              ObjectId o,
                                              const AccessMatrix& read) {
  std::vector<Access> out;
  for (std::uint32_t i = 0; i < read.objects(); ++i) {
    ObjectId other{i};
    if (!read.contains(s, other)) continue;
    if (policy.ds(other) != policy.ds(o) && policy.coi(other) == policy.coi(o)) {
      out.push_back({s, other});
    }
  }
  return out;
}

std::vector<Access> star_property_conflicts(const Policy& policy, SubjectId s,
                                            ObjectId o,
                                            const AccessMatrix& read) {
  std::vector<Access> out;
  for (std::uint32_t i = 0; i < read.objects(); ++i) {
    ObjectId other{i};
    if (!read.contains(s, other)) continue;
    if (policy.ds(other) != policy.ds(o) && !policy.is_sanitized(other)) {
      out.push_back({s, other});
    }
  }
  return out;
}

std::vector<Access> unsanitized_reads(const Policy& policy, SubjectId s,
                                      const AccessMatrix& read) {
  std::vector<Access> out;
  for (std::uint32_t i = 0; i < read.objects(); ++i) {
    ObjectId other{i};
    if (read.contains(s, other) && !policy.is_sanitized(other)) {
      out.push_back({s, other});
    }
  }
  return out;
}

bool simple_security_fast(const Policy& policy, SubjectId s, ObjectId o,
                          const AccessMatrix& read) {
  for (std::uint32_t i = 0; i < read.objects(); ++i) {
    ObjectId other{i};
    if (read.contains(s, other) && policy.ds(other) != policy.ds(o) &&
        policy.coi(other) == policy.coi(o)) {
      return false;
    }
  }
  return true;
}

bool star_property_fast(const Policy& policy, SubjectId s, ObjectId o,
                        const AccessMatrix& read) {
  for (std::uint32_t i = 0; i < read.objects(); ++i) {
    ObjectId other{i};
    if (read.contains(s, other) && policy.ds(other) != policy.ds(o) &&
        !policy.is_sanitized(other)) {
      return false;
    }
  }
  return true;
}

bool writes_outside_dataset(const Policy& policy, SubjectId s, ObjectId o,
                            const AccessMatrix& write) {
  for (std::uint32_t i = 0; i < write.objects(); ++i) {
    ObjectId other{i};
    if (write.contains(s, other) && policy.ds(other) != policy.ds(o)) {
      return true;
    }
  }
  return false;
}

bool only_sanitized_reads(const Policy& policy, SubjectId s,
                          const AccessMatrix& read) {
  for (std::uint32_t i = 0; i < read.objects(); ++i) {
    ObjectId other{i};
    if (read.contains(s, other) && !policy.is_sanitized(other)) return false;
  }
  return true;
}

// W minus {(s,o') : ds(o') != ds(o)}.
void revoke_outside_dataset(const Policy& policy, SubjectId s, ObjectId o,
                            AccessMatrix& write) {
  for (std::uint32_t i = 0; i < write.objects(); ++i) {
    ObjectId other{i};
    if (policy.ds(other) != policy.ds(o)) write.erase(s, other);
  }
}

}  // namespace

const char* to_string(Mode mode) {
  switch (mode) {
    case Mode::kRead:
      return "read";
    case Mode::kWriteOnly:
      return "write";
    case Mode::kReadWrite:
      return "rw";
  }
  return "?";
}

const char* to_string(RuleId rule) {
  switch (rule) {
    case RuleId::kMR:
      return "mR";
    case RuleId::kMW:
      return "mW";
    case RuleId::kXRBot:
      return "xRbot";
    case RuleId::kXRStar:
      return "xRstar";
    case RuleId::kXR:
      return "xR";
    case RuleId::kXW:
      return "xW";
    case RuleId::kXRWBot:
      return "xRWbot";
    case RuleId::kXRW:
      return "xRW";
    case RuleId::kWkRead:
      return "wkRead";
  }
  return "?";
}

std::optional<RuleId> parse_rule(std::string_view name) {
  for (auto r : kAllRules) {
    if (name == to_string(r)) return r;
  }
  if (name == "xR⊥") return RuleId::kXRBot;
  if (name == "xR*") return RuleId::kXRStar;
  if (name == "xRW⊥") return RuleId::kXRWBot;
  return std::nullopt;
}

Mode rule_mode(RuleId rule) {
  switch (rule) {
    case RuleId::kMW:
    case RuleId::kXW:
      return Mode::kWriteOnly;
    case RuleId::kXRW:
    case RuleId::kXRWBot:
      return Mode::kReadWrite;
    default:
      return Mode::kRead;
  }
}

std::size_t RuleSet::size() const { return std::popcount(bits_); }

std::vector<RuleId> RuleSet::to_vector() const {
  std::vector<RuleId> out;
  for (auto r : kAllRules) {
    if (contains(r)) out.push_back(r);
  }
  return out;
}

bool simple_security_holds(const Policy& policy, SubjectId s, ObjectId o,
                           const AccessMatrix& read) {
  check_pair(policy, s, o);
  return simple_security_fast(policy, s, o, read);
}

bool star_property_holds(const Policy& policy, SubjectId s, ObjectId o,
                         const AccessMatrix& read) {
  check_pair(policy, s, o);
  return star_property_fast(policy, s, o, read);
}

std::vector<Access> revocation_set(const Policy& policy, const State& state,
                                   SubjectId s, ObjectId o) {
  check_pair(policy, s, o);
  std::vector<Access> out;
  for (std::uint32_t i = 0; i < state.write.objects(); ++i) {
    ObjectId other{i};
    if (state.write.contains(s, other) && policy.ds(other) != policy.ds(o)) {
      out.push_back({s, other});
    }
  }
  return out;
}

void check_request(const Policy& policy, const Request& req) {
  check_pair(policy, req.subject, req.object);
}

bool rule_enabled(const Policy& policy, const State& state, const Request& req,
                  RuleId rule, const EngineOptions& options) {
  if (rule_mode(rule) != req.mode) return false;
  const auto s = req.subject;
  const auto o = req.object;
  const bool sanitized = policy.is_sanitized(o);
  switch (rule) {
    case RuleId::kMR:
      return state.read.contains(s, o);
    case RuleId::kMW:
      return state.write.contains(s, o);
    case RuleId::kXRBot:
      return sanitized;
    case RuleId::kXRStar:
      return simple_security_fast(policy, s, o, state.read) &&
             !writes_outside_dataset(policy, s, o, state.write);
    case RuleId::kXR:
      return !sanitized && simple_security_fast(policy, s, o, state.read) &&
             (req.consent_to_revoke ||
              !writes_outside_dataset(policy, s, o, state.write));
    case RuleId::kXW:
      return star_property_fast(policy, s, o, state.read);
    case RuleId::kXRW:
      return !sanitized && star_property_fast(policy, s, o, state.read);
    case RuleId::kXRWBot:
      return sanitized && only_sanitized_reads(policy, s, state.read);
    case RuleId::kWkRead:
      return options.allow_wkread && !state.read.contains(s, o) &&
             simple_security_fast(policy, s, o, state.read);
  }
  return false;
}

RuleEvaluation evaluate_rule(const Policy& policy, const State& state,
                             const Request& req, RuleId rule,
                             const EngineOptions& options) {
  check_request(policy, req);
  RuleEvaluation ev{rule, false, {}};
  auto fail = [&](std::string premise, std::vector<Access> witnesses = {}) {
    ev.failures.push_back({std::move(premise), std::move(witnesses)});
  };
  const auto s = req.subject;
  const auto o = req.object;
  const bool sanitized = policy.is_sanitized(o);

  if (rule_mode(rule) != req.mode) {
    fail("mode");
    return ev;
  }
  switch (rule) {
    case RuleId::kMR:
      if (!state.read.contains(s, o)) fail("read-entry");
      break;
    case RuleId::kMW:
      if (!state.write.contains(s, o)) fail("write-entry");
      break;
    case RuleId::kXRBot:
      if (!sanitized) fail("sanitized-target");
      break;
    case RuleId::kXRStar: {
      auto ss = simple_security_conflicts(policy, s, o, state.read);
      if (!ss.empty()) fail("simple-security", ss);
      auto ws = revocation_set(policy, state, s, o);
      if (!ws.empty()) fail("writes-in-dataset", ws);
      break;
    }
    case RuleId::kXR: {
      if (sanitized) fail("unsanitized-target");
      auto ss = simple_security_conflicts(policy, s, o, state.read);
      if (!ss.empty()) fail("simple-security", ss);
      auto revoked = revocation_set(policy, state, s, o);
      if (!req.consent_to_revoke && !revoked.empty()) {
        fail("consent-to-revoke", revoked);
      }
      break;
    }
    case RuleId::kXW: {
      auto sp = star_property_conflicts(policy, s, o, state.read);
      if (!sp.empty()) fail("star-property", sp);
      break;
    }
    case RuleId::kXRW: {
      if (sanitized) fail("unsanitized-target");
      auto sp = star_property_conflicts(policy, s, o, state.read);
      if (!sp.empty()) fail("star-property", sp);
      break;
    }
    case RuleId::kXRWBot: {
      if (!sanitized) fail("sanitized-target");
      auto reads = unsanitized_reads(policy, s, state.read);
      if (!reads.empty()) fail("sanitized-reads-only", reads);
      break;
    }
    case RuleId::kWkRead: {
      if (!options.allow_wkread) fail("unsound-rules-enabled");
      if (state.read.contains(s, o)) fail("fresh-read", {{s, o}});
      auto ss = simple_security_conflicts(policy, s, o, state.read);
      if (!ss.empty()) fail("simple-security", ss);
      break;
    }
  }
  ev.enabled = ev.failures.empty();
  return ev;
}

RuleSet enabled_rules(const Policy& policy, const State& state,
                      const Request& req, const EngineOptions& options) {
  check_request(policy, req);
  RuleSet out;
  for (auto r : rule_priority(req.mode)) {
    if (rule_enabled(policy, state, req, r, options)) out.insert(r);
  }
  return out;
}

State rule_effect(const Policy& policy, const State& state, const Request& req,
                  RuleId rule) {
  State next = state;
  const auto s = req.subject;
  const auto o = req.object;
  switch (rule) {
    case RuleId::kMR:
    case RuleId::kMW:
      break;
    case RuleId::kXRBot:
    case RuleId::kXRStar:
    case RuleId::kWkRead:
      next.read.insert(s, o);
      break;
    case RuleId::kXR:
      next.read.insert(s, o);
      revoke_outside_dataset(policy, s, o, next.write);
      break;
    case RuleId::kXW:
      next.write.insert(s, o);
      break;
    case RuleId::kXRW:
      next.read.insert(s, o);
      revoke_outside_dataset(policy, s, o, next.write);
      next.write.insert(s, o);
      break;
    case RuleId::kXRWBot:
      next.read.insert(s, o);
      next.write.insert(s, o);
      break;
  }
  return next;
}

RuleNotEnabled::RuleNotEnabled(RuleId rule, std::vector<PremiseFailure> failures)
    : Error(std::string("rule ") + to_string(rule) + " is not enabled"),
      rule_(rule),
      failures_(std::move(failures)) {}

Decision apply_rule(const Policy& policy, const State& state,
                    const Request& req, RuleId rule,
                    const EngineOptions& options) {
  check_request(policy, req);
  if (!rule_enabled(policy, state, req, rule, options)) {
    throw RuleNotEnabled(
        rule, evaluate_rule(policy, state, req, rule, options).failures);
  }
  Decision d{rule, req, state, rule_effect(policy, state, req, rule), {}, {}};
  d.revoked = d.before.write.minus(d.after.write);
  if (d.after != d.before) d.granted = Access{req.subject, req.object};
  return d;
}

std::vector<RuleId> rule_priority(Mode mode) {
  switch (mode) {
    case Mode::kRead:
      return {RuleId::kMR, RuleId::kXRBot, RuleId::kXRStar, RuleId::kXR,
              RuleId::kWkRead};
    case Mode::kWriteOnly:
      return {RuleId::kMW, RuleId::kXW};
    case Mode::kReadWrite:
      return {RuleId::kXRWBot, RuleId::kXRW};
  }
  return {};
}

StepResult step(const Policy& policy, const State& state, const Request& req,
                const Strategy& strategy, const EngineOptions& options) {
  check_request(policy, req);
  if (const auto* pick = std::get_if<ExplicitRule>(&strategy)) {
    auto ev = evaluate_rule(policy, state, req, pick->rule, options);
    if (!ev.enabled) return Denied{req, {std::move(ev)}};
    return apply_rule(policy, state, req, pick->rule, options);
  }
  Denied denied{req, {}};
  for (auto r : rule_priority(req.mode)) {
    if (r == RuleId::kWkRead && !options.allow_wkread) continue;
    if (rule_enabled(policy, state, req, r, options)) {
      return apply_rule(policy, state, req, r, options);
    }
    denied.candidates.push_back(evaluate_rule(policy, state, req, r, options));
  }
  return denied;
}

std::string describe(const Policy& policy, const Request& req) {
  return std::string(to_string(req.mode)) + " " +
         policy.subject_name(req.subject) + " " +
         policy.object_name(req.object);
}

std::string describe(const Policy& policy, const PremiseFailure& failure) {
  std::string out = failure.premise;
  if (!failure.witnesses.empty()) {
    out += " [";
    for (std::size_t i = 0; i < failure.witnesses.size(); ++i) {
      if (i) out += ",";
      out += format_access(policy, failure.witnesses[i]);
    }
    out += "]";
  }
  return out;
}

}  // namespace cwall
