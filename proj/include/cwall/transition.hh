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

#ifndef CWALL_TRANSITION_HH_
#define CWALL_TRANSITION_HH_

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "cwall/policy.hh"
#include "cwall/state.hh"

namespace cwall {

/**
 * What a subject asks for. Both write flavours carry the same w(s,o) action
 * label in the transition system; the mode records which of the two write
 * interpretations the caller intends.
 */
enum class Mode : std::uint8_t { kRead, kWriteOnly, kReadWrite };

const char* to_string(Mode mode);

struct Request {
  SubjectId subject;
  ObjectId object;
  Mode mode = Mode::kRead;
  bool consent_to_revoke = false;

  bool operator==(const Request&) const = default;
};

/// Operational rules of the explicit model, plus the unsound wkRead.
enum class RuleId : std::uint8_t {
  kMR,
  kMW,
  kXRBot,
  kXRStar,
  kXR,
  kXW,
  kXRWBot,
  kXRW,
  kWkRead,
};

inline constexpr std::array<RuleId, 9> kAllRules = {
    RuleId::kMR,  RuleId::kMW,     RuleId::kXRBot, RuleId::kXRStar, RuleId::kXR,
    RuleId::kXW,  RuleId::kXRWBot, RuleId::kXRW,   RuleId::kWkRead};

inline constexpr std::array<RuleId, 8> kSoundRules = {
    RuleId::kMR, RuleId::kMW,     RuleId::kXRBot, RuleId::kXRStar,
    RuleId::kXR, RuleId::kXW, RuleId::kXRWBot, RuleId::kXRW};

/// ASCII rule names: mR mW xRbot xRstar xR xW xRWbot xRW wkRead.
const char* to_string(RuleId rule);

/// Accepts the ASCII names and the spellings xR⊥, xR*, xRW⊥.
std::optional<RuleId> parse_rule(std::string_view name);

/// Request mode a rule responds to.
Mode rule_mode(RuleId rule);

/// Small set of rules.
class RuleSet {
 public:
  constexpr RuleSet() = default;
  constexpr RuleSet(std::initializer_list<RuleId> rules) {
    for (auto r : rules) insert(r);
  }

  constexpr void insert(RuleId r) { bits_ |= bit(r); }
  constexpr void erase(RuleId r) { bits_ &= ~bit(r); }
  constexpr bool contains(RuleId r) const { return bits_ & bit(r); }
  constexpr bool empty() const { return bits_ == 0; }
  std::size_t size() const;

  std::vector<RuleId> to_vector() const;

  constexpr bool operator==(const RuleSet&) const = default;

 private:
  static constexpr std::uint16_t bit(RuleId r) {
    return static_cast<std::uint16_t>(1U << static_cast<unsigned>(r));
  }

  std::uint16_t bits_ = 0;
};

struct EngineOptions {
  /// Enables the wkRead rule, which does not preserve the *-property.
  bool allow_wkread = false;
};

/// Simple security: every other read of s is in ds(o) or outside coi(o).
bool simple_security_holds(const Policy& policy, SubjectId s, ObjectId o,
                           const AccessMatrix& read);

/// *-property: every read of s is in ds(o) or sanitized.
bool star_property_holds(const Policy& policy, SubjectId s, ObjectId o,
                         const AccessMatrix& read);

/// Write entries of req.subject that xR would revoke for this request.
std::vector<Access> revocation_set(const Policy& policy, const State& state,
                                   SubjectId s, ObjectId o);

/// One failed premise of a candidate rule, with the entries that broke it.
struct PremiseFailure {
  std::string premise;
  std::vector<Access> witnesses;
};

struct RuleEvaluation {
  RuleId rule;
  bool enabled = false;
  std::vector<PremiseFailure> failures;
};

/**
 * Evaluates a rule's premise against a request, listing every failed
 * premise. A rule whose mode does not match the request fails "mode".
 */
RuleEvaluation evaluate_rule(const Policy& policy, const State& state,
                             const Request& req, RuleId rule,
                             const EngineOptions& options = {});

/// Fast premise check; same verdict as evaluate_rule(...).enabled.
bool rule_enabled(const Policy& policy, const State& state, const Request& req,
                  RuleId rule, const EngineOptions& options = {});

/// Rules enabled for the request (empty set: request denied).
RuleSet enabled_rules(const Policy& policy, const State& state,
                      const Request& req, const EngineOptions& options = {});

/// After-state of a rule, without checking its premise.
State rule_effect(const Policy& policy, const State& state, const Request& req,
                  RuleId rule);

/// Audit record of one transition.
struct Decision {
  RuleId rule;
  Request request;
  State before;
  State after;
  std::vector<Access> revoked;
  std::optional<Access> granted;
};

class RuleNotEnabled : public Error {
 public:
  RuleNotEnabled(RuleId rule, std::vector<PremiseFailure> failures);

  RuleId rule() const { return rule_; }
  const std::vector<PremiseFailure>& failures() const { return failures_; }

 private:
  RuleId rule_;
  std::vector<PremiseFailure> failures_;
};

/// Applies an enabled rule; throws RuleNotEnabled otherwise.
Decision apply_rule(const Policy& policy, const State& state,
                    const Request& req, RuleId rule,
                    const EngineOptions& options = {});

/// Verdict for a denied request: every candidate rule with its failures.
struct Denied {
  Request request;
  std::vector<RuleEvaluation> candidates;
};

struct PreferNonRevoking {};
struct ExplicitRule {
  RuleId rule;
};
using Strategy = std::variant<PreferNonRevoking, ExplicitRule>;

using StepResult = std::variant<Decision, Denied>;

/// Candidate rules for a mode, highest priority first.
std::vector<RuleId> rule_priority(Mode mode);

/**
 * Deterministic step. PreferNonRevoking picks the first enabled rule in
 * rule_priority() order; ExplicitRule applies the named rule or denies.
 */
StepResult step(const Policy& policy, const State& state, const Request& req,
                const Strategy& strategy = PreferNonRevoking{},
                const EngineOptions& options = {});

/// Checks that the request names entities of the policy.
void check_request(const Policy& policy, const Request& req);

std::string describe(const Policy& policy, const Request& req);
std::string describe(const Policy& policy, const PremiseFailure& failure);

}  // namespace cwall

#endif  // CWALL_TRANSITION_HH_
