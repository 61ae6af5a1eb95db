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

#ifndef CWALL_REPORT_HH_
#define CWALL_REPORT_HH_

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "cwall/invariants.hh"
#include "cwall/policy.hh"
#include "cwall/state.hh"
#include "cwall/text_format.hh"
#include "cwall/transition.hh"

namespace cwall {

struct ReplayOptions {
  /// With an explicit strategy every action line must name its rule.
  bool explicit_rules = false;
  /// Consent to revocation for every request.
  bool consent = false;
  EngineOptions engine;
};

struct StepRecord {
  TraceEntry entry;
  std::optional<Decision> decision;
  std::optional<Denied> denied;
  /// Expectations of this line that were not met.
  std::vector<std::string> mismatches;
  State after;
};

struct RunReport {
  State start;
  std::vector<StepRecord> steps;
  State final_state;
  Sds final_sds;
  std::vector<ViolationReport> invariants;

  std::size_t mismatch_count() const;
  bool expectations_met() const { return mismatch_count() == 0; }
  bool invariants_hold() const;
};

/**
 * The invariant reports of a state: simple security, *-property, CoI
 * exclusivity (only when simple security holds), the subject bound and
 * sds alignment.
 */
std::vector<ViolationReport> check_state_invariants(const Policy& policy,
                                                    const State& state,
                                                    const Sds& sds);

/// Steps the explicit engine through a trace, checking expectations.
RunReport replay(const Policy& policy, const std::vector<TraceEntry>& trace,
                 const ReplayOptions& options = {});

std::string render_text(const Policy& policy, const RunReport& report);

/// Deterministic JSON document (sorted keys, two-space indent).
std::string render_machine(const Policy& policy, const RunReport& report);

}  // namespace cwall

#endif  // CWALL_REPORT_HH_
