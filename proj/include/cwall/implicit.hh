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

#ifndef CWALL_IMPLICIT_HH_
#define CWALL_IMPLICIT_HH_

#include <cstddef>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "cwall/limits.hh"
#include "cwall/policy.hh"
#include "cwall/state.hh"
#include "cwall/transition.hh"

namespace cwall {

/// State of the implicit model: access is recorded only as reads.
struct ImplicitState {
  AccessMatrix read;

  static ImplicitState initial(const Policy& policy);

  bool operator==(const ImplicitState&) const = default;
};

enum class ImplicitRule : std::uint8_t { kIR, kIW, kIRW };

const char* to_string(ImplicitRule rule);

/// The only implicit rule answering a request of this mode.
ImplicitRule implicit_rule_for(Mode mode);

struct ImplicitDenied {
  Request request;
  ImplicitRule rule;
  PremiseFailure failure;
};

using ImplicitResult = std::variant<ImplicitState, ImplicitDenied>;

ImplicitResult implicit_step(const Policy& policy, const ImplicitState& state,
                             const Request& req);

/// One request of a bisimulation trace, with the explicit rule that fired.
struct BisimStep {
  Request request;
  RuleId rule;
};

struct BisimCounterexample {
  /// Steps from the initial pair to the diverging pair.
  std::vector<BisimStep> trace;
  /// The request on which the two sides disagree.
  Request request;
  State explicit_state;
  ImplicitState implicit_state;
  std::string reason;
};

struct BisimOptions {
  std::size_t depth = 4;
  std::size_t state_cap = kDefaultStateCap;
  EngineOptions engine;
};

struct BisimResult {
  std::optional<BisimCounterexample> counterexample;
  std::size_t pairs_explored = 0;

  bool equivalent() const { return !counterexample.has_value(); }
};

/**
 * Bounded strong bisimulation check under the relation N ~ (N, W). Pairs are
 * explored breadth-first from the two initial states; at every pair closer
 * than `depth` steps to the root, each request (all subjects, objects and
 * modes, consent given) must be permitted on both sides or on neither, and
 * every explicit successor must carry the implicit successor's N. Equivalence
 * holds only up to the explored depth. Throws StateSpaceCapExceeded.
 */
BisimResult check_bisimulation(const Policy& policy,
                               const BisimOptions& options = {});

std::string describe(const Policy& policy, const BisimCounterexample& cex);

}  // namespace cwall

#endif  // CWALL_IMPLICIT_HH_
