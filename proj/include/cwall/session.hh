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

#ifndef CWALL_SESSION_HH_
#define CWALL_SESSION_HH_

#include <iosfwd>
#include <string_view>
#include <vector>

#include "cwall/flow.hh"
#include "cwall/invariants.hh"
#include "cwall/policy.hh"
#include "cwall/state.hh"
#include "cwall/transition.hh"

namespace cwall {

struct SessionOptions {
  /// Consent to revocation without asking.
  bool consent = false;
  EngineOptions engine;
  FlowBounds flow_bounds{2, 2, std::nullopt};
};

/**
 * Interactive stepping over one policy. Lines use the trace syntax plus
 * `state`, `check`, `undo`, `flows <o> <o'>`, `help` and `quit`. A read
 * that only the revoking rule would grant prints a warning and asks for
 * confirmation on the input stream, unless consent was given up front.
 */
class Session {
 public:
  Session(const Policy& policy, SessionOptions options = {});

  /// Reads commands until `quit` or end of input.
  void run(std::istream& in, std::ostream& out, bool prompt = true);

  /// Handles one command; returns false on `quit`.
  bool handle(std::string_view line, std::istream& in, std::ostream& out);

  const State& state() const { return state_; }
  std::size_t undo_depth() const { return history_.size(); }

 private:
  void act(std::string_view line, std::istream& in, std::ostream& out);
  void commit(const Decision& d, std::ostream& out);

  const Policy& policy_;
  SessionOptions options_;
  State state_;
  Sds sds_;
  std::vector<std::pair<State, Sds>> history_;
};

}  // namespace cwall

#endif  // CWALL_SESSION_HH_
