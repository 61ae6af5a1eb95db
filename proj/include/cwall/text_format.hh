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

#ifndef CWALL_TEXT_FORMAT_HH_
#define CWALL_TEXT_FORMAT_HH_

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cwall/invariants.hh"
#include "cwall/policy.hh"
#include "cwall/state.hh"
#include "cwall/transition.hh"

namespace cwall {

/// Malformed input; `line` is 1-based, 0 when not tied to a line.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& message);

  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

/**
 * Policy file:
 *
 *   [coics]
 *   c0
 *   Sanitized sanitized
 *   [datasets]
 *   d0 : c0
 *   [objects]
 *   o0 : d0
 *   [subjects]
 *   s0
 *
 * `#` starts a comment. The CoIC flagged `sanitized` names the sanitized
 * CoIC and the first dataset bound to it names the sanitized dataset; both
 * default to Sanitized and bot.
 */
RawPolicy parse_policy(std::string_view text);

/// Parses and validates. Throws ParseError or ValidationError.
Policy load_policy_text(std::string_view text);
Policy load_policy_file(const std::string& path);

/// Renders a policy in the file format; load_policy_text reads it back.
std::string render_policy(const Policy& policy);

/// Parses `N={(s0,o1)} W={}` as produced by format_state().
State parse_state(const Policy& policy, std::string_view text);

/// One meaningful line of a trace file.
struct TraceEntry {
  enum class Kind {
    kAction,
    /// `start N={...} W={...}`: replace the current state.
    kStart,
    /// `expect-state N={...} W={...}`
    kExpectState,
    /// `expect-violation <invariant>`
    kExpectViolation,
  };

  Kind kind = Kind::kAction;
  std::size_t line = 0;

  Request request;
  bool expect_deny = false;
  std::optional<std::vector<Access>> expect_revokes;
  std::optional<RuleId> rule;

  State state;
  InvariantName invariant = InvariantName::kSimpSec;
};

/**
 * Trace file: `read|write|rw <subject> <object>` per line, optionally
 * followed by suffixes `!deny`, `!revokes s o, s o`, `!rule <name>` and
 * `!consent`. An expected revocation implies consent for that line.
 */
std::vector<TraceEntry> parse_trace(const Policy& policy, std::string_view text);
std::vector<TraceEntry> load_trace_file(const Policy& policy,
                                        const std::string& path);

/// Parses a single action line; `line` only labels errors.
TraceEntry parse_trace_line(const Policy& policy, std::string_view text,
                            std::size_t line = 0);

std::string read_file(const std::string& path);

}  // namespace cwall

#endif  // CWALL_TEXT_FORMAT_HH_
