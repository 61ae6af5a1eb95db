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

// Policies and helpers shared by the test binaries.

#ifndef CWALL_TESTS_FIXTURES_HH_
#define CWALL_TESTS_FIXTURES_HH_

#include <string>
#include <string_view>
#include <vector>

#include "cwall/policy.hh"
#include "cwall/state.hh"
#include "cwall/text_format.hh"
#include "cwall/transition.hh"

namespace cwall::testing {

// s0 over two banks (o0, o1 in CoIC c0) and an oil company (o2 in c1).
inline Policy banks_and_oil(int subjects = 1) {
  std::string text =
      "[coics]\nc0\nc1\n"
      "[datasets]\nd0 : c0\nd1 : c0\nd2 : c1\n"
      "[objects]\no0 : d0\no1 : d1\no2 : d2\n"
      "[subjects]\n";
  for (int s = 0; s < subjects; ++s) text += "s" + std::to_string(s) + "\n";
  return load_policy_text(text);
}

// o0 in (c0,d0), o1 in (c1,d1), o2 sanitized.
inline Policy with_sanitized() {
  return load_policy_text(
      "[coics]\nc0\nc1\nSanitized sanitized\n"
      "[datasets]\nd0 : c0\nd1 : c1\nbot : Sanitized\n"
      "[objects]\no0 : d0\no1 : d1\no2 : bot\n"
      "[subjects]\ns0\n");
}

// o1 in (c1,d1), o2 sanitized; c0 and d0 have no objects.
inline Policy sanitized_and_one() {
  return load_policy_text(
      "[coics]\nc0\nc1\nSanitized sanitized\n"
      "[datasets]\nd0 : c0\nd1 : c1\nbot : Sanitized\n"
      "[objects]\no1 : d1\no2 : bot\n"
      "[subjects]\ns0\n");
}

// o0 in (c0,d0); o1, o2, o3 share (c1,d1); subjects s0, s1.
inline Policy relay() {
  return load_policy_text(
      "[coics]\nc0\nc1\n"
      "[datasets]\nd0 : c0\nd1 : c1\n"
      "[objects]\no0 : d0\no1 : d1\no2 : d1\no3 : d1\n"
      "[subjects]\ns0\ns1\n");
}

// o0, o1, o2 share (c0,d0); o3 in (c1,d1); subjects s0, s1.
inline Policy blocked_relay() {
  return load_policy_text(
      "[coics]\nc0\nc1\n"
      "[datasets]\nd0 : c0\nd1 : c1\n"
      "[objects]\no0 : d0\no1 : d0\no2 : d0\no3 : d1\n"
      "[subjects]\ns0\ns1\n");
}

inline Access acc(const Policy& p, std::string_view s, std::string_view o) {
  return {p.subject(s), p.object(o)};
}

inline State st(const Policy& p, std::string_view text) {
  return parse_state(p, text);
}

inline Request req(const Policy& p, Mode mode, std::string_view s,
                   std::string_view o, bool consent = false) {
  return {p.subject(s), p.object(o), mode, consent};
}

inline Request rd(const Policy& p, std::string_view s, std::string_view o,
                  bool consent = false) {
  return req(p, Mode::kRead, s, o, consent);
}

inline Request wr(const Policy& p, std::string_view s, std::string_view o) {
  return req(p, Mode::kWriteOnly, s, o);
}

inline Request rw(const Policy& p, std::string_view s, std::string_view o) {
  return req(p, Mode::kReadWrite, s, o);
}

}  // namespace cwall::testing

#endif  // CWALL_TESTS_FIXTURES_HH_
