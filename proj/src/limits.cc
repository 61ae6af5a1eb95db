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

#include "cwall/limits.hh"

#include <charconv>
#include <cstdlib>
#include <cstring>

namespace cwall {

std::size_t default_state_cap() {
  const char* env = std::getenv("CWE_STATE_CAP");
  if (env == nullptr || *env == '\0') return kDefaultStateCap;
  std::size_t value = 0;
  auto end = env + std::strlen(env);
  auto [ptr, ec] = std::from_chars(env, end, value);
  if (ec != std::errc() || ptr != end || value == 0) return kDefaultStateCap;
  return value;
}

StateSpaceCapExceeded::StateSpaceCapExceeded(std::size_t cap,
                                             std::size_t depth_reached)
    : Error("state space cap of " + std::to_string(cap) +
            " states exceeded after depth " + std::to_string(depth_reached)),
      cap_(cap),
      depth_reached_(depth_reached) {}

}  // namespace cwall
