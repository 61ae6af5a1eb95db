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

#ifndef CWALL_LIMITS_HH_
#define CWALL_LIMITS_HH_

#include <cstddef>
#include <string>

#include "cwall/policy.hh"

namespace cwall {

inline constexpr std::size_t kDefaultStateCap = 1'000'000;

/// Cap from the CWE_STATE_CAP environment variable, else kDefaultStateCap.
std::size_t default_state_cap();

class StateSpaceCapExceeded : public Error {
 public:
  StateSpaceCapExceeded(std::size_t cap, std::size_t depth_reached);

  std::size_t cap() const { return cap_; }
  /// Deepest fully explored layer before the cap was hit.
  std::size_t depth_reached() const { return depth_reached_; }

 private:
  std::size_t cap_;
  std::size_t depth_reached_;
};

}  // namespace cwall

#endif  // CWALL_LIMITS_HH_
