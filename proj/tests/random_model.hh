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

// Random policies, states and requests for property tests.

#ifndef CWALL_TESTS_RANDOM_MODEL_HH_
#define CWALL_TESTS_RANDOM_MODEL_HH_

#include <random>
#include <string>

#include "cwall/policy.hh"
#include "cwall/state.hh"
#include "cwall/text_format.hh"
#include "cwall/transition.hh"

namespace cwall::testing {

using Rng = std::mt19937_64;

inline std::size_t pick(Rng& rng, std::size_t lo, std::size_t hi) {
  return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

inline bool coin(Rng& rng, double p = 0.5) {
  return std::bernoulli_distribution(p)(rng);
}

// Up to three CoICs of up to two datasets each; about one object in five
// is sanitized.
inline Policy random_policy(Rng& rng, std::size_t max_subjects = 3,
                            std::size_t max_objects = 5) {
  const auto coics = pick(rng, 1, 3);
  std::string text = "[coics]\n";
  for (std::size_t c = 0; c < coics; ++c) text += "c" + std::to_string(c) + "\n";
  text += "[datasets]\n";
  std::size_t datasets = 0;
  for (std::size_t c = 0; c < coics; ++c) {
    const auto n = pick(rng, 1, 2);
    for (std::size_t i = 0; i < n; ++i) {
      text += "d" + std::to_string(datasets++) + " : c" + std::to_string(c) +
              "\n";
    }
  }
  text += "[objects]\n";
  const auto objects = pick(rng, 1, max_objects);
  for (std::size_t o = 0; o < objects; ++o) {
    text += "o" + std::to_string(o) + " : ";
    text += coin(rng, 0.2) ? std::string("bot")
                           : "d" + std::to_string(pick(rng, 0, datasets - 1));
    text += "\n";
  }
  text += "[subjects]\n";
  const auto subjects = pick(rng, 1, max_subjects);
  for (std::size_t s = 0; s < subjects; ++s) {
    text += "s" + std::to_string(s) + "\n";
  }
  return load_policy_text(text);
}

inline Request random_request(Rng& rng, const Policy& p) {
  static constexpr Mode kModes[] = {Mode::kRead, Mode::kWriteOnly,
                                    Mode::kReadWrite};
  return {SubjectId{static_cast<std::uint32_t>(pick(rng, 0, p.subject_count() - 1))},
          ObjectId{static_cast<std::uint32_t>(pick(rng, 0, p.object_count() - 1))},
          kModes[pick(rng, 0, 2)], coin(rng)};
}

// Any (N, W), reachable or not.
inline State random_state(Rng& rng, const Policy& p, double density = 0.3) {
  State s = State::initial(p);
  for (std::uint32_t a = 0; a < p.subject_count(); ++a) {
    for (std::uint32_t o = 0; o < p.object_count(); ++o) {
      if (coin(rng, density)) s.read.insert(SubjectId{a}, ObjectId{o});
      if (coin(rng, density)) s.write.insert(SubjectId{a}, ObjectId{o});
    }
  }
  return s;
}

// End of a random walk of sound steps from the initial state, each step
// firing a uniformly chosen enabled rule.
inline State random_reachable_state(Rng& rng, const Policy& p,
                                    std::size_t max_steps = 8) {
  State s = State::initial(p);
  const auto steps = pick(rng, 0, max_steps);
  for (std::size_t i = 0; i < steps; ++i) {
    const Request r = random_request(rng, p);
    const auto rules = enabled_rules(p, s, r).to_vector();
    if (rules.empty()) continue;
    s = rule_effect(p, s, r, rules[pick(rng, 0, rules.size() - 1)]);
  }
  return s;
}

}  // namespace cwall::testing

#endif  // CWALL_TESTS_RANDOM_MODEL_HH_
