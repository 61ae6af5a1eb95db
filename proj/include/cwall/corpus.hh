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

#ifndef CWALL_CORPUS_HH_
#define CWALL_CORPUS_HH_

#include <cstddef>
#include <string>
#include <vector>

#include "cwall/policy.hh"

namespace cwall {

struct CorpusOptions {
  std::size_t max_subjects = 2;
  std::size_t max_objects = 4;
  /// Limits on non-sanitized datasets and CoICs.
  std::size_t max_datasets = 3;
  std::size_t max_coics = 2;
};

/**
 * Every policy shape within the limits, one per equivalence class under
 * renaming of subjects, objects, datasets and CoICs. Each policy has at
 * least one subject and one object. Objects may be sanitized.
 */
std::vector<Policy> policy_corpus(const CorpusOptions& options = {});

/// Policies small enough for synthesized-state lemma checks.
std::vector<Policy> micro_corpus();

/**
 * Renaming-invariant shape: subject count, sanitized object count, and the
 * sorted dataset sizes of each CoIC.
 */
std::string policy_signature(const Policy& policy);

}  // namespace cwall

#endif  // CWALL_CORPUS_HH_
