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

#ifndef CWALL_INVARIANTS_HH_
#define CWALL_INVARIANTS_HH_

#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "cwall/policy.hh"
#include "cwall/state.hh"

namespace cwall {

/**
 * Subject-to-dataset pairs per CoIC, kept in step with the read matrix: for
 * each CoIC X, the pairs (s, Y) such that s reads some object labelled
 * (X, Y). Each image is expected to be a partial function from subjects to
 * datasets.
 */
class Sds {
 public:
  using Image = std::set<std::pair<SubjectId, DatasetId>>;

  const std::map<CoicId, Image>& images() const { return images_; }

  /// Image of X; empty when X is unbound.
  const Image& image(CoicId x) const;
  bool bound(CoicId x) const { return images_.contains(x); }

  void add(CoicId x, SubjectId s, DatasetId y) { images_[x].emplace(s, y); }

  bool empty() const { return images_.empty(); }

  bool operator==(const Sds&) const = default;

 private:
  std::map<CoicId, Image> images_;
};

/// Which invariant a report concerns.
enum class ViolationKind {
  kSimpSec,
  kStarProp,
  kCoiExclusivity,
  kMinSub,
  kSdsAlignment,
};

const char* to_string(ViolationKind kind);

struct Witness {
  std::vector<Access> accesses;
  std::optional<CoicId> coic;
  std::vector<std::pair<SubjectId, DatasetId>> sds_pairs;
  std::vector<DatasetId> datasets;
  std::string note;
};

/// Result of one invariant check; no witnesses means the check passed.
struct ViolationReport {
  ViolationKind kind;
  std::vector<Witness> witnesses;

  bool passed() const { return witnesses.empty(); }
};

class PremiseViolated : public Error {
 public:
  explicit PremiseViolated(const std::string& what) : Error(what) {}
};

/// Every (s,o) in N satisfies simple security against N.
ViolationReport check_simp_sec(const Policy& policy, const AccessMatrix& read);

/// Every (s,o) in W satisfies the *-property against N.
ViolationReport check_star_prop(const Policy& policy, const State& state);

/**
 * One dataset per CoIC per subject. The check requires simple security to
 * hold first and throws PremiseViolated otherwise.
 */
ViolationReport check_coi_exclusivity(const Policy& policy,
                                      const AccessMatrix& read);

/// The consequent alone, with no premise check.
ViolationReport coi_exclusivity_consequent(const Policy& policy,
                                           const AccessMatrix& read);

/// Datasets of CoIC X that some subject reads in N. Throws UnknownCoic.
std::set<DatasetId> datasets_accessed(const Policy& policy,
                                      const AccessMatrix& read, CoicId x);

/// For every CoIC X, |datasets_accessed(X)| <= number of policy subjects.
ViolationReport check_min_subjects(const Policy& policy,
                                   const AccessMatrix& read);

/// Stricter bound: only subjects that read inside X are counted.
ViolationReport check_min_subjects_strict(const Policy& policy,
                                          const AccessMatrix& read);

/// Records a read grant of (s,o).
Sds update_sds(const Policy& policy, Sds sds, SubjectId s, ObjectId o);

/// Sds rebuilt from scratch out of N.
Sds sds_from_reads(const Policy& policy, const AccessMatrix& read);

/// Each image of sds is a partial function (reported as kMinSub).
ViolationReport check_sds_functional(const Policy& policy, const Sds& sds);

/// Both inclusions between sds and N.
ViolationReport check_sds_alignment(const Policy& policy, const Sds& sds,
                                    const AccessMatrix& read);

/**
 * Cardinality bound argued through sds: when every image is a partial
 * function, sds is aligned with N and each image's range equals the accessed
 * datasets, the image is a surjective partial function from subjects onto
 * those datasets. Returns true iff that argument establishes the bound for
 * every CoIC.
 */
bool min_subjects_via_sds(const Policy& policy, const Sds& sds,
                          const AccessMatrix& read);

/// Names of invariants checked by invariance lemmas.
enum class InvariantName { kSimpSec, kStarProp, kMinSub, kSdsAlignment };

const char* to_string(InvariantName name);
std::optional<InvariantName> parse_invariant(std::string_view name);

std::string describe(const Policy& policy, const Witness& witness);
std::string describe(const Policy& policy, const ViolationReport& report);

}  // namespace cwall

#endif  // CWALL_INVARIANTS_HH_
