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

#ifndef CWALL_POLICY_HH_
#define CWALL_POLICY_HH_

#include <compare>
#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace cwall {

/**
 * Dense index of an entity inside a Policy. The tag keeps subject, object,
 * dataset and CoIC indices from being mixed up.
 */
template <class Tag>
struct Id {
  std::uint32_t value = 0;

  constexpr Id() = default;
  constexpr explicit Id(std::uint32_t v) : value(v) {}

  constexpr auto operator<=>(const Id&) const = default;
};

struct SubjectTag {};
struct ObjectTag {};
struct DatasetTag {};
struct CoicTag {};

using SubjectId = Id<SubjectTag>;
using ObjectId = Id<ObjectTag>;
using DatasetId = Id<DatasetTag>;
using CoicId = Id<CoicTag>;

/// Security label of an object: its conflict-of-interest class and dataset.
struct Label {
  CoicId coic;
  DatasetId dataset;

  auto operator<=>(const Label&) const = default;
};

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class UnknownSubject : public Error {
 public:
  explicit UnknownSubject(const std::string& name)
      : Error("unknown subject '" + name + "'") {}
};

class UnknownObject : public Error {
 public:
  explicit UnknownObject(const std::string& name)
      : Error("unknown object '" + name + "'") {}
};

class UnknownCoic : public Error {
 public:
  explicit UnknownCoic(const std::string& name)
      : Error("unknown conflict-of-interest class '" + name + "'") {}
};

class UnknownDataset : public Error {
 public:
  explicit UnknownDataset(const std::string& name)
      : Error("unknown dataset '" + name + "'") {}
};

/// One axiom violation found while validating a policy description.
struct AxiomViolation {
  enum class Kind { kDatasetSpansCoics, kSanitizedMismatch, kMissingLabel };

  Kind kind;
  std::string dataset;  // kDatasetSpansCoics
  std::string coic1;    // kDatasetSpansCoics
  std::string coic2;    // kDatasetSpansCoics
  std::string object;   // kSanitizedMismatch, kMissingLabel

  std::string describe() const;
};

const char* to_string(AxiomViolation::Kind kind);

class ValidationError : public Error {
 public:
  explicit ValidationError(std::vector<AxiomViolation> violations);

  const std::vector<AxiomViolation>& violations() const { return violations_; }

 private:
  std::vector<AxiomViolation> violations_;
};

/// Name-level label, as written by a policy author.
struct RawLabel {
  std::string coic;
  std::string dataset;
};

struct RawObject {
  std::string name;
  std::optional<RawLabel> label;
};

/**
 * Unvalidated policy description. Names are assumed unique within each
 * category (the parser rejects duplicates). Besides the per-object labels,
 * a description may carry explicit dataset-to-CoIC bindings, which take part
 * in the "one CoIC per dataset" check even when the dataset has no objects,
 * and bare CoIC declarations.
 *
 * Index order of the validated policy: the sanitized CoIC and dataset come
 * first, then names in order of first mention (coics, bindings, labels).
 */
struct RawPolicy {
  std::vector<std::string> coics;
  std::vector<std::string> subjects;
  std::vector<RawObject> objects;
  std::vector<std::pair<std::string, std::string>> dataset_bindings;
  std::string sanitized_coic = "Sanitized";
  std::string sanitized_dataset = "bot";
};

/**
 * Immutable, validated Chinese Wall policy: subjects, objects, and the
 * labelling functions ds() and coi(). The sanitized dataset and its CoIC
 * always exist, even when no object is sanitized.
 *
 * Both axioms hold for every instance:
 *  - objects sharing a dataset share a CoIC;
 *  - ds(o) is the sanitized dataset iff coi(o) is the sanitized CoIC.
 */
class Policy {
 public:
  std::size_t subject_count() const { return subjects_.size(); }
  std::size_t object_count() const { return objects_.size(); }
  std::size_t dataset_count() const { return datasets_.size(); }
  std::size_t coic_count() const { return coics_.size(); }

  const std::string& subject_name(SubjectId s) const;
  const std::string& object_name(ObjectId o) const;
  const std::string& dataset_name(DatasetId d) const;
  const std::string& coic_name(CoicId c) const;

  SubjectId subject(std::string_view name) const;
  ObjectId object(std::string_view name) const;
  DatasetId dataset(std::string_view name) const;
  CoicId coic(std::string_view name) const;

  std::optional<SubjectId> find_subject(std::string_view name) const;
  std::optional<ObjectId> find_object(std::string_view name) const;

  bool contains(SubjectId s) const { return s.value < subjects_.size(); }
  bool contains(ObjectId o) const { return o.value < objects_.size(); }
  bool contains(CoicId c) const { return c.value < coics_.size(); }

  /// Unchecked label lookups, for hot loops over valid indices.
  DatasetId ds(ObjectId o) const { return labels_[o.value].dataset; }
  CoicId coi(ObjectId o) const { return labels_[o.value].coic; }
  const Label& label(ObjectId o) const { return labels_[o.value]; }

  bool is_sanitized(ObjectId o) const { return ds(o) == sanitized_dataset_; }

  DatasetId sanitized_dataset() const { return sanitized_dataset_; }
  CoicId sanitized_coic() const { return sanitized_coic_; }

  /// CoIC a dataset belongs to.
  CoicId coic_of(DatasetId d) const { return dataset_coic_[d.value]; }

  /// Name-level description that validates back to an equal policy.
  RawPolicy to_raw() const;

  bool operator==(const Policy& other) const;

 private:
  friend Policy validate_policy(const RawPolicy& raw);

  std::vector<std::string> subjects_;
  std::vector<std::string> objects_;
  std::vector<std::string> datasets_;
  std::vector<std::string> coics_;
  std::vector<Label> labels_;
  std::vector<CoicId> dataset_coic_;
  DatasetId sanitized_dataset_;
  CoicId sanitized_coic_;
  std::unordered_map<std::string, std::uint32_t> subject_index_;
  std::unordered_map<std::string, std::uint32_t> object_index_;
  std::unordered_map<std::string, std::uint32_t> dataset_index_;
  std::unordered_map<std::string, std::uint32_t> coic_index_;
};

/**
 * Checks both axioms and builds a Policy. Throws ValidationError listing
 * every violation found.
 */
Policy validate_policy(const RawPolicy& raw);

/// Axiom check without throwing; empty result means the description is valid.
std::vector<AxiomViolation> axiom_violations(const RawPolicy& raw);

/// Checked accessors for ds(o) and coi(o); throw UnknownObject.
DatasetId ds(const Policy& policy, ObjectId o);
CoicId coi(const Policy& policy, ObjectId o);
DatasetId ds(const Policy& policy, std::string_view object);
CoicId coi(const Policy& policy, std::string_view object);

}  // namespace cwall

template <class Tag>
struct std::hash<cwall::Id<Tag>> {
  std::size_t operator()(const cwall::Id<Tag>& id) const noexcept {
    return std::hash<std::uint32_t>()(id.value);
  }
};

#endif  // CWALL_POLICY_HH_
