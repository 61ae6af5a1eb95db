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

#include "cwall/policy.hh"

#include <algorithm>
#include <cctype>
#include <map>
#include <set>
#include <sstream>

namespace cwall {

namespace {

bool is_identifier(std::string_view name) {
  if (name.empty()) return false;
  return std::none_of(name.begin(), name.end(), [](unsigned char c) {
    return std::isspace(c) || std::iscntrl(c);
  });
}

void require_identifier(std::string_view what, const std::string& name) {
  if (!is_identifier(name)) {
    throw Error("invalid " + std::string(what) + " name '" + name + "'");
  }
}

// Insertion-ordered name table.
class NameTable {
 public:
  std::uint32_t intern(const std::string& name) {
    auto [it, inserted] = index_.emplace(name, names_.size());
    if (inserted) names_.push_back(name);
    return it->second;
  }

  const std::vector<std::string>& names() const { return names_; }
  const std::unordered_map<std::string, std::uint32_t>& index() const {
    return index_;
  }

 private:
  std::vector<std::string> names_;
  std::unordered_map<std::string, std::uint32_t> index_;
};

}  // namespace

const char* to_string(AxiomViolation::Kind kind) {
  switch (kind) {
    case AxiomViolation::Kind::kDatasetSpansCoics:
      return "DatasetSpansCoics";
    case AxiomViolation::Kind::kSanitizedMismatch:
      return "SanitizedMismatch";
    case AxiomViolation::Kind::kMissingLabel:
      return "MissingLabel";
  }
  return "?";
}

std::string AxiomViolation::describe() const {
  std::ostringstream os;
  os << to_string(kind) << ": ";
  switch (kind) {
    case Kind::kDatasetSpansCoics:
      os << "dataset '" << dataset << "' lies in CoICs '" << coic1 << "' and '"
         << coic2 << "'";
      break;
    case Kind::kSanitizedMismatch:
      if (object.empty()) {
        os << "dataset '" << dataset << "' bound to CoIC '" << coic1
           << "' breaks the sanitized pairing";
      } else {
        os << "object '" << object << "' labelled (" << coic1 << ", "
           << dataset << ") breaks the sanitized pairing";
      }
      break;
    case Kind::kMissingLabel:
      os << "object '" << object << "' has no label";
      break;
  }
  return os.str();
}

ValidationError::ValidationError(std::vector<AxiomViolation> violations)
    : Error([&] {
        std::string msg = "policy violates its axioms:";
        for (const auto& v : violations) msg += "\n  " + v.describe();
        return msg;
      }()),
      violations_(std::move(violations)) {}

std::vector<AxiomViolation> axiom_violations(const RawPolicy& raw) {
  std::vector<AxiomViolation> out;

  // Every CoIC a dataset is associated with, in order of first mention.
  std::map<std::string, std::vector<std::string>> dataset_coics;
  std::vector<std::string> dataset_order;
  auto associate = [&](const std::string& dataset, const std::string& coic) {
    auto [it, inserted] = dataset_coics.try_emplace(dataset);
    if (inserted) dataset_order.push_back(dataset);
    if (std::find(it->second.begin(), it->second.end(), coic) ==
        it->second.end()) {
      it->second.push_back(coic);
    }
  };

  auto sanitized_mismatch = [&](const std::string& coic,
                                const std::string& dataset) {
    return (coic == raw.sanitized_coic) != (dataset == raw.sanitized_dataset);
  };

  for (const auto& [dataset, coic] : raw.dataset_bindings) {
    associate(dataset, coic);
    if (sanitized_mismatch(coic, dataset)) {
      out.push_back({AxiomViolation::Kind::kSanitizedMismatch, dataset, coic,
                     "", ""});
    }
  }
  for (const auto& obj : raw.objects) {
    if (!obj.label) {
      out.push_back({AxiomViolation::Kind::kMissingLabel, "", "", "", obj.name});
      continue;
    }
    associate(obj.label->dataset, obj.label->coic);
    if (sanitized_mismatch(obj.label->coic, obj.label->dataset)) {
      out.push_back({AxiomViolation::Kind::kSanitizedMismatch,
                     obj.label->dataset, obj.label->coic, "", obj.name});
    }
  }
  for (const auto& dataset : dataset_order) {
    const auto& coics = dataset_coics[dataset];
    for (std::size_t i = 1; i < coics.size(); ++i) {
      out.push_back({AxiomViolation::Kind::kDatasetSpansCoics, dataset,
                     coics[0], coics[i], ""});
    }
  }
  return out;
}

Policy validate_policy(const RawPolicy& raw) {
  require_identifier("CoIC", raw.sanitized_coic);
  require_identifier("dataset", raw.sanitized_dataset);
  for (const auto& c : raw.coics) require_identifier("CoIC", c);
  for (const auto& s : raw.subjects) require_identifier("subject", s);
  for (const auto& o : raw.objects) {
    require_identifier("object", o.name);
    if (o.label) {
      require_identifier("CoIC", o.label->coic);
      require_identifier("dataset", o.label->dataset);
    }
  }
  for (const auto& [d, c] : raw.dataset_bindings) {
    require_identifier("dataset", d);
    require_identifier("CoIC", c);
  }

  auto violations = axiom_violations(raw);
  if (!violations.empty()) throw ValidationError(std::move(violations));

  Policy p;
  NameTable coics, datasets, subjects, objects;
  std::vector<CoicId> dataset_coic;

  auto bind = [&](const std::string& dataset, const std::string& coic) {
    CoicId c{coics.intern(coic)};
    DatasetId d{datasets.intern(dataset)};
    if (d.value == dataset_coic.size()) dataset_coic.push_back(c);
    return Label{c, d};
  };

  p.sanitized_coic_ = CoicId{coics.intern(raw.sanitized_coic)};
  p.sanitized_dataset_ = bind(raw.sanitized_dataset, raw.sanitized_coic).dataset;
  for (const auto& c : raw.coics) coics.intern(c);
  for (const auto& [d, c] : raw.dataset_bindings) bind(d, c);

  for (const auto& s : raw.subjects) {
    if (subjects.index().contains(s)) throw Error("duplicate subject '" + s + "'");
    subjects.intern(s);
  }
  for (const auto& o : raw.objects) {
    if (objects.index().contains(o.name)) {
      throw Error("duplicate object '" + o.name + "'");
    }
    objects.intern(o.name);
    p.labels_.push_back(bind(o.label->dataset, o.label->coic));
  }

  p.subjects_ = subjects.names();
  p.objects_ = objects.names();
  p.datasets_ = datasets.names();
  p.coics_ = coics.names();
  p.dataset_coic_ = std::move(dataset_coic);
  p.subject_index_ = subjects.index();
  p.object_index_ = objects.index();
  p.dataset_index_ = datasets.index();
  p.coic_index_ = coics.index();
  return p;
}

const std::string& Policy::subject_name(SubjectId s) const {
  if (!contains(s)) throw UnknownSubject("#" + std::to_string(s.value));
  return subjects_[s.value];
}

const std::string& Policy::object_name(ObjectId o) const {
  if (!contains(o)) throw UnknownObject("#" + std::to_string(o.value));
  return objects_[o.value];
}

const std::string& Policy::dataset_name(DatasetId d) const {
  if (d.value >= datasets_.size()) {
    throw UnknownDataset("#" + std::to_string(d.value));
  }
  return datasets_[d.value];
}

const std::string& Policy::coic_name(CoicId c) const {
  if (!contains(c)) throw UnknownCoic("#" + std::to_string(c.value));
  return coics_[c.value];
}

SubjectId Policy::subject(std::string_view name) const {
  auto s = find_subject(name);
  if (!s) throw UnknownSubject(std::string(name));
  return *s;
}

ObjectId Policy::object(std::string_view name) const {
  auto o = find_object(name);
  if (!o) throw UnknownObject(std::string(name));
  return *o;
}

DatasetId Policy::dataset(std::string_view name) const {
  auto it = dataset_index_.find(std::string(name));
  if (it == dataset_index_.end()) throw UnknownDataset(std::string(name));
  return DatasetId{it->second};
}

CoicId Policy::coic(std::string_view name) const {
  auto it = coic_index_.find(std::string(name));
  if (it == coic_index_.end()) throw UnknownCoic(std::string(name));
  return CoicId{it->second};
}

std::optional<SubjectId> Policy::find_subject(std::string_view name) const {
  auto it = subject_index_.find(std::string(name));
  if (it == subject_index_.end()) return std::nullopt;
  return SubjectId{it->second};
}

std::optional<ObjectId> Policy::find_object(std::string_view name) const {
  auto it = object_index_.find(std::string(name));
  if (it == object_index_.end()) return std::nullopt;
  return ObjectId{it->second};
}

RawPolicy Policy::to_raw() const {
  RawPolicy raw;
  raw.sanitized_coic = coics_[sanitized_coic_.value];
  raw.sanitized_dataset = datasets_[sanitized_dataset_.value];
  raw.coics = coics_;
  raw.subjects = subjects_;
  for (std::size_t d = 0; d < datasets_.size(); ++d) {
    raw.dataset_bindings.emplace_back(datasets_[d],
                                      coics_[dataset_coic_[d].value]);
  }
  for (std::size_t o = 0; o < objects_.size(); ++o) {
    raw.objects.push_back(
        {objects_[o], RawLabel{coics_[labels_[o].coic.value],
                               datasets_[labels_[o].dataset.value]}});
  }
  return raw;
}

bool Policy::operator==(const Policy& other) const {
  return subjects_ == other.subjects_ && objects_ == other.objects_ &&
         datasets_ == other.datasets_ && coics_ == other.coics_ &&
         labels_ == other.labels_ && dataset_coic_ == other.dataset_coic_ &&
         sanitized_dataset_ == other.sanitized_dataset_ &&
         sanitized_coic_ == other.sanitized_coic_;
}

DatasetId ds(const Policy& policy, ObjectId o) {
  if (!policy.contains(o)) throw UnknownObject("#" + std::to_string(o.value));
  return policy.ds(o);
}

CoicId coi(const Policy& policy, ObjectId o) {
  if (!policy.contains(o)) throw UnknownObject("#" + std::to_string(o.value));
  return policy.coi(o);
}

DatasetId ds(const Policy& policy, std::string_view object) {
  return policy.ds(policy.object(object));
}

CoicId coi(const Policy& policy, std::string_view object) {
  return policy.coi(policy.object(object));
}

}  // namespace cwall
