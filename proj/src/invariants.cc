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

#include "cwall/invariants.hh"

#include <sstream>

namespace cwall {

namespace {

const Sds::Image kEmptyImage;

// Pairs of reads by one subject in the same CoIC but different datasets.
std::vector<Witness> same_coic_conflicts(const Policy& policy,
                                         const AccessMatrix& read) {
  std::vector<Witness> out;
  for (std::uint32_t s = 0; s < read.subjects(); ++s) {
    auto row = read.row(SubjectId{s});
    for (std::size_t i = 0; i < row.size(); ++i) {
      for (std::size_t j = i + 1; j < row.size(); ++j) {
        if (policy.coi(row[i]) == policy.coi(row[j]) &&
            policy.ds(row[i]) != policy.ds(row[j])) {
          Witness w;
          w.accesses = {{SubjectId{s}, row[i]}, {SubjectId{s}, row[j]}};
          w.coic = policy.coi(row[i]);
          out.push_back(std::move(w));
        }
      }
    }
  }
  return out;
}

}  // namespace

const Sds::Image& Sds::image(CoicId x) const {
  auto it = images_.find(x);
  return it == images_.end() ? kEmptyImage : it->second;
}

const char* to_string(ViolationKind kind) {
  switch (kind) {
    case ViolationKind::kSimpSec:
      return "simpSec";
    case ViolationKind::kStarProp:
      return "starProp";
    case ViolationKind::kCoiExclusivity:
      return "coiExclusivity";
    case ViolationKind::kMinSub:
      return "minSub";
    case ViolationKind::kSdsAlignment:
      return "sdsAlignment";
  }
  return "?";
}

ViolationReport check_simp_sec(const Policy& policy, const AccessMatrix& read) {
  return {ViolationKind::kSimpSec, same_coic_conflicts(policy, read)};
}

ViolationReport check_star_prop(const Policy& policy, const State& state) {
  ViolationReport report{ViolationKind::kStarProp, {}};
  for (const auto& w : state.write.entries()) {
    for (auto o : state.read.row(w.subject)) {
      if (policy.ds(o) != policy.ds(w.object) && !policy.is_sanitized(o)) {
        Witness wit;
        wit.accesses = {{w.subject, o}, w};
        wit.note = "read entry conflicts with write entry";
        report.witnesses.push_back(std::move(wit));
      }
    }
  }
  return report;
}

ViolationReport coi_exclusivity_consequent(const Policy& policy,
                                           const AccessMatrix& read) {
  return {ViolationKind::kCoiExclusivity, same_coic_conflicts(policy, read)};
}

ViolationReport check_coi_exclusivity(const Policy& policy,
                                      const AccessMatrix& read) {
  if (!check_simp_sec(policy, read).passed()) {
    throw PremiseViolated(
        "CoI exclusivity premise fails: simple security does not hold");
  }
  return coi_exclusivity_consequent(policy, read);
}

std::set<DatasetId> datasets_accessed(const Policy& policy,
                                      const AccessMatrix& read, CoicId x) {
  if (!policy.contains(x)) throw UnknownCoic("#" + std::to_string(x.value));
  std::set<DatasetId> out;
  for (const auto& a : read.entries()) {
    if (policy.coi(a.object) == x) out.insert(policy.ds(a.object));
  }
  return out;
}

ViolationReport check_min_subjects(const Policy& policy,
                                   const AccessMatrix& read) {
  ViolationReport report{ViolationKind::kMinSub, {}};
  for (std::uint32_t c = 0; c < policy.coic_count(); ++c) {
    auto accessed = datasets_accessed(policy, read, CoicId{c});
    if (accessed.size() > policy.subject_count()) {
      Witness w;
      w.coic = CoicId{c};
      w.datasets.assign(accessed.begin(), accessed.end());
      w.note = "more datasets accessed than subjects exist";
      report.witnesses.push_back(std::move(w));
    }
  }
  return report;
}

ViolationReport check_min_subjects_strict(const Policy& policy,
                                          const AccessMatrix& read) {
  ViolationReport report{ViolationKind::kMinSub, {}};
  for (std::uint32_t c = 0; c < policy.coic_count(); ++c) {
    std::set<DatasetId> accessed;
    std::set<SubjectId> active;
    for (const auto& a : read.entries()) {
      if (policy.coi(a.object) == CoicId{c}) {
        accessed.insert(policy.ds(a.object));
        active.insert(a.subject);
      }
    }
    if (accessed.size() > active.size()) {
      Witness w;
      w.coic = CoicId{c};
      w.datasets.assign(accessed.begin(), accessed.end());
      w.note = "more datasets accessed than subjects reading in the CoIC";
      report.witnesses.push_back(std::move(w));
    }
  }
  return report;
}

Sds update_sds(const Policy& policy, Sds sds, SubjectId s, ObjectId o) {
  if (!policy.contains(s)) throw UnknownSubject("#" + std::to_string(s.value));
  if (!policy.contains(o)) throw UnknownObject("#" + std::to_string(o.value));
  sds.add(policy.coi(o), s, policy.ds(o));
  return sds;
}

Sds sds_from_reads(const Policy& policy, const AccessMatrix& read) {
  Sds sds;
  for (const auto& a : read.entries()) {
    sds.add(policy.coi(a.object), a.subject, policy.ds(a.object));
  }
  return sds;
}

ViolationReport check_sds_functional(const Policy& policy, const Sds& sds) {
  (void)policy;
  ViolationReport report{ViolationKind::kMinSub, {}};
  for (const auto& [x, image] : sds.images()) {
    std::map<SubjectId, DatasetId> seen;
    for (const auto& [s, y] : image) {
      auto [it, inserted] = seen.emplace(s, y);
      if (!inserted && it->second != y) {
        Witness w;
        w.coic = x;
        w.sds_pairs = {{s, it->second}, {s, y}};
        w.note = "subject mapped to two datasets";
        report.witnesses.push_back(std::move(w));
      }
    }
  }
  return report;
}

ViolationReport check_sds_alignment(const Policy& policy, const Sds& sds,
                                    const AccessMatrix& read) {
  ViolationReport report{ViolationKind::kSdsAlignment, {}};
  const Sds rebuilt = sds_from_reads(policy, read);
  // Sds to N: every recorded pair is backed by a read entry.
  for (const auto& [x, image] : sds.images()) {
    const auto& backed = rebuilt.image(x);
    for (const auto& pair : image) {
      if (!backed.contains(pair)) {
        Witness w;
        w.coic = x;
        w.sds_pairs = {pair};
        w.note = "pair has no matching read entry";
        report.witnesses.push_back(std::move(w));
      }
    }
  }
  // N to Sds: every read entry contributes its pair.
  for (const auto& a : read.entries()) {
    const auto x = policy.coi(a.object);
    if (!sds.image(x).contains({a.subject, policy.ds(a.object)})) {
      Witness w;
      w.coic = x;
      w.accesses = {a};
      w.note = "read entry missing from sds";
      report.witnesses.push_back(std::move(w));
    }
  }
  return report;
}

bool min_subjects_via_sds(const Policy& policy, const Sds& sds,
                          const AccessMatrix& read) {
  if (!check_sds_functional(policy, sds).passed()) return false;
  if (!check_sds_alignment(policy, sds, read).passed()) return false;
  for (std::uint32_t c = 0; c < policy.coic_count(); ++c) {
    const CoicId x{c};
    const auto& image = sds.image(x);
    std::set<DatasetId> range;
    std::set<SubjectId> domain;
    for (const auto& [s, y] : image) {
      range.insert(y);
      domain.insert(s);
    }
    if (range != datasets_accessed(policy, read, x)) return false;
    // A partial function maps its domain onto its range.
    if (range.size() > domain.size()) return false;
    if (domain.size() > policy.subject_count()) return false;
  }
  return true;
}

const char* to_string(InvariantName name) {
  switch (name) {
    case InvariantName::kSimpSec:
      return "simpSec";
    case InvariantName::kStarProp:
      return "starProp";
    case InvariantName::kMinSub:
      return "minSub";
    case InvariantName::kSdsAlignment:
      return "sdsAlignment";
  }
  return "?";
}

std::optional<InvariantName> parse_invariant(std::string_view name) {
  for (auto n : {InvariantName::kSimpSec, InvariantName::kStarProp,
                 InvariantName::kMinSub, InvariantName::kSdsAlignment}) {
    if (name == to_string(n)) return n;
  }
  return std::nullopt;
}

std::string describe(const Policy& policy, const Witness& witness) {
  std::ostringstream os;
  bool sep = false;
  auto space = [&] {
    if (sep) os << ' ';
    sep = true;
  };
  if (witness.coic) {
    space();
    os << "coic=" << policy.coic_name(*witness.coic);
  }
  if (!witness.accesses.empty()) {
    space();
    for (std::size_t i = 0; i < witness.accesses.size(); ++i) {
      if (i) os << ',';
      os << format_access(policy, witness.accesses[i]);
    }
  }
  if (!witness.sds_pairs.empty()) {
    space();
    os << "sds{";
    for (std::size_t i = 0; i < witness.sds_pairs.size(); ++i) {
      if (i) os << ',';
      os << '(' << policy.subject_name(witness.sds_pairs[i].first) << ','
         << policy.dataset_name(witness.sds_pairs[i].second) << ')';
    }
    os << '}';
  }
  if (!witness.datasets.empty()) {
    space();
    os << "datasets{";
    for (std::size_t i = 0; i < witness.datasets.size(); ++i) {
      if (i) os << ',';
      os << policy.dataset_name(witness.datasets[i]);
    }
    os << '}';
  }
  if (!witness.note.empty()) {
    space();
    os << "(" << witness.note << ")";
  }
  return os.str();
}

std::string describe(const Policy& policy, const ViolationReport& report) {
  std::string out = std::string(to_string(report.kind)) +
                    (report.passed() ? ": pass" : ": FAIL");
  for (const auto& w : report.witnesses) out += "\n  " + describe(policy, w);
  return out;
}

}  // namespace cwall
