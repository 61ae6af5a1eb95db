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

#include "cwall/state.hh"

#include <algorithm>
#include <bit>

namespace cwall {

AccessMatrix::AccessMatrix(std::size_t subjects, std::size_t objects)
    : subjects_(subjects),
      objects_(objects),
      words_((subjects * objects + 63) / 64, 0) {}

AccessMatrix::AccessMatrix(const Policy& policy,
                           std::initializer_list<Access> entries)
    : AccessMatrix(policy.subject_count(), policy.object_count()) {
  for (const auto& a : entries) {
    if (!policy.contains(a.subject)) {
      throw UnknownSubject("#" + std::to_string(a.subject.value));
    }
    if (!policy.contains(a.object)) {
      throw UnknownObject("#" + std::to_string(a.object.value));
    }
    insert(a);
  }
}

bool AccessMatrix::empty() const {
  return std::all_of(words_.begin(), words_.end(),
                     [](std::uint64_t w) { return w == 0; });
}

std::size_t AccessMatrix::size() const {
  std::size_t n = 0;
  for (auto w : words_) n += std::popcount(w);
  return n;
}

std::vector<Access> AccessMatrix::entries() const {
  std::vector<Access> out;
  for (std::uint32_t s = 0; s < subjects_; ++s) {
    for (std::uint32_t o = 0; o < objects_; ++o) {
      if (contains(SubjectId{s}, ObjectId{o})) {
        out.push_back({SubjectId{s}, ObjectId{o}});
      }
    }
  }
  return out;
}

std::vector<ObjectId> AccessMatrix::row(SubjectId s) const {
  std::vector<ObjectId> out;
  for (std::uint32_t o = 0; o < objects_; ++o) {
    if (contains(s, ObjectId{o})) out.push_back(ObjectId{o});
  }
  return out;
}

bool AccessMatrix::is_subset_of(const AccessMatrix& other) const {
  for (std::size_t i = 0; i < words_.size(); ++i) {
    if (words_[i] & ~other.words_[i]) return false;
  }
  return true;
}

std::vector<Access> AccessMatrix::minus(const AccessMatrix& other) const {
  std::vector<Access> out;
  for (const auto& a : entries()) {
    if (!other.contains(a)) out.push_back(a);
  }
  return out;
}

std::strong_ordering AccessMatrix::operator<=>(const AccessMatrix& other) const {
  if (auto c = subjects_ <=> other.subjects_; c != 0) return c;
  if (auto c = objects_ <=> other.objects_; c != 0) return c;
  return std::lexicographical_compare_three_way(
      words_.begin(), words_.end(), other.words_.begin(), other.words_.end());
}

std::size_t AccessMatrix::hash() const {
  std::size_t h = subjects_ * 31 + objects_;
  for (auto w : words_) {
    h ^= std::hash<std::uint64_t>()(w) + 0x9e3779b97f4a7c15ULL + (h << 6) +
         (h >> 2);
  }
  return h;
}

State State::initial(const Policy& policy) {
  return State(AccessMatrix(policy.subject_count(), policy.object_count()),
               AccessMatrix(policy.subject_count(), policy.object_count()));
}

std::strong_ordering State::operator<=>(const State& other) const {
  if (auto c = read <=> other.read; c != 0) return c;
  return write <=> other.write;
}

std::size_t State::hash() const {
  auto h = read.hash();
  return h ^ (write.hash() + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2));
}

std::string format_access(const Policy& policy, const Access& a) {
  return "(" + policy.subject_name(a.subject) + "," +
         policy.object_name(a.object) + ")";
}

std::string format_matrix(const Policy& policy, const AccessMatrix& m) {
  std::string out = "{";
  bool first = true;
  for (const auto& a : m.entries()) {
    if (!first) out += ",";
    out += format_access(policy, a);
    first = false;
  }
  return out + "}";
}

std::string format_state(const Policy& policy, const State& state) {
  return "N=" + format_matrix(policy, state.read) +
         " W=" + format_matrix(policy, state.write);
}

}  // namespace cwall
