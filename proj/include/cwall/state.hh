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

#ifndef CWALL_STATE_HH_
#define CWALL_STATE_HH_

#include <compare>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <string>
#include <vector>

#include "cwall/policy.hh"

namespace cwall {

/// A (subject, object) entry of an access matrix.
struct Access {
  SubjectId subject;
  ObjectId object;

  auto operator<=>(const Access&) const = default;
};

/**
 * Finite relation between the subjects and objects of one policy, stored as
 * a bit matrix. Value semantics; equality and ordering compare contents.
 */
class AccessMatrix {
 public:
  AccessMatrix() = default;
  AccessMatrix(std::size_t subjects, std::size_t objects);
  AccessMatrix(const Policy& policy, std::initializer_list<Access> entries);

  std::size_t subjects() const { return subjects_; }
  std::size_t objects() const { return objects_; }

  bool contains(SubjectId s, ObjectId o) const {
    auto bit = index(s, o);
    return (words_[bit >> 6] >> (bit & 63)) & 1U;
  }
  bool contains(const Access& a) const { return contains(a.subject, a.object); }

  void insert(SubjectId s, ObjectId o) {
    auto bit = index(s, o);
    words_[bit >> 6] |= std::uint64_t{1} << (bit & 63);
  }
  void insert(const Access& a) { insert(a.subject, a.object); }

  void erase(SubjectId s, ObjectId o) {
    auto bit = index(s, o);
    words_[bit >> 6] &= ~(std::uint64_t{1} << (bit & 63));
  }
  void erase(const Access& a) { erase(a.subject, a.object); }

  bool empty() const;
  std::size_t size() const;

  /// Entries in (subject, object) order.
  std::vector<Access> entries() const;

  /// Objects the subject is related to, in index order.
  std::vector<ObjectId> row(SubjectId s) const;

  bool is_subset_of(const AccessMatrix& other) const;

  /// Entries of this matrix absent from `other`.
  std::vector<Access> minus(const AccessMatrix& other) const;

  const std::vector<std::uint64_t>& words() const { return words_; }

  bool operator==(const AccessMatrix& other) const = default;
  std::strong_ordering operator<=>(const AccessMatrix& other) const;

  std::size_t hash() const;

 private:
  std::size_t index(SubjectId s, ObjectId o) const {
    return static_cast<std::size_t>(s.value) * objects_ + o.value;
  }

  std::size_t subjects_ = 0;
  std::size_t objects_ = 0;
  std::vector<std::uint64_t> words_;
};

/**
 * System state of the explicit model: the read-access matrix N and the
 * write-access matrix W.
 */
struct State {
  AccessMatrix read;
  AccessMatrix write;

  State() = default;
  State(AccessMatrix n, AccessMatrix w)
      : read(std::move(n)), write(std::move(w)) {}

  /// The initial state (empty N, empty W).
  static State initial(const Policy& policy);

  bool operator==(const State&) const = default;
  std::strong_ordering operator<=>(const State& other) const;

  std::size_t hash() const;
};

std::string format_access(const Policy& policy, const Access& a);
std::string format_matrix(const Policy& policy, const AccessMatrix& m);

/// Renders as `N={(s0,o1),(s0,o2)} W={}`; parse_state() reads it back.
std::string format_state(const Policy& policy, const State& state);

}  // namespace cwall

template <>
struct std::hash<cwall::AccessMatrix> {
  std::size_t operator()(const cwall::AccessMatrix& m) const noexcept {
    return m.hash();
  }
};

template <>
struct std::hash<cwall::State> {
  std::size_t operator()(const cwall::State& s) const noexcept {
    return s.hash();
  }
};

#endif  // CWALL_STATE_HH_
