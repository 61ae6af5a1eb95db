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

// A deliberately naive restatement of the explicit rules over std::set,
// used as an oracle for the bitset engine.

#ifndef CWALL_TESTS_REFERENCE_MODEL_HH_
#define CWALL_TESTS_REFERENCE_MODEL_HH_

#include <set>
#include <utility>

#include "cwall/policy.hh"
#include "cwall/state.hh"
#include "cwall/transition.hh"

namespace cwall::reference {

using Pair = std::pair<std::uint32_t, std::uint32_t>;
using Rel = std::set<Pair>;

struct RefState {
  Rel n;
  Rel w;
  bool operator==(const RefState&) const = default;
  bool operator<(const RefState& o) const {
    return n != o.n ? n < o.n : w < o.w;
  }
};

inline Rel to_rel(const AccessMatrix& m) {
  Rel out;
  for (std::uint32_t s = 0; s < m.subjects(); ++s) {
    for (std::uint32_t o = 0; o < m.objects(); ++o) {
      if (m.contains(SubjectId{s}, ObjectId{o})) out.emplace(s, o);
    }
  }
  return out;
}

inline RefState to_ref(const State& st) {
  return {to_rel(st.read), to_rel(st.write)};
}

inline State from_ref(const Policy& p, const RefState& r) {
  State st = State::initial(p);
  for (auto [s, o] : r.n) st.read.insert(SubjectId{s}, ObjectId{o});
  for (auto [s, o] : r.w) st.write.insert(SubjectId{s}, ObjectId{o});
  return st;
}

inline bool bot(const Policy& p, std::uint32_t o) {
  return p.label(ObjectId{o}).dataset == p.sanitized_dataset();
}
inline std::uint32_t dsv(const Policy& p, std::uint32_t o) {
  return p.label(ObjectId{o}).dataset.value;
}
inline std::uint32_t coiv(const Policy& p, std::uint32_t o) {
  return p.label(ObjectId{o}).coic.value;
}

// Def. of simple security, quantified over every o' read by s.
inline bool ss(const Policy& p, std::uint32_t s, std::uint32_t o,
               const Rel& n) {
  for (auto [s2, o2] : n) {
    if (s2 == s && !(dsv(p, o2) == dsv(p, o) || coiv(p, o) != coiv(p, o2))) {
      return false;
    }
  }
  return true;
}

inline bool star(const Policy& p, std::uint32_t s, std::uint32_t o,
                 const Rel& n) {
  for (auto [s2, o2] : n) {
    if (s2 == s && !(dsv(p, o) == dsv(p, o2) || bot(p, o2))) return false;
  }
  return true;
}

inline Rel without_other_datasets(const Policy& p, const Rel& w,
                                  std::uint32_t s, std::uint32_t o) {
  Rel out;
  for (auto e : w) {
    if (e.first == s && dsv(p, e.second) != dsv(p, o)) continue;
    out.insert(e);
  }
  return out;
}

inline bool premise(const Policy& p, const RefState& x, const Request& r,
                    RuleId rule, bool allow_wk) {
  const auto s = r.subject.value;
  const auto o = r.object.value;
  const Pair so{s, o};
  const bool read = r.mode == Mode::kRead;
  switch (rule) {
    case RuleId::kMR:
      return read && x.n.contains(so);
    case RuleId::kMW:
      return r.mode == Mode::kWriteOnly && x.w.contains(so);
    case RuleId::kXRBot:
      return read && bot(p, o);
    case RuleId::kXRStar: {
      if (!read || !ss(p, s, o, x.n)) return false;
      for (auto [s2, o2] : x.w) {
        if (s2 == s && dsv(p, o2) != dsv(p, o)) return false;
      }
      return true;
    }
    case RuleId::kXR:
      return read && !bot(p, o) && ss(p, s, o, x.n) &&
             (r.consent_to_revoke ||
              without_other_datasets(p, x.w, s, o) == x.w);
    case RuleId::kXW:
      return r.mode == Mode::kWriteOnly && star(p, s, o, x.n);
    case RuleId::kXRW:
      return r.mode == Mode::kReadWrite && !bot(p, o) && star(p, s, o, x.n);
    case RuleId::kXRWBot: {
      if (r.mode != Mode::kReadWrite || !bot(p, o)) return false;
      for (auto [s2, o2] : x.n) {
        if (s2 == s && !bot(p, o2)) return false;
      }
      return true;
    }
    case RuleId::kWkRead:
      return allow_wk && read && !x.n.contains(so) && ss(p, s, o, x.n);
  }
  return false;
}

inline RefState effect(const Policy& p, const RefState& x, const Request& r,
                       RuleId rule) {
  const auto s = r.subject.value;
  const auto o = r.object.value;
  RefState y = x;
  switch (rule) {
    case RuleId::kMR:
    case RuleId::kMW:
      break;
    case RuleId::kXRBot:
    case RuleId::kXRStar:
    case RuleId::kWkRead:
      y.n.emplace(s, o);
      break;
    case RuleId::kXR:
      y.n.emplace(s, o);
      y.w = without_other_datasets(p, x.w, s, o);
      break;
    case RuleId::kXW:
      y.w.emplace(s, o);
      break;
    case RuleId::kXRW:
      y.n.emplace(s, o);
      y.w = without_other_datasets(p, x.w, s, o);
      y.w.emplace(s, o);
      break;
    case RuleId::kXRWBot:
      y.n.emplace(s, o);
      y.w.emplace(s, o);
      break;
  }
  return y;
}

}  // namespace cwall::reference

#endif  // CWALL_TESTS_REFERENCE_MODEL_HH_
