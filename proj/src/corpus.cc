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

#include "cwall/corpus.hh"

#include <algorithm>
#include <functional>
#include <map>
#include <set>

namespace cwall {

std::string policy_signature(const Policy& policy) {
  std::size_t sanitized = 0;
  std::map<CoicId, std::map<DatasetId, std::size_t>> sizes;
  for (std::uint32_t o = 0; o < policy.object_count(); ++o) {
    const ObjectId id{o};
    if (policy.is_sanitized(id)) {
      ++sanitized;
    } else {
      ++sizes[policy.coi(id)][policy.ds(id)];
    }
  }
  std::vector<std::vector<std::size_t>> groups;
  for (const auto& [c, ds] : sizes) {
    std::vector<std::size_t> g;
    for (const auto& [d, n] : ds) g.push_back(n);
    std::sort(g.rbegin(), g.rend());
    groups.push_back(std::move(g));
  }
  std::sort(groups.begin(), groups.end());
  std::string out = "S" + std::to_string(policy.subject_count()) + " B" +
                    std::to_string(sanitized);
  for (const auto& g : groups) {
    out += " [";
    for (std::size_t i = 0; i < g.size(); ++i) {
      if (i) out += ',';
      out += std::to_string(g[i]);
    }
    out += ']';
  }
  return out;
}

std::vector<Policy> policy_corpus(const CorpusOptions& options) {
  std::vector<Policy> out;
  std::set<std::string> seen;
  const auto datasets = options.max_datasets;
  for (std::size_t subjects = 1; subjects <= options.max_subjects; ++subjects) {
    for (std::size_t objects = 1; objects <= options.max_objects; ++objects) {
      // choice[o] == datasets means sanitized; otherwise the dataset index.
      std::vector<std::size_t> choice(objects, 0);
      std::vector<std::size_t> home(datasets, 0);
      std::function<void(std::size_t)> pick_home;
      std::function<void(std::size_t)> pick_object = [&](std::size_t i) {
        if (i == objects) {
          pick_home(0);
          return;
        }
        for (std::size_t c = 0; c <= datasets; ++c) {
          choice[i] = c;
          pick_object(i + 1);
        }
      };
      pick_home = [&](std::size_t d) {
        if (d < datasets) {
          for (std::size_t c = 0; c < options.max_coics; ++c) {
            home[d] = c;
            pick_home(d + 1);
          }
          return;
        }
        RawPolicy raw;
        for (std::size_t s = 0; s < subjects; ++s) {
          raw.subjects.push_back("s" + std::to_string(s));
        }
        // Objects ordered by CoIC, then dataset, sanitized last, so that
        // names come out the same for every representative.
        std::vector<std::pair<std::size_t, std::size_t>> keys;
        for (auto c : choice) {
          keys.emplace_back(c == datasets ? options.max_coics : home[c], c);
        }
        std::sort(keys.begin(), keys.end());
        std::map<std::size_t, std::string> coic_names;
        std::map<std::size_t, std::string> dataset_names;
        for (std::size_t o = 0; o < keys.size(); ++o) {
          RawObject obj{"o" + std::to_string(o), std::nullopt};
          const auto [c, d] = keys[o];
          if (d == datasets) {
            obj.label = RawLabel{raw.sanitized_coic, raw.sanitized_dataset};
          } else {
            auto& cn = coic_names[c];
            if (cn.empty()) cn = "c" + std::to_string(coic_names.size() - 1);
            auto& dn = dataset_names[d];
            if (dn.empty()) dn = "d" + std::to_string(dataset_names.size() - 1);
            obj.label = RawLabel{cn, dn};
          }
          raw.objects.push_back(std::move(obj));
        }
        Policy p = validate_policy(raw);
        if (seen.insert(policy_signature(p)).second) out.push_back(std::move(p));
      };
      pick_object(0);
    }
  }
  return out;
}

std::vector<Policy> micro_corpus() {
  return policy_corpus({2, 3, 3, 2});
}

}  // namespace cwall
