// Copyright 2026 The folkrec Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "folkrec/ranking.hpp"

#include <algorithm>
#include <cmath>

#include "folkrec/errors.hpp"

namespace folkrec {

Ranking Ranking::from_scores(std::vector<RankedTag> entries) {
  for (const RankedTag& e : entries) {
    if (!std::isfinite(e.score)) {
      throw BadParam("non-finite score for tag '" + e.tag + "'");
    }
  }
  std::sort(entries.begin(), entries.end(),
            [](const RankedTag& a, const RankedTag& b) {
              if (a.score != b.score) return a.score > b.score;
              return a.tag < b.tag;
            });
  std::vector<const std::string*> names;
  names.reserve(entries.size());
  for (const RankedTag& e : entries) names.push_back(&e.tag);
  std::sort(names.begin(), names.end(),
            [](const std::string* a, const std::string* b) { return *a < *b; });
  for (std::size_t i = 1; i < names.size(); ++i) {
    if (*names[i] == *names[i - 1]) {
      throw BadParam("duplicate tag '" + *names[i] + "' in ranking");
    }
  }
  Ranking r;
  r.entries_ = std::move(entries);
  return r;
}

Ranking Ranking::top(std::size_t k) const {
  Ranking r;
  r.entries_.assign(entries_.begin(),
                    entries_.begin() + static_cast<std::ptrdiff_t>(std::min(k, entries_.size())));
  return r;
}

std::vector<std::string> Ranking::tags() const {
  std::vector<std::string> out;
  out.reserve(entries_.size());
  for (const RankedTag& e : entries_) out.push_back(e.tag);
  return out;
}

Ranking rank_tags(const Folksonomy& f, TagScores scores) {
  std::sort(scores.begin(), scores.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  std::vector<RankedTag> entries;
  entries.reserve(scores.size());
  for (const auto& [tag, score] : scores) {
    entries.push_back({f.name(tag), score});
  }
  // Already in ranking order; from_scores re-validates.
  return Ranking::from_scores(std::move(entries));
}

}  // namespace folkrec
