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

#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "folkrec/folksonomy.hpp"

namespace folkrec {

struct RankedTag {
  std::string tag;
  double score = 0.0;

  friend bool operator==(const RankedTag&, const RankedTag&) = default;
};

// Tags ordered by descending score, ties broken by ascending tag. Scores are
// finite and tags unique.
class Ranking {
 public:
  Ranking() = default;

  // Sorts the entries into ranking order. Throws BadParam on duplicate tags
  // or non-finite scores.
  static Ranking from_scores(std::vector<RankedTag> entries);

  std::span<const RankedTag> entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  const RankedTag& operator[](std::size_t i) const { return entries_[i]; }

  Ranking top(std::size_t k) const;
  std::vector<std::string> tags() const;

  friend bool operator==(const Ranking&, const Ranking&) = default;

 private:
  std::vector<RankedTag> entries_;
};

// Scores keyed by interned tag id, ascending by id.
using TagScores = std::vector<std::pair<TagId, double>>;

// Builds a Ranking from id-keyed scores. Tag ids follow name order, so the
// id tie-break is the lexicographic one.
Ranking rank_tags(const Folksonomy& f, TagScores scores);

}  // namespace folkrec
