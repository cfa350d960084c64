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
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "folkrec/folksonomy.hpp"
#include "folkrec/ranking.hpp"

namespace folkrec {

inline constexpr double kDefaultMixBeta = 0.5;
inline constexpr std::size_t kDefaultNeighbors = 20;

// Base-level learning plus associative context, mixed with resource
// popularity.
struct ActrParams {
  double decay = 0.5;
  double beta = kDefaultMixBeta;
  std::int64_t min_lag = 1;  // seconds

  void validate() const;
};

struct FolkrankParams {
  double spread_lambda = 0.7;
  double tolerance = 1e-8;
  int max_iter = 200;
  // Extra preference mass on the query user and resource. Unset means the
  // number of graph nodes.
  std::optional<double> preference_boost;

  void validate() const;
};

// Frequency times exponential recency. This is a stand-in for GIRPTM, not a
// reimplementation of it.
struct GirptmParams {
  double recency_tau = 2'419'200.0;  // 28 days
  double beta = kDefaultMixBeta;

  void validate() const;
};

// Max-subtracted softmax. Throws EmptyInput on an empty map.
std::map<std::string, double> normalize_softmax(
    const std::map<std::string, double>& scores);

// Convex combination of two score components: beta * user + (1 - beta) *
// resource, a missing entry counting as 0. A component whose weight is 0
// contributes no candidates.
std::map<std::string, double> mix_components(
    const std::map<std::string, double>& user_component,
    const std::map<std::string, double>& resource_component, double beta);

// Most popular tags of a resource / user. Scores are relative frequencies
// over the entity's posts; unknown entities give an empty ranking.
Ranking mp_r(const Folksonomy& train, std::string_view resource);
Ranking mp_u(const Folksonomy& train, std::string_view user);
Ranking mp_ur(const Folksonomy& train, std::string_view user,
              std::string_view resource, double beta = kDefaultMixBeta);

struct Neighbor {
  std::string user;
  double similarity = 0.0;

  friend bool operator==(const Neighbor&, const Neighbor&) = default;
};

// Cosine similarity over binary user-tag incidence. Up to n users with
// similarity > 0, by (similarity desc, user asc).
std::vector<Neighbor> cf_neighbors(const Folksonomy& train, std::string_view user,
                                   std::size_t n);
Ranking cf_recommend(const Folksonomy& train, std::string_view user,
                     std::string_view resource, std::size_t n = kDefaultNeighbors);

// B(t) = ln sum_j max(min_lag, t_ref - t_j)^-d over the user's usages of t.
std::map<std::string, double> bll_activation(const Folksonomy& train,
                                             std::string_view user,
                                             const ActrParams& params,
                                             std::int64_t t_ref);
// Mean P(tag | cue) over the resource's train tags; 0 for untagged resources.
double associative_activation(const Folksonomy& train, std::string_view resource,
                              std::string_view tag);
Ranking actr_recommend(const Folksonomy& train, std::string_view user,
                       std::string_view resource, const ActrParams& params,
                       std::int64_t t_ref);

Ranking girptm_recommend(const Folksonomy& train, std::string_view user,
                         std::string_view resource, const GirptmParams& params,
                         std::int64_t t_ref);

// ---------------------------------------------------------------------------
// Uniform interface used by the evaluation harness and the CLI.

enum class Algorithm { kMpr, kMpur, kCf, kFolkrank, kGirptm, kActr };

std::string_view algorithm_name(Algorithm a);
std::optional<Algorithm> parse_algorithm(std::string_view name);
std::vector<std::string_view> algorithm_names();

struct RecommenderConfig {
  Algorithm algorithm = Algorithm::kActr;
  double mp_beta = kDefaultMixBeta;
  std::size_t neighbors = kDefaultNeighbors;
  ActrParams actr;
  FolkrankParams folkrank;
  GirptmParams girptm;

  std::string name() const { return std::string(algorithm_name(algorithm)); }
};

struct Query {
  std::string_view user;
  std::string_view resource;
  std::int64_t timestamp = 0;  // reference time for time-aware algorithms
};

class Recommender {
 public:
  virtual ~Recommender() = default;
  virtual Ranking recommend(const Query& query) const = 0;
};

// Binds a configuration to a train folksonomy, which must outlive the
// returned object. recommend() is safe to call concurrently.
std::unique_ptr<Recommender> make_recommender(const RecommenderConfig& config,
                                              const Folksonomy& train);

}  // namespace folkrec
