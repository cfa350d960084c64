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

// Test-only data generators and reference oracles. Nothing here calls into
// the code paths it is used to check, except for reading Folksonomy
// accessors that expose the raw posts.

#include <cstdint>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "folkrec/folksonomy.hpp"

namespace folkrec::testing {

// Minimal post description used by the oracles.
struct PlainPost {
  std::string user;
  std::string resource;
  std::set<std::string> tags;
  std::int64_t timestamp = 0;

  friend auto operator<=>(const PlainPost&, const PlainPost&) = default;
};

std::vector<PlainPost> plain_posts(const Folksonomy& f);
Folksonomy build(const std::vector<PlainPost>& posts);

// Random folksonomy with up to `max_posts` posts over small entity pools,
// so that entities repeat and pruning has something to do.
std::vector<PlainPost> random_small_posts(std::mt19937_64& rng, std::size_t max_posts,
                                          std::size_t n_users = 4,
                                          std::size_t n_resources = 4,
                                          std::size_t n_tags = 5);

// Maximal subset of posts in which every user, resource and tag occurs in at
// least p posts, found by enumerating all 2^n subsets.
std::vector<PlainPost> brute_force_core(const std::vector<PlainPost>& posts,
                                        std::uint32_t p);

// Dense-matrix weight spreading over the tripartite graph built straight
// from the post list. Nodes are ordered users, resources, tags by name.
struct DenseGraph {
  std::vector<std::string> users, resources, tags;
  std::vector<std::vector<double>> adjacency;

  std::size_t size() const { return adjacency.size(); }
  std::size_t user(const std::string& name) const;
  std::size_t resource(const std::string& name) const;
  std::size_t tag(const std::string& name) const;
};

DenseGraph dense_graph(const std::vector<PlainPost>& posts);

struct DenseSpread {
  std::vector<double> weights;
  int iterations = 0;
};

DenseSpread dense_spread(const DenseGraph& g, const std::vector<double>& preference,
                         double lambda, double tolerance, int max_iter);

// Metric formulas evaluated directly from hit positions.
double oracle_ndcg(const std::vector<std::string>& recommended,
                   const std::set<std::string>& relevant, std::size_t k);
struct OracleSet {
  double precision, recall, f1;
};
OracleSet oracle_set_metrics(const std::vector<std::string>& recommended,
                             const std::set<std::string>& relevant, std::size_t k);

// Narrow folksonomy whose users draw tags Zipf-like from a personal
// vocabulary. The drift: a user's preferred region of that vocabulary
// slides forward as the user keeps posting, so the tags used most recently
// predict the next post better than lifetime frequencies. Most posts go to
// fresh resources (narrowness stays near 1.3); the rest revisit a popular
// resource and copy one of its intrinsic topic tags.
struct NarrowConfig {
  std::size_t n_users = 600;
  std::size_t min_posts = 8;
  std::size_t max_posts = 20;
  std::size_t vocabulary = 24;
  std::size_t global_tags = 3000;
  double zipf_exponent = 1.3;
  double drift_per_post = 0.6;  // vocabulary positions per post
  double revisit_probability = 0.25;
  std::size_t popular_resources = 400;
};

std::vector<TagAssignment> narrow_folksonomy(std::uint64_t seed,
                                             const NarrowConfig& config = {});

// Text TSV with `n_assignments` lines spread over `n_users` users.
std::string bulk_tsv(std::uint64_t seed, std::size_t n_assignments, std::size_t n_users);

}  // namespace folkrec::testing
