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

#include <compare>
#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "folkrec/errors.hpp"
#include "folkrec/folksonomy.hpp"
#include "folkrec/ranking.hpp"
#include "folkrec/recommenders.hpp"

namespace folkrec {

enum class NodeKind { kUser, kResource, kTag };

struct GraphNode {
  NodeKind kind = NodeKind::kTag;
  std::string name;

  friend auto operator<=>(const GraphNode&, const GraphNode&) = default;
};

struct FolkrankResult {
  std::vector<double> weights;
  int iterations = 0;
  double residual = 0.0;  // L1 change of the final step
};

class NoConvergence : public Error {
 public:
  explicit NoConvergence(FolkrankResult result);
  // Weights after the last iteration; usable despite the error.
  const FolkrankResult& result() const { return result_; }

 private:
  FolkrankResult result_;
};

// Undirected tripartite graph over U, R and T. Edge weights: u-t by the
// number of posts where u used t, r-t by the number of posts assigning t to
// r, u-r by 1 per post. Node order is users, then resources, then tags, each
// in id order.
class FolkGraph {
 public:
  explicit FolkGraph(const Folksonomy& f);

  std::size_t size() const { return degree_.size(); }
  std::size_t user_node(UserId u) const { return index_of(u); }
  std::size_t resource_node(ResourceId r) const { return n_users_ + index_of(r); }
  std::size_t tag_node(TagId t) const { return n_users_ + n_resources_ + index_of(t); }

  // Weight spreading w <- lambda * A w + (1 - lambda) * p, A the column
  // normalized adjacency and p the preference rescaled to sum 1. Starts
  // from the uniform vector. Throws NoConvergence after max_iter steps.
  FolkrankResult spread(std::span<const double> preference,
                        const FolkrankParams& params) const;

 private:
  struct Edge {
    std::uint32_t to;
    double weight;
  };

  std::size_t n_users_ = 0;
  std::size_t n_resources_ = 0;
  std::vector<std::size_t> offsets_;
  std::vector<Edge> edges_;
  std::vector<double> degree_;
};

std::map<GraphNode, double> folkrank_weights(
    const Folksonomy& train, const std::map<GraphNode, double>& preference,
    const FolkrankParams& params);

// Ranks tags by w_pref(t) - w_base(t), the preference boosting the query
// user and resource.
class FolkRanker {
 public:
  FolkRanker(const Folksonomy& train, const FolkrankParams& params);

  Ranking recommend(std::string_view user, std::string_view resource) const;

 private:
  const Folksonomy& train_;
  FolkrankParams params_;
  FolkGraph graph_;
  std::vector<double> base_;
};

Ranking folkrank_recommend(const Folksonomy& train, std::string_view user,
                           std::string_view resource, const FolkrankParams& params);

}  // namespace folkrec
