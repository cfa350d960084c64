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

#include "folkrec/folkrank.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

namespace folkrec {

NoConvergence::NoConvergence(FolkrankResult result)
    : Error(fmt::format("weight spreading did not converge: {} iterations, residual {:.3e}",
                        result.iterations, result.residual)),
      result_(std::move(result)) {}

FolkGraph::FolkGraph(const Folksonomy& f)
    : n_users_(f.n_users()), n_resources_(f.n_resources()) {
  const std::size_t n = f.n_users() + f.n_resources() + f.n_tags();
  std::vector<std::vector<Edge>> adjacency(n);
  auto link = [&](std::size_t a, std::size_t b, double w) {
    adjacency[a].push_back({static_cast<std::uint32_t>(b), w});
    adjacency[b].push_back({static_cast<std::uint32_t>(a), w});
  };
  for (std::uint32_t u = 0; u < f.n_users(); ++u) {
    for (const TagCount& c : f.user_tag_counts(UserId{u})) {
      link(user_node(UserId{u}), tag_node(c.tag), c.count);
    }
  }
  for (std::uint32_t r = 0; r < f.n_resources(); ++r) {
    for (const TagCount& c : f.resource_tag_counts(ResourceId{r})) {
      link(resource_node(ResourceId{r}), tag_node(c.tag), c.count);
    }
  }
  for (const Post& p : f.posts()) link(user_node(p.user), resource_node(p.resource), 1.0);

  offsets_.assign(n + 1, 0);
  degree_.assign(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    auto& row = adjacency[i];
    std::sort(row.begin(), row.end(), [](const Edge& a, const Edge& b) { return a.to < b.to; });
    offsets_[i + 1] = offsets_[i] + row.size();
    for (const Edge& e : row) degree_[i] += e.weight;
  }
  edges_.reserve(offsets_[n]);
  for (auto& row : adjacency) edges_.insert(edges_.end(), row.begin(), row.end());
}

FolkrankResult FolkGraph::spread(std::span<const double> preference,
                                 const FolkrankParams& params) const {
  params.validate();
  const std::size_t n = size();
  if (preference.size() != n) throw BadParam("preference vector has the wrong size");
  double mass = 0.0;
  for (double p : preference) {
    if (!(p >= 0.0) || !std::isfinite(p)) throw BadParam("preference masses must be >= 0");
    mass += p;
  }
  if (mass <= 0.0) throw BadParam("preference masses are all zero");

  const double lambda = params.spread_lambda;
  std::vector<double> pref(n);
  for (std::size_t i = 0; i < n; ++i) pref[i] = (1.0 - lambda) * preference[i] / mass;

  FolkrankResult result;
  result.weights.assign(n, 1.0 / static_cast<double>(n));
  std::vector<double> scaled(n), next(n);
  for (result.iterations = 1; result.iterations <= params.max_iter; ++result.iterations) {
    for (std::size_t j = 0; j < n; ++j) {
      scaled[j] = degree_[j] > 0.0 ? result.weights[j] / degree_[j] : 0.0;
    }
    double residual = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double acc = 0.0;
      for (std::size_t e = offsets_[i]; e < offsets_[i + 1]; ++e) {
        acc += edges_[e].weight * scaled[edges_[e].to];
      }
      next[i] = lambda * acc + pref[i];
      residual += std::abs(next[i] - result.weights[i]);
    }
    result.weights.swap(next);
    result.residual = residual;
    if (residual < params.tolerance) return result;
  }
  result.iterations = params.max_iter;
  throw NoConvergence(std::move(result));
}

std::map<GraphNode, double> folkrank_weights(
    const Folksonomy& train, const std::map<GraphNode, double>& preference,
    const FolkrankParams& params) {
  const FolkGraph graph(train);
  std::vector<double> pref(graph.size(), 0.0);
  for (const auto& [node, mass] : preference) {
    std::optional<std::size_t> index;
    switch (node.kind) {
      case NodeKind::kUser:
        if (auto u = train.find_user(node.name)) index = graph.user_node(*u);
        break;
      case NodeKind::kResource:
        if (auto r = train.find_resource(node.name)) index = graph.resource_node(*r);
        break;
      case NodeKind::kTag:
        if (auto t = train.find_tag(node.name)) index = graph.tag_node(*t);
        break;
    }
    if (!index) throw BadParam("preference names a node outside the graph: " + node.name);
    pref[*index] = mass;
  }
  const auto result = graph.spread(pref, params);

  std::map<GraphNode, double> out;
  for (std::uint32_t u = 0; u < train.n_users(); ++u) {
    out.emplace(GraphNode{NodeKind::kUser, train.name(UserId{u})},
                result.weights[graph.user_node(UserId{u})]);
  }
  for (std::uint32_t r = 0; r < train.n_resources(); ++r) {
    out.emplace(GraphNode{NodeKind::kResource, train.name(ResourceId{r})},
                result.weights[graph.resource_node(ResourceId{r})]);
  }
  for (std::uint32_t t = 0; t < train.n_tags(); ++t) {
    out.emplace(GraphNode{NodeKind::kTag, train.name(TagId{t})},
                result.weights[graph.tag_node(TagId{t})]);
  }
  return out;
}

FolkRanker::FolkRanker(const Folksonomy& train, const FolkrankParams& params)
    : train_(train), params_(params), graph_(train) {
  params_.validate();
  if (graph_.size() > 0) {
    base_ = graph_.spread(std::vector<double>(graph_.size(), 1.0), params_).weights;
  }
}

Ranking FolkRanker::recommend(std::string_view user, std::string_view resource) const {
  const auto u = train_.find_user(user);
  const auto r = train_.find_resource(resource);
  if (graph_.size() == 0) return {};

  const double boost = params_.preference_boost.value_or(static_cast<double>(graph_.size()));
  std::vector<double> pref(graph_.size(), 1.0);
  if (u) pref[graph_.user_node(*u)] += boost;
  if (r) pref[graph_.resource_node(*r)] += boost;
  const auto weights = (u || r) && boost > 0.0 ? graph_.spread(pref, params_).weights : base_;

  // Candidates are the user's and the resource's tags; with neither known,
  // every tag is a candidate.
  std::vector<TagId> candidates;
  if (u) {
    for (const TagCount& c : train_.user_tag_counts(*u)) candidates.push_back(c.tag);
  }
  if (r) {
    for (const TagCount& c : train_.resource_tag_counts(*r)) candidates.push_back(c.tag);
  }
  if (candidates.empty()) {
    for (std::uint32_t t = 0; t < train_.n_tags(); ++t) candidates.push_back(TagId{t});
  }
  std::sort(candidates.begin(), candidates.end());
  candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());

  TagScores scores;
  scores.reserve(candidates.size());
  for (TagId t : candidates) {
    const auto node = graph_.tag_node(t);
    scores.emplace_back(t, weights[node] - base_[node]);
  }
  return rank_tags(train_, std::move(scores));
}

Ranking folkrank_recommend(const Folksonomy& train, std::string_view user,
                           std::string_view resource, const FolkrankParams& params) {
  return FolkRanker(train, params).recommend(user, resource);
}

}  // namespace folkrec
