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

#include "folkrec/recommenders.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <unordered_map>

#include "folkrec/errors.hpp"
#include "folkrec/folkrank.hpp"

namespace folkrec {

namespace {

constexpr std::array<std::pair<Algorithm, std::string_view>, 6> kAlgorithms{{
    {Algorithm::kMpr, "mpr"},
    {Algorithm::kMpur, "mpur"},
    {Algorithm::kCf, "cf"},
    {Algorithm::kFolkrank, "folkrank"},
    {Algorithm::kGirptm, "girptm"},
    {Algorithm::kActr, "actr"},
}};

void check_beta(double beta) {
  if (!(beta >= 0.0 && beta <= 1.0)) {
    throw BadParam("beta must lie in [0, 1]");
  }
}

TagScores relative_frequency(std::span<const TagCount> counts) {
  double total = 0.0;
  for (const TagCount& c : counts) total += c.count;
  TagScores out;
  if (total == 0.0) return out;
  out.reserve(counts.size());
  for (const TagCount& c : counts) {
    out.emplace_back(c.tag, static_cast<double>(c.count) / total);
  }
  return out;
}

TagScores raw_counts(std::span<const TagCount> counts) {
  TagScores out;
  out.reserve(counts.size());
  for (const TagCount& c : counts) out.emplace_back(c.tag, c.count);
  return out;
}

template <typename Range, typename Get>
void softmax_inplace(Range& values, Get get) {
  double max = -INFINITY;
  for (auto& v : values) max = std::max(max, get(v));
  double sum = 0.0;
  for (auto& v : values) {
    get(v) = std::exp(get(v) - max);
    sum += get(v);
  }
  for (auto& v : values) get(v) /= sum;
}

void softmax_inplace(TagScores& scores) {
  softmax_inplace(scores, [](auto& p) -> double& { return p.second; });
}

// Merges two id-sorted components. A component with zero weight adds no
// candidates of its own.
TagScores mix(const TagScores& user, const TagScores& resource, double beta) {
  static const TagScores kNone;
  const TagScores& a = beta > 0.0 ? user : kNone;
  const TagScores& b = beta < 1.0 ? resource : kNone;
  TagScores out;
  out.reserve(a.size() + b.size());
  std::size_t i = 0, j = 0;
  while (i < a.size() || j < b.size()) {
    if (j == b.size() || (i < a.size() && a[i].first < b[j].first)) {
      out.emplace_back(a[i].first, beta * a[i].second + (1.0 - beta) * 0.0);
      ++i;
    } else if (i == a.size() || b[j].first < a[i].first) {
      out.emplace_back(b[j].first, beta * 0.0 + (1.0 - beta) * b[j].second);
      ++j;
    } else {
      out.emplace_back(a[i].first, beta * a[i].second + (1.0 - beta) * b[j].second);
      ++i;
      ++j;
    }
  }
  return out;
}

std::span<const TagCount> user_counts(const Folksonomy& f, std::optional<UserId> u) {
  return u ? f.user_tag_counts(*u) : std::span<const TagCount>{};
}

std::span<const TagCount> resource_counts(const Folksonomy& f,
                                          std::optional<ResourceId> r) {
  return r ? f.resource_tag_counts(*r) : std::span<const TagCount>{};
}

TagScores bll(const Folksonomy& f, UserId u, const ActrParams& params,
              std::int64_t t_ref) {
  TagScores out;
  for (const TagEvents& ev : f.user_tag_events(u)) {
    double sum = 0.0;
    for (std::int64_t t : ev.times) {
      const auto lag = std::max(params.min_lag, t_ref - t);
      sum += std::pow(static_cast<double>(lag), -params.decay);
    }
    out.emplace_back(ev.tag, std::log(sum));
  }
  return out;
}

double associative(const Folksonomy& f, std::span<const TagCount> cues, TagId t) {
  if (cues.empty()) return 0.0;
  const double weight = 1.0 / static_cast<double>(cues.size());
  double sum = 0.0;
  for (const TagCount& c : cues) sum += weight * cooccurrence_prob(f, c.tag, t);
  return sum;
}

Ranking mp_ur_ids(const Folksonomy& f, std::optional<UserId> u,
                  std::optional<ResourceId> r, double beta) {
  check_beta(beta);
  return rank_tags(f, mix(relative_frequency(user_counts(f, u)),
                          relative_frequency(resource_counts(f, r)), beta));
}

Ranking actr_ids(const Folksonomy& f, std::optional<UserId> u,
                 std::optional<ResourceId> r, const ActrParams& params,
                 std::int64_t t_ref) {
  params.validate();
  const auto cues = resource_counts(f, r);
  TagScores user = u ? bll(f, *u, params, t_ref) : TagScores{};
  if (user.empty() && cues.empty()) throw EmptyCandidates();
  for (auto& [tag, activation] : user) activation += associative(f, cues, tag);
  if (!user.empty()) softmax_inplace(user);
  TagScores resource = raw_counts(cues);
  if (!resource.empty()) softmax_inplace(resource);
  return rank_tags(f, mix(user, resource, params.beta));
}

Ranking girptm_ids(const Folksonomy& f, std::optional<UserId> u,
                   std::optional<ResourceId> r, const GirptmParams& params,
                   std::int64_t t_ref) {
  params.validate();
  const auto cues = resource_counts(f, r);
  TagScores user;
  if (u) {
    for (const TagEvents& ev : f.user_tag_events(*u)) {
      const auto freq = static_cast<double>(ev.times.size());
      const auto age = static_cast<double>(std::max<std::int64_t>(0, t_ref - ev.times.back()));
      user.emplace_back(ev.tag, std::log(1.0 + freq) * std::exp(-age / params.recency_tau));
    }
  }
  if (user.empty() && cues.empty()) throw EmptyCandidates();
  if (!user.empty()) softmax_inplace(user);
  TagScores resource = raw_counts(cues);
  if (!resource.empty()) softmax_inplace(resource);
  return rank_tags(f, mix(user, resource, params.beta));
}

std::vector<std::pair<UserId, double>> neighbors_ids(const Folksonomy& f, UserId u,
                                                     std::size_t n) {
  const auto profile = f.user_tag_counts(u);
  std::unordered_map<std::uint32_t, std::uint32_t> overlap;
  for (const TagCount& c : profile) {
    for (UserId v : f.tag_users(c.tag)) {
      if (v != u) ++overlap[static_cast<std::uint32_t>(v)];
    }
  }
  std::vector<std::pair<UserId, double>> out;
  out.reserve(overlap.size());
  const auto own = static_cast<double>(profile.size());
  for (const auto& [v, common] : overlap) {
    const auto other = static_cast<double>(f.user_tag_counts(UserId{v}).size());
    out.emplace_back(UserId{v}, common / std::sqrt(own * other));
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  if (out.size() > n) out.resize(n);
  return out;
}

Ranking cf_ids(const Folksonomy& f, std::optional<UserId> u,
               std::optional<ResourceId> r, std::size_t n) {
  if (u && r) {
    std::unordered_map<std::uint32_t, double> acc;
    for (const auto& [v, sim] : neighbors_ids(f, *u, n)) {
      const auto post = f.find_post(v, *r);
      if (!post) continue;
      for (TagId t : f.posts()[*post].tags) acc[static_cast<std::uint32_t>(t)] += sim;
    }
    TagScores scores;
    bool any_positive = false;
    for (const auto& [t, s] : acc) {
      scores.emplace_back(TagId{t}, s);
      any_positive = any_positive || s > 0.0;
    }
    if (any_positive) return rank_tags(f, std::move(scores));
  }
  return rank_tags(f, relative_frequency(resource_counts(f, r)));
}

std::map<std::string, double> to_map(const Folksonomy& f, const TagScores& s) {
  std::map<std::string, double> out;
  for (const auto& [tag, value] : s) out.emplace(f.name(tag), value);
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// Parameters

void ActrParams::validate() const {
  if (!(decay > 0.0) || !std::isfinite(decay)) throw BadParam("decay must be > 0");
  check_beta(beta);
  if (min_lag < 1) throw BadParam("min_lag must be at least 1 second");
}

void FolkrankParams::validate() const {
  if (!(spread_lambda > 0.0 && spread_lambda < 1.0)) {
    throw BadParam("lambda must lie in (0, 1)");
  }
  if (!(tolerance > 0.0)) throw BadParam("tolerance must be > 0");
  if (max_iter < 1) throw BadParam("max_iter must be at least 1");
  if (preference_boost && !(*preference_boost >= 0.0 && std::isfinite(*preference_boost))) {
    throw BadParam("preference boost must be a non-negative finite number");
  }
}

void GirptmParams::validate() const {
  if (!(recency_tau > 0.0) || !std::isfinite(recency_tau)) {
    throw BadParam("tau must be > 0");
  }
  check_beta(beta);
}

// ---------------------------------------------------------------------------
// Score plumbing

std::map<std::string, double> normalize_softmax(
    const std::map<std::string, double>& scores) {
  if (scores.empty()) throw EmptyInput();
  for (const auto& [tag, value] : scores) {
    if (!std::isfinite(value)) throw BadParam("non-finite score for tag '" + tag + "'");
  }
  std::map<std::string, double> out = scores;
  softmax_inplace(out, [](auto& p) -> double& { return p.second; });
  return out;
}

std::map<std::string, double> mix_components(
    const std::map<std::string, double>& user_component,
    const std::map<std::string, double>& resource_component, double beta) {
  check_beta(beta);
  std::map<std::string, double> out;
  if (beta > 0.0) {
    for (const auto& [tag, value] : user_component) out[tag] += beta * value;
  }
  if (beta < 1.0) {
    for (const auto& [tag, value] : resource_component) {
      out[tag] += (1.0 - beta) * value;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Popularity

Ranking mp_r(const Folksonomy& train, std::string_view resource) {
  return rank_tags(train, relative_frequency(
                              resource_counts(train, train.find_resource(resource))));
}

Ranking mp_u(const Folksonomy& train, std::string_view user) {
  return rank_tags(train,
                   relative_frequency(user_counts(train, train.find_user(user))));
}

Ranking mp_ur(const Folksonomy& train, std::string_view user,
              std::string_view resource, double beta) {
  return mp_ur_ids(train, train.find_user(user), train.find_resource(resource), beta);
}

// ---------------------------------------------------------------------------
// Collaborative filtering

std::vector<Neighbor> cf_neighbors(const Folksonomy& train, std::string_view user,
                                   std::size_t n) {
  std::vector<Neighbor> out;
  const auto u = train.find_user(user);
  if (!u) return out;
  for (const auto& [v, sim] : neighbors_ids(train, *u, n)) {
    out.push_back({train.name(v), sim});
  }
  return out;
}

Ranking cf_recommend(const Folksonomy& train, std::string_view user,
                     std::string_view resource, std::size_t n) {
  return cf_ids(train, train.find_user(user), train.find_resource(resource), n);
}

// ---------------------------------------------------------------------------
// ACT-R

std::map<std::string, double> bll_activation(const Folksonomy& train,
                                             std::string_view user,
                                             const ActrParams& params,
                                             std::int64_t t_ref) {
  params.validate();
  const auto u = train.find_user(user);
  if (!u) return {};
  return to_map(train, bll(train, *u, params, t_ref));
}

double associative_activation(const Folksonomy& train, std::string_view resource,
                              std::string_view tag) {
  const auto t = train.find_tag(tag);
  if (!t) return 0.0;
  return associative(train, resource_counts(train, train.find_resource(resource)), *t);
}

Ranking actr_recommend(const Folksonomy& train, std::string_view user,
                       std::string_view resource, const ActrParams& params,
                       std::int64_t t_ref) {
  return actr_ids(train, train.find_user(user), train.find_resource(resource), params,
                  t_ref);
}

Ranking girptm_recommend(const Folksonomy& train, std::string_view user,
                         std::string_view resource, const GirptmParams& params,
                         std::int64_t t_ref) {
  return girptm_ids(train, train.find_user(user), train.find_resource(resource),
                    params, t_ref);
}

// ---------------------------------------------------------------------------
// Harness interface

std::string_view algorithm_name(Algorithm a) {
  for (const auto& [alg, name] : kAlgorithms) {
    if (alg == a) return name;
  }
  return "unknown";
}

std::optional<Algorithm> parse_algorithm(std::string_view name) {
  for (const auto& [alg, n] : kAlgorithms) {
    if (n == name) return alg;
  }
  return std::nullopt;
}

std::vector<std::string_view> algorithm_names() {
  std::vector<std::string_view> out;
  for (const auto& entry : kAlgorithms) out.push_back(entry.second);
  return out;
}

namespace {

class MprRecommender final : public Recommender {
 public:
  explicit MprRecommender(const Folksonomy& train) : train_(train) {}
  Ranking recommend(const Query& q) const override { return mp_r(train_, q.resource); }

 private:
  const Folksonomy& train_;
};

class MpurRecommender final : public Recommender {
 public:
  MpurRecommender(const Folksonomy& train, double beta) : train_(train), beta_(beta) {
    check_beta(beta_);
  }
  Ranking recommend(const Query& q) const override {
    return mp_ur(train_, q.user, q.resource, beta_);
  }

 private:
  const Folksonomy& train_;
  double beta_;
};

class CfRecommender final : public Recommender {
 public:
  CfRecommender(const Folksonomy& train, std::size_t n) : train_(train), n_(n) {
    if (n_ == 0) throw BadParam("neighbors must be at least 1");
  }
  Ranking recommend(const Query& q) const override {
    return cf_recommend(train_, q.user, q.resource, n_);
  }

 private:
  const Folksonomy& train_;
  std::size_t n_;
};

class FolkrankRecommender final : public Recommender {
 public:
  FolkrankRecommender(const Folksonomy& train, const FolkrankParams& params)
      : ranker_(train, params) {}
  Ranking recommend(const Query& q) const override {
    return ranker_.recommend(q.user, q.resource);
  }

 private:
  FolkRanker ranker_;
};

class GirptmRecommender final : public Recommender {
 public:
  GirptmRecommender(const Folksonomy& train, const GirptmParams& params)
      : train_(train), params_(params) {
    params_.validate();
  }
  Ranking recommend(const Query& q) const override {
    return girptm_recommend(train_, q.user, q.resource, params_, q.timestamp);
  }

 private:
  const Folksonomy& train_;
  GirptmParams params_;
};

class ActrRecommender final : public Recommender {
 public:
  ActrRecommender(const Folksonomy& train, const ActrParams& params)
      : train_(train), params_(params) {
    params_.validate();
  }
  Ranking recommend(const Query& q) const override {
    return actr_recommend(train_, q.user, q.resource, params_, q.timestamp);
  }

 private:
  const Folksonomy& train_;
  ActrParams params_;
};

}  // namespace

std::unique_ptr<Recommender> make_recommender(const RecommenderConfig& config,
                                              const Folksonomy& train) {
  switch (config.algorithm) {
    case Algorithm::kMpr:
      return std::make_unique<MprRecommender>(train);
    case Algorithm::kMpur:
      return std::make_unique<MpurRecommender>(train, config.mp_beta);
    case Algorithm::kCf:
      return std::make_unique<CfRecommender>(train, config.neighbors);
    case Algorithm::kFolkrank:
      return std::make_unique<FolkrankRecommender>(train, config.folkrank);
    case Algorithm::kGirptm:
      return std::make_unique<GirptmRecommender>(train, config.girptm);
    case Algorithm::kActr:
      return std::make_unique<ActrRecommender>(train, config.actr);
  }
  throw BadParam("unknown algorithm");
}

}  // namespace folkrec
