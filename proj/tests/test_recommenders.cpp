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

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include <fmt/format.h>

#include "folkrec/errors.hpp"
#include "folkrec/folksonomy.hpp"
#include "folkrec/recommenders.hpp"
#include "support/testing.hpp"

namespace folkrec {
namespace {

std::vector<std::string> tags_of(const Ranking& r) { return r.tags(); }

bool is_valid_ranking(const Ranking& r) {
  for (std::size_t i = 0; i < r.size(); ++i) {
    if (!std::isfinite(r[i].score)) return false;
    if (i == 0) continue;
    const auto& a = r[i - 1];
    const auto& b = r[i];
    if (a.score < b.score || (a.score == b.score && !(a.tag < b.tag))) return false;
  }
  auto tags = r.tags();
  std::sort(tags.begin(), tags.end());
  return std::adjacent_find(tags.begin(), tags.end()) == tags.end();
}

// ---------------------------------------------------------------------------

TEST(Ranking, SortsByScoreThenTag) {
  const auto r = Ranking::from_scores({{"b", 1.0}, {"a", 1.0}, {"c", 2.0}});
  EXPECT_EQ(r.tags(), (std::vector<std::string>{"c", "a", "b"}));
  EXPECT_EQ(r.top(2).tags(), (std::vector<std::string>{"c", "a"}));
  EXPECT_EQ(r.top(10).size(), 3u);
}

TEST(Ranking, RejectsDuplicatesAndNonFinite) {
  EXPECT_THROW(Ranking::from_scores({{"a", 1.0}, {"b", 0.0}, {"a", 0.5}}), BadParam);
  EXPECT_THROW(Ranking::from_scores({{"a", NAN}}), BadParam);
  EXPECT_THROW(Ranking::from_scores({{"a", INFINITY}}), BadParam);
}

// ---------------------------------------------------------------------------

TEST(NormalizeSoftmax, Examples) {
  const auto even = normalize_softmax({{"a", 0.0}, {"b", 0.0}});
  EXPECT_DOUBLE_EQ(even.at("a"), 0.5);
  EXPECT_DOUBLE_EQ(even.at("b"), 0.5);

  const auto skewed = normalize_softmax({{"a", std::log(2.0)}, {"b", 0.0}});
  EXPECT_NEAR(skewed.at("a"), 2.0 / 3.0, 1e-15);
  EXPECT_NEAR(skewed.at("b"), 1.0 / 3.0, 1e-15);

  EXPECT_THROW(normalize_softmax({}), EmptyInput);
}

TEST(NormalizeSoftmax, StableForLargeInputs) {
  const auto out = normalize_softmax({{"a", 1000.0}, {"b", 999.0}});
  EXPECT_NEAR(out.at("a") + out.at("b"), 1.0, 1e-12);
  EXPECT_GT(out.at("a"), out.at("b"));
}

TEST(NormalizeSoftmax, PreservesOrderAndSumsToOne) {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> value(-20.0, 20.0);
  std::uniform_int_distribution<int> size(1, 30);
  std::uniform_int_distribution<int> coarse(-5, 5);
  for (int trial = 0; trial < 500; ++trial) {
    std::map<std::string, double> in;
    const int n = size(rng);
    for (int i = 0; i < n; ++i) {
      // Half the trials use coarse values so ties occur.
      in[fmt::format("t{}", i)] = trial % 2 ? value(rng) : coarse(rng);
    }
    const auto out = normalize_softmax(in);
    double sum = 0.0;
    for (const auto& [tag, p] : out) {
      EXPECT_GT(p, 0.0);
      sum += p;
    }
    EXPECT_NEAR(sum, 1.0, 1e-9);
    std::vector<RankedTag> a, b;
    for (const auto& [tag, v] : in) a.push_back({tag, v});
    for (const auto& [tag, v] : out) b.push_back({tag, v});
    EXPECT_EQ(Ranking::from_scores(a).tags(), Ranking::from_scores(b).tags());
  }
}

TEST(MixComponents, ZeroWeightComponentAddsNoCandidates) {
  const std::map<std::string, double> user{{"rock", 1.0}};
  const std::map<std::string, double> res{{"pop", 1.0}};
  EXPECT_EQ(mix_components(user, res, 1.0), user);
  EXPECT_EQ(mix_components(user, res, 0.0), res);
  const auto half = mix_components(user, res, 0.5);
  EXPECT_DOUBLE_EQ(half.at("rock"), 0.5);
  EXPECT_DOUBLE_EQ(half.at("pop"), 0.5);
  EXPECT_THROW(mix_components(user, res, 1.5), BadParam);
}

// ---------------------------------------------------------------------------

const char* kPopularity =
    "u1\tr\trock\t1\n"
    "u2\tr\trock\t2\n"
    "u3\tr\trock\t3\n"
    "u3\tr\tpop\t3\n"
    "u1\ts\tpop\t4\n"
    "u2\ts\trock\t5\n"
    "fan\tx\tjazz\t1\n"
    "fan\ty\tjazz\t2\n"
    "fan\ty\trock\t2\n";

TEST(MostPopular, ResourceCounts) {
  const auto f = parse_dataset(kPopularity);
  EXPECT_EQ(tags_of(mp_r(f, "r")), (std::vector<std::string>{"rock", "pop"}));
  EXPECT_DOUBLE_EQ(mp_r(f, "r")[0].score, 0.75);
  EXPECT_TRUE(mp_r(f, "unseen").empty());
  // s: pop and rock once each.
  EXPECT_EQ(tags_of(mp_r(f, "s")), (std::vector<std::string>{"pop", "rock"}));
}

TEST(MostPopular, UserCounts) {
  const auto f = parse_dataset(kPopularity);
  EXPECT_EQ(tags_of(mp_u(f, "fan")), (std::vector<std::string>{"jazz", "rock"}));
  EXPECT_TRUE(mp_u(f, "nobody").empty());
  EXPECT_EQ(tags_of(mp_u(f, "u1")), (std::vector<std::string>{"pop", "rock"}));
}

TEST(MostPopular, MixedExample) {
  const auto f = parse_dataset("u\tx\trock\t1\nv\tr\tpop\t2\n");
  const auto r = mp_ur(f, "u", "r", 0.5);
  ASSERT_EQ(r.size(), 2u);
  EXPECT_EQ(r[0], (RankedTag{"pop", 0.5}));
  EXPECT_EQ(r[1], (RankedTag{"rock", 0.5}));
  EXPECT_THROW(mp_ur(f, "u", "r", -0.1), BadParam);
  EXPECT_THROW(mp_ur(f, "u", "r", 1.1), BadParam);
}

TEST(MostPopular, DegenerateMixesAreExact) {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 50; ++trial) {
    const auto f = testing::build(testing::random_small_posts(rng, 30, 5, 5, 6));
    for (const auto& u : f.user_names()) {
      for (const auto& r : f.resource_names()) {
        EXPECT_EQ(mp_ur(f, u, r, 1.0), mp_u(f, u));
        EXPECT_EQ(mp_ur(f, u, r, 0.0), mp_r(f, r));
      }
    }
  }
}

// ---------------------------------------------------------------------------

TEST(CfNeighbors, Examples) {
  const auto f = parse_dataset(
      "u\tr1\ta\t1\nu\tr1\tb\t1\n"
      "twin\tr2\ta\t1\ntwin\tr3\tb\t1\n"
      "half\tr4\ta\t1\n"
      "other\tr5\tz\t1\n");
  const auto n = cf_neighbors(f, "u", 10);
  ASSERT_EQ(n.size(), 2u);
  EXPECT_EQ(n[0].user, "twin");
  EXPECT_DOUBLE_EQ(n[0].similarity, 1.0);
  EXPECT_EQ(n[1].user, "half");
  EXPECT_NEAR(n[1].similarity, 0.7071067811865475, 1e-15);
  EXPECT_EQ(cf_neighbors(f, "u", 1).size(), 1u);
  EXPECT_TRUE(cf_neighbors(f, "ghost", 10).empty());
  EXPECT_TRUE(cf_neighbors(f, "other", 10).empty());
}

TEST(CfNeighbors, SymmetricAndBounded) {
  std::mt19937_64 rng(43);
  for (int trial = 0; trial < 40; ++trial) {
    const auto f = testing::build(testing::random_small_posts(rng, 40, 6, 6, 8));
    std::map<std::pair<std::string, std::string>, double> sim;
    for (const auto& u : f.user_names()) {
      for (const auto& nb : cf_neighbors(f, u, 100)) {
        EXPECT_GT(nb.similarity, 0.0);
        EXPECT_LE(nb.similarity, 1.0 + 1e-15);
        EXPECT_NE(nb.user, u);
        sim[{u, nb.user}] = nb.similarity;
      }
    }
    for (const auto& [key, s] : sim) {
      ASSERT_TRUE(sim.count({key.second, key.first}));
      EXPECT_EQ(s, sim.at({key.second, key.first}));
    }
  }
}

TEST(CfRecommend, SingleNeighbor) {
  const auto f = parse_dataset("u\tr1\tsoul\t1\nv\tr1\tsoul\t1\nv\tr\tfunk\t2\n");
  EXPECT_EQ(tags_of(cf_recommend(f, "u", "r", 20)), (std::vector<std::string>{"funk"}));
}

TEST(CfRecommend, FallsBackToResourcePopularity) {
  const auto f = parse_dataset("u\tr1\tsoul\t1\nv\tr1\tsoul\t1\nw\tr\tfunk\t2\n");
  EXPECT_EQ(cf_recommend(f, "u", "r", 20), mp_r(f, "r"));
  EXPECT_EQ(cf_recommend(f, "ghost", "r", 20), mp_r(f, "r"));
  EXPECT_TRUE(cf_recommend(f, "u", "nowhere", 20).empty());
}

TEST(CfRecommend, WeightedSumOverNeighbors) {
  // Profiles: u = {p1..p5}; v1 = {p1..p4, a} (cosine 4/5);
  // v2 = {p1..p5, a, b, q1..q13} (cosine 5/10).
  std::string tsv;
  for (int i = 1; i <= 5; ++i) tsv += fmt::format("u\tu_own\tp{}\t1\n", i);
  for (int i = 1; i <= 4; ++i) tsv += fmt::format("v1\tv1_own\tp{}\t1\n", i);
  tsv += "v1\tr\ta\t2\n";
  for (int i = 1; i <= 5; ++i) tsv += fmt::format("v2\tv2_own\tp{}\t1\n", i);
  for (int i = 1; i <= 13; ++i) tsv += fmt::format("v2\tv2_own\tq{}\t1\n", i);
  tsv += "v2\tr\ta\t2\nv2\tr\tb\t2\n";
  const auto f = parse_dataset(tsv);

  const auto n = cf_neighbors(f, "u", 20);
  ASSERT_EQ(n.size(), 2u);
  EXPECT_DOUBLE_EQ(n[0].similarity, 0.8);
  EXPECT_DOUBLE_EQ(n[1].similarity, 0.5);

  const auto r = cf_recommend(f, "u", "r", 20);
  ASSERT_EQ(r.size(), 2u);
  EXPECT_EQ(r[0].tag, "a");
  EXPECT_DOUBLE_EQ(r[0].score, 1.3);
  EXPECT_EQ(r[1].tag, "b");
  EXPECT_DOUBLE_EQ(r[1].score, 0.5);

  // With one neighbor only v1 counts.
  const auto one = cf_recommend(f, "u", "r", 1);
  ASSERT_EQ(one.size(), 1u);
  EXPECT_DOUBLE_EQ(one[0].score, 0.8);
}

// ---------------------------------------------------------------------------

TEST(BllActivation, SingleUsageAtMinimumLag) {
  const auto f = parse_dataset("u\tr\trock\t99\n");
  const auto b = bll_activation(f, "u", ActrParams{}, 100);
  ASSERT_EQ(b.size(), 1u);
  EXPECT_DOUBLE_EQ(b.at("rock"), 0.0);
}

TEST(BllActivation, PowerLawSum) {
  const auto f = parse_dataset("u\tr1\tpop\t100\nu\tr2\tpop\t200\n");
  const auto b = bll_activation(f, "u", ActrParams{}, 300);
  EXPECT_NEAR(b.at("pop"), -1.7677850962544752, 1e-12);
  EXPECT_NEAR(b.at("pop"), -1.7680, 1e-3);
}

TEST(BllActivation, ZeroLagIsClamped) {
  const auto f = parse_dataset("u\tr1\tpop\t300\nu\tr2\tpop\t200\n");
  const auto b = bll_activation(f, "u", ActrParams{}, 300);
  EXPECT_TRUE(std::isfinite(b.at("pop")));
  EXPECT_NEAR(b.at("pop"), std::log(1.0 + std::pow(100.0, -0.5)), 1e-12);
}

TEST(BllActivation, UnknownUserAndBadParams) {
  const auto f = parse_dataset("u\tr\trock\t1\n");
  EXPECT_TRUE(bll_activation(f, "ghost", ActrParams{}, 10).empty());
  EXPECT_THROW(bll_activation(f, "u", ActrParams{.decay = 0.0}, 10), BadParam);
  EXPECT_THROW(bll_activation(f, "u", ActrParams{.min_lag = 0}, 10), BadParam);
}

TEST(AssociativeActivation, Examples) {
  // Posts {a,b} and {a}: P(b|a) = 0.5.
  const auto f = parse_dataset(
      "v\tr\ta\t1\n"
      "w\tx\ta\t1\nw\tx\tb\t1\n"
      "w\ty\tc\t2\n");
  EXPECT_DOUBLE_EQ(associative_activation(f, "r", "b"), 0.5);
  EXPECT_DOUBLE_EQ(associative_activation(f, "r", "a"), 1.0);
  EXPECT_DOUBLE_EQ(associative_activation(f, "r", "c"), 0.0);
  EXPECT_DOUBLE_EQ(associative_activation(f, "new", "b"), 0.0);
  EXPECT_DOUBLE_EQ(associative_activation(f, "r", "unknown"), 0.0);
  // Cues {a, b} of x: (P(c|a) + P(c|b)) / 2 = 0; (P(b|a) + P(b|b)) / 2 = 0.75.
  EXPECT_DOUBLE_EQ(associative_activation(f, "x", "b"), 0.75);
}

// ---------------------------------------------------------------------------

// u used rock once at 299 and pop at 100 and 200; r carries {a, pop} from v.
// At t_ref = 300: B(rock) = 0, B(pop) = ln(200^-.5 + 100^-.5); the cues give
// rock 0 and pop (P(pop|a) + P(pop|pop)) / 2 = 1.
const char* kActr =
    "u\tx1\trock\t299\n"
    "u\tx2\tpop\t100\n"
    "u\tx3\tpop\t200\n"
    "v\tr\ta\t50\n"
    "v\tr\tpop\t50\n";

TEST(ActrRecommend, FullScoringChain) {
  const auto f = parse_dataset(kActr);
  const auto ranking = actr_recommend(f, "u", "r", ActrParams{}, 300);
  ASSERT_EQ(ranking.size(), 3u);
  // Values from a scalar evaluation of softmax and the 0.5 mix.
  EXPECT_EQ(ranking[0].tag, "pop");
  EXPECT_NEAR(ranking[0].score, 0.40847921453113964, 1e-12);
  EXPECT_EQ(ranking[1].tag, "rock");
  EXPECT_NEAR(ranking[1].score, 0.34152078546886033, 1e-12);
  EXPECT_EQ(ranking[2].tag, "a");
  EXPECT_NEAR(ranking[2].score, 0.25, 1e-12);
}

TEST(ActrRecommend, ScalarExampleThroughMixing) {
  // A = {rock: 0, pop: -0.7678}, single cue a on the resource.
  const double pop = std::log(std::pow(200.0, -0.5) + std::pow(100.0, -0.5)) + 1.0;
  const auto user = normalize_softmax({{"rock", 0.0}, {"pop", pop}});
  const auto res = normalize_softmax({{"a", 1.0}});
  const auto mixed = mix_components(user, res, 0.5);
  EXPECT_NEAR(mixed.at("rock"), 0.34152078546886033, 1e-12);
  EXPECT_NEAR(mixed.at("pop"), 0.15847921453113964, 1e-12);
  EXPECT_DOUBLE_EQ(mixed.at("a"), 0.5);
}

TEST(ActrRecommend, UserOnlyFollowsBaseLevel) {
  const auto f = parse_dataset(kActr);
  ActrParams params;
  params.beta = 1.0;
  const auto ranking = actr_recommend(f, "u", "fresh", params, 300);
  EXPECT_EQ(tags_of(ranking), (std::vector<std::string>{"rock", "pop"}));
}

TEST(ActrRecommend, ResourceOnlyFollowsPopularity) {
  const auto f = parse_dataset(kPopularity);
  ActrParams params;
  params.beta = 0.0;
  EXPECT_EQ(tags_of(actr_recommend(f, "fan", "r", params, 10)), tags_of(mp_r(f, "r")));
}

TEST(ActrRecommend, NoCandidates) {
  const auto f = parse_dataset(kActr);
  EXPECT_THROW(actr_recommend(f, "ghost", "nowhere", ActrParams{}, 300), EmptyCandidates);
  // New user on a known resource is fine.
  EXPECT_EQ(tags_of(actr_recommend(f, "ghost", "r", ActrParams{}, 300)),
            (std::vector<std::string>{"a", "pop"}));
}

// ---------------------------------------------------------------------------

TEST(GirptmRecommend, FrequencyTimesRecency) {
  GirptmParams params;
  params.beta = 1.0;
  const auto tau = static_cast<std::int64_t>(params.recency_tau);
  // x used twice, last exactly tau ago; y used once, at t_ref.
  const std::int64_t t_ref = 10 * tau;
  const auto f = parse_dataset(fmt::format("u\tr1\tx\t{}\nu\tr2\tx\t{}\nu\tr3\ty\t{}\n",
                                           t_ref - 2 * tau, t_ref - tau, t_ref));
  // g(x) = ln 3 / e, g(y) = ln 2, then softmax.
  const auto r = girptm_recommend(f, "u", "new", params, t_ref);
  ASSERT_EQ(r.size(), 2u);
  EXPECT_EQ(r[0].tag, "y");
  EXPECT_NEAR(r[0].score, 0.5717489251099348, 1e-12);
  EXPECT_EQ(r[1].tag, "x");
  EXPECT_NEAR(r[1].score, 0.4282510748900652, 1e-12);
}

TEST(GirptmRecommend, UnusedTagsComeOnlyFromTheResource) {
  const auto f = parse_dataset("u\tr1\tx\t1\nv\tr\tz\t1\n");
  GirptmParams params;
  params.beta = 1.0;
  EXPECT_EQ(tags_of(girptm_recommend(f, "u", "r", params, 5)),
            (std::vector<std::string>{"x"}));
  params.beta = 0.5;
  EXPECT_EQ(girptm_recommend(f, "u", "r", params, 5).size(), 2u);
  EXPECT_THROW(girptm_recommend(f, "ghost", "nowhere", params, 5), EmptyCandidates);
  EXPECT_THROW(girptm_recommend(f, "u", "r", GirptmParams{.recency_tau = 0.0}, 5), BadParam);
}

// ---------------------------------------------------------------------------

TEST(Recommenders, ValidAndDeterministicOnRandomInputs) {
  std::mt19937_64 rng(47);
  for (int trial = 0; trial < 20; ++trial) {
    const auto f = testing::build(testing::random_small_posts(rng, 30, 5, 6, 6));
    std::vector<std::string> users(f.user_names().begin(), f.user_names().end());
    std::vector<std::string> resources(f.resource_names().begin(), f.resource_names().end());
    users.push_back("ghost");
    resources.push_back("nowhere");
    for (const auto alg : {Algorithm::kMpr, Algorithm::kMpur, Algorithm::kCf,
                           Algorithm::kFolkrank, Algorithm::kGirptm, Algorithm::kActr}) {
      RecommenderConfig config;
      config.algorithm = alg;
      const auto rec = make_recommender(config, f);
      for (const auto& u : users) {
        for (const auto& r : resources) {
          const Query q{u, r, f.latest_timestamp()};
          Ranking first;
          try {
            first = rec->recommend(q);
          } catch (const EmptyCandidates&) {
            EXPECT_TRUE(u == "ghost" && r == "nowhere");
            continue;
          }
          EXPECT_TRUE(is_valid_ranking(first)) << config.name();
          EXPECT_EQ(rec->recommend(q), first) << config.name();
        }
      }
    }
  }
}

TEST(Recommenders, AlgorithmNames) {
  for (auto name : algorithm_names()) {
    const auto alg = parse_algorithm(name);
    ASSERT_TRUE(alg);
    EXPECT_EQ(algorithm_name(*alg), name);
  }
  EXPECT_FALSE(parse_algorithm("lda"));
  EXPECT_EQ(algorithm_names().size(), 6u);
}

}  // namespace
}  // namespace folkrec
