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
#include <set>
#include <span>
#include <string>
#include <vector>

#include "folkrec/folksonomy.hpp"
#include "folkrec/ranking.hpp"
#include "folkrec/recommenders.hpp"

namespace folkrec {

using TagSet = std::set<std::string, std::less<>>;

struct SetMetrics {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

struct MetricSet {
  double ndcg = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::size_t k = 0;
};

// Binary-relevance nDCG over the first k recommended tags, with the ideal
// DCG truncated at min(k, |relevant|).
double ndcg_at_k(std::span<const std::string> recommended, const TagSet& relevant,
                 std::size_t k);
double ndcg_at_k(const Ranking& recommended, const TagSet& relevant, std::size_t k);

// Precision divides by min(k, len(recommended)), so a short list is not
// penalized for its length.
SetMetrics set_metrics_at_k(std::span<const std::string> recommended,
                            const TagSet& relevant, std::size_t k);
SetMetrics set_metrics_at_k(const Ranking& recommended, const TagSet& relevant,
                            std::size_t k);

double f1_score(double precision, double recall);

struct EvalRow {
  std::string algorithm;
  MetricSet metrics;
  std::size_t n_test_posts = 0;
  double wall_seconds = 0.0;
};

struct EvalReport {
  std::vector<EvalRow> rows;
};

struct EvalOptions {
  // 0 picks FOLKREC_THREADS or the hardware concurrency.
  unsigned threads = 0;
};

unsigned default_thread_count();

// Scores every configured algorithm on every test post, querying with the
// post's user, resource and timestamp against the train side only.
EvalReport evaluate(const SplitPair& split, std::span<const RecommenderConfig> algorithms,
                    std::size_t k, const EvalOptions& options = {});

enum class ReportFormat { kTable, kCsv };

std::string render_report(const EvalReport& report, ReportFormat format);

}  // namespace folkrec
