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

#include "folkrec/evaluation.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>

#include <fmt/format.h>

#include "folkrec/errors.hpp"

namespace folkrec {

namespace {

void check_k(std::size_t k) {
  if (k == 0) throw BadParam("k must be at least 1");
}

std::vector<std::string> ranking_tags(const Ranking& r, std::size_t k) {
  std::vector<std::string> out;
  const auto n = std::min(k, r.size());
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.push_back(r[i].tag);
  return out;
}

// Runs fn(i) for i in [0, n) on up to `threads` workers. Each index is
// processed exactly once; the first exception is rethrown.
template <typename Fn>
void parallel_for(std::size_t n, unsigned threads, Fn fn) {
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(n)));
  if (threads <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (unsigned w = 0; w < threads; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (std::size_t i = w; i < n; i += threads) fn(i);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace

double f1_score(double precision, double recall) {
  if (precision + recall == 0.0) return 0.0;
  return 2.0 * precision * recall / (precision + recall);
}

double ndcg_at_k(std::span<const std::string> recommended, const TagSet& relevant,
                 std::size_t k) {
  if (relevant.empty()) throw EmptyRelevantSet();
  check_k(k);
  double dcg = 0.0;
  const auto depth = std::min(k, recommended.size());
  for (std::size_t i = 0; i < depth; ++i) {
    if (relevant.contains(recommended[i])) dcg += 1.0 / std::log2(static_cast<double>(i + 2));
  }
  double idcg = 0.0;
  const auto ideal = std::min(k, relevant.size());
  for (std::size_t i = 0; i < ideal; ++i) idcg += 1.0 / std::log2(static_cast<double>(i + 2));
  return dcg / idcg;
}

double ndcg_at_k(const Ranking& recommended, const TagSet& relevant, std::size_t k) {
  const auto tags = ranking_tags(recommended, k);
  return ndcg_at_k(tags, relevant, k);
}

SetMetrics set_metrics_at_k(std::span<const std::string> recommended,
                            const TagSet& relevant, std::size_t k) {
  if (relevant.empty()) throw EmptyRelevantSet();
  check_k(k);
  const auto depth = std::min(k, recommended.size());
  std::size_t hits = 0;
  for (std::size_t i = 0; i < depth; ++i) hits += relevant.contains(recommended[i]) ? 1 : 0;
  SetMetrics m;
  if (depth > 0) m.precision = static_cast<double>(hits) / static_cast<double>(depth);
  m.recall = static_cast<double>(hits) / static_cast<double>(relevant.size());
  m.f1 = f1_score(m.precision, m.recall);
  return m;
}

SetMetrics set_metrics_at_k(const Ranking& recommended, const TagSet& relevant,
                            std::size_t k) {
  const auto tags = ranking_tags(recommended, k);
  return set_metrics_at_k(tags, relevant, k);
}

unsigned default_thread_count() {
  unsigned n = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("FOLKREC_THREADS")) {
    char* end = nullptr;
    const long cap = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && cap >= 1) n = std::min(n, static_cast<unsigned>(cap));
  }
  return n;
}

EvalReport evaluate(const SplitPair& split, std::span<const RecommenderConfig> algorithms,
                    std::size_t k, const EvalOptions& options) {
  check_k(k);
  if (split.test.empty()) throw NoTestPosts();
  const unsigned threads = options.threads ? options.threads : default_thread_count();

  std::vector<TagSet> relevant;
  relevant.reserve(split.test.size());
  for (const PostRecord& post : split.test) {
    relevant.emplace_back(post.tags.begin(), post.tags.end());
  }

  EvalReport report;
  std::vector<MetricSet> per_post(split.test.size());
  for (const RecommenderConfig& config : algorithms) {
    const auto start = std::chrono::steady_clock::now();
    const auto recommender = make_recommender(config, split.train);
    parallel_for(split.test.size(), threads, [&](std::size_t i) {
      const PostRecord& post = split.test[i];
      const Ranking ranking =
          recommender->recommend({post.user, post.resource, post.timestamp}).top(k);
      const auto tags = ranking.tags();
      const auto set = set_metrics_at_k(tags, relevant[i], k);
      per_post[i] = {ndcg_at_k(tags, relevant[i], k), set.precision, set.recall, set.f1, k};
    });

    // Fixed summation order keeps the averages independent of scheduling.
    MetricSet sum;
    for (const MetricSet& m : per_post) {
      sum.ndcg += m.ndcg;
      sum.precision += m.precision;
      sum.recall += m.recall;
      sum.f1 += m.f1;
    }
    const auto n = static_cast<double>(per_post.size());
    EvalRow row;
    row.algorithm = config.name();
    row.metrics = {sum.ndcg / n, sum.precision / n, sum.recall / n, sum.f1 / n, k};
    row.n_test_posts = per_post.size();
    row.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    report.rows.push_back(std::move(row));
  }
  return report;
}

std::string render_report(const EvalReport& report, ReportFormat format) {
  if (report.rows.empty()) throw BadParam("cannot render an empty report");
  std::string out;
  if (format == ReportFormat::kCsv) {
    out += "algorithm,metric,k,value\n";
    for (const EvalRow& row : report.rows) {
      const auto& m = row.metrics;
      out += fmt::format("{},ndcg,{},{:.6f}\n", row.algorithm, m.k, m.ndcg);
      out += fmt::format("{},precision,{},{:.6f}\n", row.algorithm, m.k, m.precision);
      out += fmt::format("{},recall,{},{:.6f}\n", row.algorithm, m.k, m.recall);
      out += fmt::format("{},f1,{},{:.6f}\n", row.algorithm, m.k, m.f1);
    }
    return out;
  }
  const auto k = report.rows.front().metrics.k;
  const std::string ndcg = fmt::format("nDCG@{}", k);
  const std::string p = fmt::format("P@{}", k);
  const std::string r = fmt::format("R@{}", k);
  const std::string f1 = fmt::format("F1@{}", k);
  out += fmt::format("{:<10} {:>8} {:>8} {:>8} {:>8} {:>8} {:>9}\n", "algorithm", ndcg, p, r,
                     f1, "posts", "time(s)");
  for (const EvalRow& row : report.rows) {
    const auto& m = row.metrics;
    out += fmt::format("{:<10} {:>8.3f} {:>8.3f} {:>8.3f} {:>8.3f} {:>8} {:>9.2f}\n",
                       row.algorithm, m.ndcg, m.precision, m.recall, m.f1, row.n_test_posts,
                       row.wall_seconds);
  }
  return out;
}

}  // namespace folkrec
