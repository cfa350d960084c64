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

#include "folkrec/cli.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "folkrec/errors.hpp"
#include "folkrec/evaluation.hpp"
#include "folkrec/folksonomy.hpp"
#include "folkrec/recommenders.hpp"

namespace folkrec {

namespace {

struct UsageError : Error {
  using Error::Error;
};

struct RunConfig {
  std::string input;
  std::string output;
  std::uint32_t p = 0;
  std::size_t k = 10;
  std::string algorithms = "mpr,mpur,cf,folkrank,girptm,actr";
  std::string recommend_algorithm = "actr";
  std::string user;
  std::string resource;
  std::optional<std::int64_t> timestamp;
  std::string format = "table";
  bool no_normalize = false;

  double beta = kDefaultMixBeta;
  double decay = ActrParams{}.decay;
  std::int64_t min_lag = ActrParams{}.min_lag;
  double tau = GirptmParams{}.recency_tau;
  double lambda = FolkrankParams{}.spread_lambda;
  std::optional<double> boost;
  std::size_t neighbors = kDefaultNeighbors;
};

const CLI::Validator kOpenUnit(
    [](std::string& s) -> std::string {
      double v = 0.0;
      if (!CLI::detail::lexical_cast(s, v) || !(v > 0.0 && v < 1.0)) {
        return "value " + s + " not in the open interval (0, 1)";
      }
      return {};
    },
    "(0,1)");

std::string valid_names() {
  std::string out;
  for (auto name : algorithm_names()) {
    if (!out.empty()) out += ", ";
    out += name;
  }
  return out;
}

std::vector<RecommenderConfig> resolve_algorithms(const RunConfig& rc,
                                                  const std::string& names) {
  std::vector<RecommenderConfig> configs;
  std::stringstream list(names);
  std::string name;
  while (std::getline(list, name, ',')) {
    const auto alg = parse_algorithm(name);
    if (!alg) {
      throw UsageError(fmt::format("--algo: unknown algorithm '{}' (valid: {})", name,
                                   valid_names()));
    }
    RecommenderConfig c;
    c.algorithm = *alg;
    c.mp_beta = rc.beta;
    c.neighbors = rc.neighbors;
    c.actr.beta = rc.beta;
    c.actr.decay = rc.decay;
    c.actr.min_lag = rc.min_lag;
    c.girptm.beta = rc.beta;
    c.girptm.recency_tau = rc.tau;
    c.folkrank.spread_lambda = rc.lambda;
    c.folkrank.preference_boost = rc.boost;
    configs.push_back(c);
  }
  if (configs.empty()) {
    throw UsageError(fmt::format("--algo: no algorithm given (valid: {})", valid_names()));
  }
  return configs;
}

ReportFormat resolve_format(const std::string& format) {
  return format == "csv" ? ReportFormat::kCsv : ReportFormat::kTable;
}

Folksonomy load(const RunConfig& rc, std::istream& in) {
  ParseOptions options;
  options.normalize_tags = !rc.no_normalize;
  if (rc.input == "-") return parse_dataset(in, options);
  std::ifstream file(rc.input, std::ios::binary);
  if (!file) throw DataError("--input: cannot open '" + rc.input + "'");
  return parse_dataset(file, options);
}

bool same_file(const std::string& a, const std::string& b) {
  std::error_code ec;
  return std::filesystem::exists(b, ec) && std::filesystem::equivalent(a, b, ec);
}

void write_file(const std::string& path, const std::string& input,
                const auto& write) {
  if (input != "-" && same_file(input, path)) {
    throw UsageError("--output: refusing to overwrite the input file '" + path + "'");
  }
  std::ofstream file(path, std::ios::binary);
  if (!file) throw DataError("--output: cannot write '" + path + "'");
  write(file);
  if (!file) throw DataError("--output: write to '" + path + "' failed");
}

std::string split_prefix(const RunConfig& rc) {
  if (!rc.output.empty()) return rc.output;
  if (rc.input == "-") throw UsageError("--output: required when reading from stdin");
  std::string prefix = rc.input;
  if (prefix.size() > 4 && prefix.ends_with(".tsv")) prefix.resize(prefix.size() - 4);
  return prefix;
}

void add_input(CLI::App* cmd, RunConfig& rc) {
  cmd->add_option("--input,-i", rc.input, "Tag-assignment TSV (user, resource, tag, timestamp); - for stdin")
      ->required();
  cmd->add_flag("--no-normalize", rc.no_normalize, "Keep tags as written (no trim/lowercase)");
}

void add_format(CLI::App* cmd, RunConfig& rc) {
  cmd->add_option("--format", rc.format, "Output format")
      ->check(CLI::IsMember({"table", "csv"}));
}

void add_algorithm_params(CLI::App* cmd, RunConfig& rc) {
  cmd->add_option("--beta", rc.beta, "User/resource mixing weight (mpur, girptm, actr)")
      ->check(CLI::Range(0.0, 1.0));
  cmd->add_option("--decay", rc.decay, "ACT-R base-level decay d")->check(CLI::PositiveNumber);
  cmd->add_option("--min-lag", rc.min_lag, "ACT-R minimum usage lag in seconds")
      ->check(CLI::Range(std::int64_t{1}, std::numeric_limits<std::int64_t>::max()));
  cmd->add_option("--tau", rc.tau, "GIRPTM surrogate recency time constant in seconds")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--lambda", rc.lambda, "FolkRank spreading factor")->check(kOpenUnit);
  cmd->add_option("--boost", rc.boost,
                  "FolkRank preference boost on user and resource (default: node count)")
      ->check(CLI::NonNegativeNumber);
  cmd->add_option("--neighbors", rc.neighbors, "CF neighborhood size")
      ->check(CLI::Range(std::size_t{1}, std::numeric_limits<std::size_t>::max()));
  cmd->add_option("--k", rc.k, "Cutoff for metrics and recommendations")
      ->check(CLI::Range(std::size_t{1}, std::numeric_limits<std::size_t>::max()));
}

void print_ranking(const Ranking& ranking, ReportFormat format, std::ostream& out) {
  if (format == ReportFormat::kCsv) {
    out << "rank,tag,score\n";
    for (std::size_t i = 0; i < ranking.size(); ++i) {
      out << fmt::format("{},{},{:.6f}\n", i + 1, ranking[i].tag, ranking[i].score);
    }
    return;
  }
  out << fmt::format("{:>4}  {:<24} {:>10}\n", "rank", "tag", "score");
  for (std::size_t i = 0; i < ranking.size(); ++i) {
    out << fmt::format("{:>4}  {:<24} {:>10.6f}\n", i + 1, ranking[i].tag, ranking[i].score);
  }
}

}  // namespace

int run(std::span<const std::string> args, std::istream& in, std::ostream& out,
        std::ostream& err) {
  RunConfig rc;
  CLI::App app{"Folksonomy tag recommendation and evaluation", "folkrec"};
  app.option_defaults()->always_capture_default();
  app.require_subcommand(1);

  auto* stats = app.add_subcommand("stats", "Print corpus statistics");
  add_input(stats, rc);
  add_format(stats, rc);

  auto* core = app.add_subcommand("core", "Write the p-core of the input as TSV");
  add_input(core, rc);
  core->add_option("--p", rc.p, "Minimum number of posts per user, resource and tag")
      ->required()
      ->check(CLI::Range(std::uint32_t{1}, std::numeric_limits<std::uint32_t>::max()));
  core->add_option("--output,-o", rc.output, "Output TSV (default: stdout)");

  auto* split = app.add_subcommand("split", "Write leave-latest-post train/test TSVs");
  add_input(split, rc);
  split->add_option("--output,-o", rc.output,
                    "Output prefix for .train.tsv/.test.tsv (default: input without .tsv)");

  auto* eval = app.add_subcommand("eval", "Split the input and evaluate algorithms");
  add_input(eval, rc);
  eval->add_option("--algo", rc.algorithms, "Comma-separated algorithms: " + valid_names());
  add_algorithm_params(eval, rc);
  add_format(eval, rc);

  auto* recommend = app.add_subcommand("recommend", "Rank tags for one user and resource");
  add_input(recommend, rc);
  recommend->add_option("--user", rc.user, "User id")->required();
  recommend->add_option("--resource", rc.resource, "Resource id")->required();
  recommend->add_option("--algo", rc.recommend_algorithm, "Algorithm: " + valid_names());
  recommend->add_option("--time", rc.timestamp,
                        "Reference time in seconds (default: latest timestamp in the input)");
  add_algorithm_params(recommend, rc);
  add_format(recommend, rc);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*stats) {
      const auto f = load(rc, in);
      const auto s = compute_stats(f);
      if (rc.format == "csv") {
        out << format_stats_lines(s);
      } else {
        out << format_stats_table(s) << '\n' << format_stats_lines(s);
      }
    } else if (*core) {
      const auto f = load(rc, in);
      const auto pruned = p_core(f, rc.p);
      if (rc.output.empty()) {
        write_tsv(pruned, out);
      } else {
        write_file(rc.output, rc.input, [&](std::ostream& o) { write_tsv(pruned, o); });
      }
      err << fmt::format("{}-core: {} of {} posts kept\n", rc.p, pruned.n_posts(), f.n_posts());
    } else if (*split) {
      const auto prefix = split_prefix(rc);
      const auto f = load(rc, in);
      const auto pair = split_leave_latest(f);
      write_file(prefix + ".train.tsv", rc.input,
                 [&](std::ostream& o) { write_tsv(pair.train, o); });
      write_file(prefix + ".test.tsv", rc.input,
                 [&](std::ostream& o) { write_tsv(pair.test, o); });
      out << fmt::format("train\t{}\t{}\ntest\t{}\t{}\n", prefix + ".train.tsv",
                         pair.train.n_posts(), prefix + ".test.tsv", pair.test.size());
    } else if (*eval) {
      const auto configs = resolve_algorithms(rc, rc.algorithms);
      const auto f = load(rc, in);
      const auto pair = split_leave_latest(f);
      const auto report = evaluate(pair, configs, rc.k);
      out << render_report(report, resolve_format(rc.format));
    } else if (*recommend) {
      const auto configs = resolve_algorithms(rc, rc.recommend_algorithm);
      if (configs.size() != 1) throw UsageError("--algo: recommend takes exactly one algorithm");
      const auto f = load(rc, in);
      const auto recommender = make_recommender(configs.front(), f);
      const Query q{rc.user, rc.resource, rc.timestamp.value_or(f.latest_timestamp())};
      print_ranking(recommender->recommend(q).top(rc.k), resolve_format(rc.format), out);
    }
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const BadParam& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitDataError;
  }
  return kExitOk;
}

}  // namespace folkrec
