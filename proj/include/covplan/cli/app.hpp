// Copyright 2026 The covplan Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Command-line front end: plan, pmf, limit, simulate, predict.
//
// Exit status: 0 success, 1 usage or validation error, 2 domain error
// (no calibration size found, degenerate calibration).

#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "covplan/cli/csv.hpp"
#include "covplan/conformal.hpp"
#include "covplan/error.hpp"
#include "covplan/finite_horizon.hpp"
#include "covplan/limit.hpp"
#include "covplan/params.hpp"
#include "covplan/pipeline.hpp"
#include "covplan/planner.hpp"
#include "covplan/replication.hpp"

namespace covplan::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitDomain = 2;

// --- commands -------------------------------------------------------------

struct PlanResult {
  std::int64_t n;
  double achieved_probability;
};

inline nlohmann::json cmd_plan(double alpha, double epsilon, double gamma,
                               std::int64_t n_max) {
  const auto plan = plan_calibration_size(alpha, epsilon, gamma, n_max);
  return {{"n", plan.n},
          {"achieved_probability", plan.achieved_probability},
          {"alpha", alpha},
          {"epsilon", epsilon},
          {"gamma", gamma}};
}

inline CsvTable cmd_pmf(std::int64_t n, double alpha, std::int64_t m) {
  const auto pmf = finite_horizon_pmf(derive_params(n, alpha), m);
  CsvTable t{{"k", "coverage", "probability"}, {}};
  t.rows.reserve(static_cast<std::size_t>(m) + 1);
  for (std::int64_t k = 0; k <= m; ++k) {
    t.rows.push_back(
        {static_cast<double>(k), pmf.coverage(k), pmf.prob(k)});
  }
  return t;
}

inline std::vector<double> default_t_grid() {
  std::vector<double> ts;
  for (int i = 0; i <= 20; ++i) ts.push_back(i / 20.0);
  return ts;
}

inline nlohmann::json cmd_limit(std::int64_t n, double alpha,
                                const std::vector<double>& ts) {
  const LimitDistribution dist(derive_params(n, alpha));
  const auto mom = limit_moments(dist);
  nlohmann::json cdf = nlohmann::json::array();
  for (double t : ts) cdf.push_back({t, limit_cdf(dist, t)});
  nlohmann::json j = {{"n", n},
                      {"alpha", alpha},
                      {"b", dist.shape_a()},
                      {"g", dist.shape_b()},
                      {"mean", mom.mean},
                      {"mean_exact", mom.mean_exact.str()},
                      {"variance", mom.variance},
                      {"cdf", cdf}};
  if (mom.variance_exact) j["variance_exact"] = mom.variance_exact->str();
  return j;
}

struct SimulateOutput {
  CsvTable per_replication;
  nlohmann::json summary;
};

inline SimulateOutput cmd_simulate(const sim::ReplicationConfig& config) {
  const auto s = sim::run_replications(config);
  const auto params =
      derive_params(static_cast<std::int64_t>(config.n), config.alpha);
  const auto pmf =
      finite_horizon_pmf(params, static_cast<std::int64_t>(config.m));

  SimulateOutput out;
  out.per_replication.header = {"replication", "covered", "coverage"};
  out.per_replication.rows.reserve(s.coverages.size());
  for (std::size_t i = 0; i < s.coverages.size(); ++i) {
    out.per_replication.rows.push_back({static_cast<double>(i),
                                        static_cast<double>(s.covered[i]),
                                        s.coverages[i]});
  }
  out.summary = {
      {"replications", config.replications},
      {"r", config.r},
      {"n", config.n},
      {"m", config.m},
      {"alpha", config.alpha},
      {"seed", config.master_seed},
      {"score", std::string(score_kind_name(config.scorer.kind))},
      {"b", params.black()},
      {"g", params.gray()},
      {"mean", s.mean_coverage},
      {"exact_mean", exact_mean(params).value()},
      {"min", s.min_coverage},
      {"ks_vs_exact", sim::ks_distance(s.coverages, pmf)},
      {"below_lower_bound_fraction", s.below_lower_bound_fraction},
      {"exact_below_lower_bound", sim::exact_below_lower_bound(pmf)},
      {"tied_replications", s.tied_replications}};
  return out;
}

struct PredictRequest {
  CsvTable train;
  CsvTable calib;
  CsvTable test;
  double alpha;
  ScorerConfig scorer;
};

inline CsvTable cmd_predict(const PredictRequest& req) {
  const auto train = to_dataset(req.train, true);
  const auto calib = to_dataset(req.calib, true);
  const auto test = to_dataset(req.test, false);
  if (calib.features != train.features || test.features != train.features) {
    throw InvalidArgument(
        "train, calib and test must share the same feature columns");
  }
  auto scorer = make_scorer(req.scorer, train.data, req.alpha);
  const auto cp = conformal::calibrate(std::move(scorer), calib.data, req.alpha);

  CsvTable out;
  out.header = {"lower", "upper"};
  if (test.has_response) out.header.emplace_back("covered");
  for (std::size_t i = 0; i < test.data.rows(); ++i) {
    const auto x = test.data.row(i);
    const auto iv = conformal::predict_interval(cp, x);
    std::vector<double> row{iv.lower, iv.upper};
    if (test.has_response) {
      row.push_back(iv.contains(test.data.response(i)) ? 1.0 : 0.0);
    }
    out.rows.push_back(std::move(row));
  }
  return out;
}

// --- argument handling ----------------------------------------------------

namespace detail {

inline void emit_csv(const CsvTable& t, const std::string& path,
                     std::ostream& out) {
  if (path.empty() || path == "-") {
    write_csv(out, t);
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw InvalidArgument("cannot write '" + path + "'");
  write_csv(f, t);
}

inline std::size_t env_worker_cap() {
  const char* v = std::getenv("COVPLAN_THREADS");
  if (v == nullptr || *v == '\0') return 0;
  try {
    const long long n = std::stoll(v);
    return n > 0 ? static_cast<std::size_t>(n) : 0;
  } catch (const std::exception&) {
    throw InvalidArgument("COVPLAN_THREADS must be a positive integer");
  }
}

struct ModelFlags {
  std::string score = "standard";
  std::string model = "knn";
  std::size_t k = 10;
  std::optional<double> p_lo;
  std::optional<double> p_hi;

  void attach(CLI::App* cmd) {
    cmd->add_option("--score", score, "conformity score: standard, lw, cqr")
        ->capture_default_str();
    cmd->add_option("--model", model, "point model: knn or constant")
        ->capture_default_str();
    cmd->add_option("--k", k, "neighbour count for k-NN models")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    cmd->add_option("--p-lo", p_lo, "CQR lower quantile (default alpha/2)");
    cmd->add_option("--p-hi", p_hi,
                    "CQR upper quantile (default 1 - alpha/2)");
  }

  [[nodiscard]] ScorerConfig to_config() const {
    ScorerConfig c;
    c.kind = parse_score_kind(score);
    if (model == "knn") {
      c.model = models::KnnMeanSpec{k};
    } else if (model == "constant") {
      c.model = models::ConstantMeanSpec{};
    } else {
      throw InvalidArgument("unknown model '" + model +
                            "' (expected knn or constant)");
    }
    c.p_lo = p_lo;
    c.p_hi = p_hi;
    return c;
  }
};

}  // namespace detail

/// Parses argv and runs one subcommand. Never calls exit(); returns the
/// process status instead.
inline int run(int argc, const char* const* argv, std::ostream& out,
               std::ostream& err) {
  CLI::App app{"Split conformal coverage laws, calibration planning and "
               "simulation"};
  app.require_subcommand(1);

  // plan
  double plan_alpha = 0.1;
  double plan_eps = 0.02;
  double plan_gamma = 0.95;
  std::int64_t plan_nmax = kDefaultPlanMaxN;
  auto* plan = app.add_subcommand(
      "plan", "smallest calibration size concentrating the limit coverage");
  plan->add_option("--alpha", plan_alpha, "miscoverage level")->required();
  plan->add_option("--epsilon", plan_eps, "half-width around 1 - alpha")
      ->required();
  plan->add_option("--gamma", plan_gamma, "required probability")->required();
  plan->add_option("--n-max", plan_nmax, "largest n to scan")
      ->capture_default_str();

  // pmf
  std::int64_t pmf_n = 0;
  double pmf_alpha = 0.0;
  std::int64_t pmf_m = 0;
  std::string pmf_out;
  auto* pmf = app.add_subcommand("pmf", "exact finite-horizon coverage law");
  pmf->add_option("--n", pmf_n, "calibration size")->required();
  pmf->add_option("--alpha", pmf_alpha, "miscoverage level")->required();
  pmf->add_option("--m", pmf_m, "horizon")->required();
  pmf->add_option("--out", pmf_out, "output CSV (default stdout)");

  // limit
  std::int64_t lim_n = 0;
  double lim_alpha = 0.0;
  std::vector<double> lim_t;
  auto* limit = app.add_subcommand("limit", "Beta limit of the coverage");
  limit->add_option("--n", lim_n, "calibration size")->required();
  limit->add_option("--alpha", lim_alpha, "miscoverage level")->required();
  limit->add_option("--t", lim_t, "CDF evaluation points (comma separated)")
      ->delimiter(',');

  // simulate
  sim::ReplicationConfig sim_cfg;
  detail::ModelFlags sim_model;
  std::string sim_out;
  std::string sim_summary;
  auto* simulate = app.add_subcommand(
      "simulate", "Monte Carlo of the future coverage on Friedman data");
  simulate->add_option("--r", sim_cfg.r, "training size")->capture_default_str();
  simulate->add_option("--n", sim_cfg.n, "calibration size")
      ->capture_default_str();
  simulate->add_option("--m", sim_cfg.m, "horizon")->capture_default_str();
  simulate->add_option("--alpha", sim_cfg.alpha, "miscoverage level")
      ->capture_default_str();
  simulate->add_option("--reps", sim_cfg.replications, "replications")
      ->capture_default_str();
  simulate->add_option("--seed", sim_cfg.master_seed, "master seed")
      ->capture_default_str();
  simulate->add_option("--out", sim_out, "per-replication CSV");
  simulate->add_option("--summary", sim_summary,
                       "summary JSON path (default stdout)");
  sim_model.attach(simulate);

  // predict
  std::string pr_train, pr_calib, pr_test, pr_out;
  double pr_alpha = 0.1;
  detail::ModelFlags pr_model;
  auto* predict = app.add_subcommand(
      "predict", "conformal prediction intervals from CSV data");
  predict->add_option("--train", pr_train, "training CSV")->required();
  predict->add_option("--calib", pr_calib, "calibration CSV")->required();
  predict->add_option("--test", pr_test, "test CSV")->required();
  predict->add_option("--alpha", pr_alpha, "miscoverage level")->required();
  predict->add_option("--out", pr_out, "output CSV (default stdout)");
  pr_model.attach(predict);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*plan) {
      out << cmd_plan(plan_alpha, plan_eps, plan_gamma, plan_nmax).dump(2)
          << '\n';
    } else if (*pmf) {
      detail::emit_csv(cmd_pmf(pmf_n, pmf_alpha, pmf_m), pmf_out, out);
    } else if (*limit) {
      const auto ts = lim_t.empty() ? default_t_grid() : lim_t;
      out << cmd_limit(lim_n, lim_alpha, ts).dump(2) << '\n';
    } else if (*simulate) {
      sim_cfg.scorer = sim_model.to_config();
      sim_cfg.workers = detail::env_worker_cap();
      const auto res = cmd_simulate(sim_cfg);
      if (!sim_out.empty()) detail::emit_csv(res.per_replication, sim_out, out);
      if (sim_summary.empty()) {
        out << res.summary.dump(2) << '\n';
      } else {
        std::ofstream f(sim_summary, std::ios::binary);
        if (!f) throw InvalidArgument("cannot write '" + sim_summary + "'");
        f << res.summary.dump(2) << '\n';
      }
    } else if (*predict) {
      PredictRequest req{read_csv_file(pr_train), read_csv_file(pr_calib),
                         read_csv_file(pr_test), pr_alpha,
                         pr_model.to_config()};
      detail::emit_csv(cmd_predict(req), pr_out, out);
    }
  } catch (const DomainError& e) {
    err << "error: " << e.what() << '\n';
    return kExitDomain;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitOk;
}

}  // namespace covplan::cli
