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

// End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
// exits non-zero if any fails.

#include <unistd.h>

#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "covplan/cli/app.hpp"
#include "covplan/covplan.hpp"
#include "oracles.hpp"

namespace {

using namespace covplan;
using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass;
  std::string detail;
};

int failures = 0;

void check(const std::string& id, const std::string& title, double budget_s,
           const std::function<Outcome()>& body) {
  const auto start = Clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double secs =
      std::chrono::duration<double>(Clock::now() - start).count();
  if (budget_s > 0 && secs > budget_s) {
    o.pass = false;
    o.detail += "; over time budget";
  }
  if (!o.pass) ++failures;
  char limit[32] = "";
  if (budget_s > 0) std::snprintf(limit, sizeof limit, ", limit %gs", budget_s);
  std::printf("[%s] %s %s: %s (%.2fs%s)\n", o.pass ? "PASS" : "FAIL",
              id.c_str(), title.c_str(), o.detail.c_str(), secs, limit);
  std::fflush(stdout);
}

std::string fmt(double v, int digits = 6) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

struct CliResult {
  int code;
  std::string out;
  std::string err;
};

CliResult cli_run(std::vector<std::string> args) {
  args.insert(args.begin(), "covplan");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code =
      cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

const std::vector<std::int64_t> kGridN{1, 4, 10, 100, 860};
const std::vector<double> kGridAlpha{0.05, 0.2, 0.45, 0.5};

Outcome planner() {
  const auto r = cli_run({"plan", "--alpha", "0.1", "--epsilon", "0.02",
                          "--gamma", "0.95"});
  if (r.code != 0) return {false, "exit " + std::to_string(r.code) + ": " + r.err};
  const auto j = nlohmann::json::parse(r.out);
  const auto n = j["n"].get<std::int64_t>();
  return {n == 860, "expected n=860, got n=" + std::to_string(n) +
                        " (P=" + fmt(j["achieved_probability"], 8) + ")"};
}

Outcome validity_bounds() {
  double worst_mean = 0;
  int checked = 0;
  bool inside = true;
  for (auto n : kGridN) {
    for (double alpha : kGridAlpha) {
      if (gray_count(n, alpha) < 1) continue;
      const auto p = derive_params(n, alpha);
      const double lo = 1 - alpha;
      const double hi = 1 - alpha + 1.0 / static_cast<double>(n + 1);
      for (std::int64_t m : {1, 7, 50, 500}) {
        const double mean = pmf_mean(finite_horizon_pmf(p, m));
        const double want = static_cast<double>(p.black()) /
                            static_cast<double>(n + 1);
        worst_mean = std::max(worst_mean, std::abs(mean - want));
        inside = inside && mean >= lo - 1e-12 && mean <= hi + 1e-12;
        ++checked;
      }
    }
  }
  const double lo = 1 - 0.2;
  const double hi = 1 - 0.2 + 1.0 / 11.0;
  const bool example = std::abs(lo - 0.8) < 1e-15 &&
                       std::abs(hi - 0.890909090909) < 1e-9 &&
                       exact_mean(derive_params(10, 0.2)) == Rational{9, 11};
  return {worst_mean <= 1e-10 && inside && example,
          std::to_string(checked) + " laws, max |mean - b/(n+1)| = " +
              fmt(worst_mean) + ", all within bounds: " +
              (inside ? "yes" : "no") + ", n=10 alpha=0.2 bounds [" + fmt(lo) +
              ", " + fmt(hi) + "]"};
}

Outcome oracle_equivalence() {
  double worst = 0;
  int laws = 0;
  for (std::int64_t n : {1, 4, 10, 100}) {
    for (double alpha : kGridAlpha) {
      if (gray_count(n, alpha) < 1) continue;
      const auto p = derive_params(n, alpha);
      for (std::int64_t m = 1; m <= 12; ++m) {
        const auto oracle = sim::urn_pmf_oracle(p, m);
        const auto law = finite_horizon_pmf(p, m);
        for (std::int64_t k = 0; k <= m; ++k) {
          worst = std::max(worst, std::abs(oracle.prob(k) - law.prob(k)));
        }
        ++laws;
      }
    }
  }
  return {worst <= 1e-12, std::to_string(laws) + " laws, max entry gap " +
                              fmt(worst)};
}

Outcome normalization() {
  const auto law = finite_horizon_pmf(derive_params(860, 0.1), 100000);
  double sum = 0;
  bool finite = true;
  for (double p : law.probs()) {
    finite = finite && std::isfinite(p);
    sum += p;
  }
  const double total = law.total_mass();
  return {finite && std::abs(total - 1) <= 1e-10 && std::abs(sum - 1) <= 1e-10,
          "m=1e5 total mass 1" + std::string(total >= 1 ? "+" : "-") +
              fmt(std::abs(total - 1), 3) + ", all finite: " +
              (finite ? "yes" : "no")};
}

Outcome convergence() {
  const auto p = derive_params(10, 0.2);
  const auto law = finite_horizon_pmf(p, 10000);
  const LimitDistribution limit(p);
  double worst = 0;
  for (int i = 1; i <= 9; ++i) {
    const double t = i / 10.0;
    worst = std::max(worst, std::abs(law.cdf(t) - limit_cdf(limit, t)));
  }
  return {worst <= 0.01, "max |F_m(t) - H(t)| = " + fmt(worst) +
                             " over t = 0.1..0.9 (Beta(9,2))"};
}

sim::ReplicationConfig desk_config() {
  sim::ReplicationConfig c;
  c.r = 100;
  c.n = 10;
  c.m = 500;
  c.alpha = 0.2;
  c.replications = 2000;
  c.master_seed = 20260101;
  c.scorer.model = models::KnnMeanSpec{10};
  return c;
}

Outcome monte_carlo() {
  const auto cfg = desk_config();
  const auto s = sim::run_replications(cfg);
  const auto law = finite_horizon_pmf(derive_params(10, 0.2), 500);
  const double ks = sim::ks_distance(s.coverages, law);
  const double exact_below = sim::exact_below_lower_bound(law);
  const bool a = ks <= 0.04;
  const bool b = std::abs(s.mean_coverage - 9.0 / 11.0) <= 0.01;
  const bool c = std::abs(s.below_lower_bound_fraction - exact_below) <= 0.03;
  const bool d = s.min_coverage < 0.5;
  auto mark = [](bool ok) { return ok ? "ok" : "FAILED"; };
  return {a && b && c && d,
          std::string("(a) KS ") + fmt(ks) + " <= 0.04 " + mark(a) +
              "; (b) mean " + fmt(s.mean_coverage) + " vs 9/11 " + mark(b) +
              "; (c) P(C<0.8) " + fmt(s.below_lower_bound_fraction) +
              " vs exact " + fmt(exact_below) + " " + mark(c) + "; (d) min " +
              fmt(s.min_coverage) + " < 0.5 " + mark(d)};
}

Outcome universality() {
  auto cfg = desk_config();
  cfg.scorer.model = models::ConstantMeanSpec{};
  const auto s = sim::run_replications(cfg);
  const auto law = finite_horizon_pmf(derive_params(10, 0.2), 500);
  const double ks = sim::ks_distance(s.coverages, law);
  return {ks <= 0.04, "constant-mean model, KS " + fmt(ks) + " <= 0.04"};
}

// Affine in the first feature; enough to move every score around with x.
struct Affine {
  double a, b;
  double predict(std::span<const double> x) const { return a + b * x[0]; }
};

Outcome duality() {
  using namespace covplan::conformal;
  sim::Rng rng(8);
  const double inf = std::numeric_limits<double>::infinity();
  long cases = 0, mismatches = 0;
  auto probe = [&](const ConformityScorer<Affine>& s, double t) {
    const CalibratedPredictor<Affine> cp(s, derive_params(1, 0.5), {t});
    for (int trial = 0; trial < 50; ++trial) {
      const std::vector<double> x{std::clamp(2 * rng.normal(), -3.0, 3.0)};
      const auto iv = predict_interval(cp, x);
      std::vector<double> ys;
      for (double e : {iv.lower, iv.upper}) {
        double lo = e, hi = e;
        ys.push_back(e);
        for (int i = 0; i < 2; ++i) {
          lo = std::nextafter(lo, -inf);
          hi = std::nextafter(hi, inf);
          ys.push_back(lo);
          ys.push_back(hi);
        }
      }
      for (int i = 0; i < 4; ++i) {
        ys.push_back(0.5 * (iv.lower + iv.upper) + 3 * rng.normal());
      }
      for (double y : ys) {
        ++cases;
        if (iv.contains(y) != cp.covers(x, y)) ++mismatches;
      }
    }
  };
  for (int rep = 0; rep < 60; ++rep) {
    const Affine psi{rng.normal(), rng.normal()};
    const Affine sigma{std::abs(rng.normal()) + 0.31, 0.1 * rng.uniform()};
    const double t =
        std::abs(rng.normal()) * std::pow(10.0, rng.uniform() * 6 - 3);
    probe(Standard<Affine>{psi}, t);
    probe(LocallyWeighted<Affine>{psi, sigma}, t);
    probe(Cqr<Affine>{psi, {psi.a + sigma.a, psi.b}}, rep % 3 == 0 ? -t : t);
  }
  return {cases >= 10000 && mismatches == 0,
          std::to_string(cases) + " cases over three scores, " +
              std::to_string(mismatches) + " mismatches"};
}

Outcome determinism() {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() /
                       ("covplan_acceptance_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  std::vector<std::string> csvs;
  const std::vector<std::pair<std::string, std::string>> runs{
      {"1", "a"}, {"1", "b"}, {"4", "c"}};
  for (const auto& [threads, tag] : runs) {
    ::setenv("COVPLAN_THREADS", threads.c_str(), 1);
    const auto csv = (dir / (tag + ".csv")).string();
    const auto r = cli_run({"simulate", "--r", "100", "--n", "10", "--m",
                            "500", "--alpha", "0.2", "--reps", "400",
                            "--seed", "99", "--out", csv, "--summary",
                            (dir / (tag + ".json")).string()});
    if (r.code != 0) {
      fs::remove_all(dir);
      return {false, "simulate exited " + std::to_string(r.code) + ": " + r.err};
    }
    csvs.push_back(slurp(csv));
  }
  ::unsetenv("COVPLAN_THREADS");
  fs::remove_all(dir);
  const bool repeat = csvs[0] == csvs[1];
  const bool workers = csvs[0] == csvs[2];
  return {repeat && workers && !csvs[0].empty(),
          std::to_string(csvs[0].size()) + "-byte CSV; repeat run identical: " +
              (repeat ? "yes" : "no") + ", 1 vs 4 workers identical: " +
              (workers ? "yes" : "no")};
}

}  // namespace

int main() {
  set_warning_handler(nullptr);
  check("AC1", "planner reproduction", 1, planner);
  check("AC2", "marginal-validity bounds", 0, validity_bounds);
  check("AC3", "oracle equivalence", 10, oracle_equivalence);
  check("AC4", "normalization at m=1e5", 5, normalization);
  check("AC5", "convergence to the Beta limit", 0, convergence);
  check("AC6", "desk-scale Monte Carlo", 300, monte_carlo);
  check("AC7", "universality (constant model)", 300, universality);
  check("AC8", "score/interval duality", 0, duality);
  check("AC9", "simulate determinism", 0, determinism);
  std::printf("%d of 9 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
