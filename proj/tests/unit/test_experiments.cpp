#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <set>

#include "bmland/experiments.hpp"
#include "bmland/instances.hpp"

using namespace bmland;

namespace {

std::string read_all(const std::string& path) {
  std::ifstream in(path);
  return {std::istreambuf_iterator<char>(in), {}};
}

ExperimentConfig small_config() {
  ExperimentConfig cfg;
  cfg.n_values = {4, 6};
  cfg.pi_values = {0.25, 0.3};
  cfg.trials_per_cell = 40;
  cfg.seed0 = 2024;
  return cfg;
}

}  // namespace

TEST_CASE("initializer approaches the axial point as pi -> 0") {
  Rng rng(1);
  const Point y = sample_initializer(10, 1e-12, rng);
  CHECK((y.matrix() - axial(10).matrix()).norm() <= 1e-9);
  CHECK_THROWS_AS(sample_initializer(10, 0.0, rng), InvalidInput);
  CHECK_THROWS_AS(sample_initializer(5, 0.1, rng), InvalidDimensions);
}

TEST_CASE("perturbation rows have unit expected squared norm") {
  // Delta_ij ~ N(0, 1/p), so E|Delta_i|^2 = 1.
  const Eigen::Index n = 50, p = 25;
  Rng rng(2);
  double total = 0.0;
  int count = 0;
  for (int s = 0; s < 400; ++s) {
    for (Eigen::Index i = 0; i < n; ++i) {
      double sq = 0.0;
      for (Eigen::Index j = 0; j < p; ++j) {
        const double d = rng.normal() / std::sqrt(static_cast<double>(p));
        sq += d * d;
      }
      total += sq;
      ++count;
    }
  }
  CHECK(total / count >= 0.9);
  CHECK(total / count <= 1.1);

  // The initializer consumes normals in row-major order with stddev 1/sqrt(p).
  Rng a(3), b(3);
  const Point y = sample_initializer(n, 1.0, a);
  RowMatrix z = axial(n).matrix();
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < p; ++j) z(i, j) += b.normal() / std::sqrt(static_cast<double>(p));
  CHECK((y.matrix() - rownorm(z)).norm() < 1e-14);
}

TEST_CASE("initializer is deterministic per seed") {
  Rng a(5), b(5), c(6);
  const Point ya = sample_initializer(8, 0.3, a);
  CHECK(ya == sample_initializer(8, 0.3, b));
  CHECK_FALSE(ya == sample_initializer(8, 0.3, c));
}

TEST_CASE("trial seeds are stable and distinct") {
  CHECK(trial_seed(1, 4, 0.25, 0) == trial_seed(1, 4, 0.25, 0));
  std::set<std::uint64_t> seen;
  for (Eigen::Index n : {4, 50})
    for (double pi : {0.25, 0.27, 0.3})
      for (int t = 0; t < 100; ++t) seen.insert(trial_seed(7, n, pi, t));
  CHECK(seen.size() == 600);
  CHECK(trial_seed(7, 4, 0.25, 0) != trial_seed(8, 4, 0.25, 0));
}

TEST_CASE("config validation") {
  ExperimentConfig cfg = small_config();
  CHECK_NOTHROW(cfg.validate());
  cfg.n_values = {5};
  CHECK_THROWS_AS(cfg.validate(), InvalidDimensions);
  cfg = small_config();
  cfg.pi_values = {0.0};
  CHECK_THROWS_AS(cfg.validate(), InvalidInput);
  cfg = small_config();
  cfg.trials_per_cell = 0;
  CHECK_THROWS_AS(cfg.validate(), InvalidInput);
  cfg = small_config();
  cfg.pi_values.clear();
  CHECK_THROWS_AS(cfg.validate(), InvalidInput);
}

TEST_CASE("tiny perturbations stay at the spurious point") {
  ExperimentConfig cfg;
  cfg.n_values = {4};
  cfg.pi_values = {1e-6};
  cfg.trials_per_cell = 50;
  cfg.seed0 = 9;
  const auto cells = run_phase_transition(cfg);
  REQUIRE(cells.size() == 1);
  CHECK(cells[0].fraction_spurious == 1.0);
  CHECK(cells[0].fraction_unknown == 0.0);
  CHECK(cells[0].p == 2);

  // same with the gradient-flow oracle
  cfg.solver.method = Method::FixedStepRGD;
  CHECK(run_phase_transition(cfg)[0].fraction_spurious == 1.0);
}

TEST_CASE("trial records") {
  const auto rec = run_trial(4, 0.3, 11, SolverConfig{}, 1e-3);
  CHECK(rec.n == 4);
  CHECK(rec.p == 2);
  CHECK(rec.seed == 11);
  CHECK(rec.iterations > 0);
  CHECK(rec.classification != Classification::Unknown);
  const double target = rec.classification == Classification::Spurious ? 0.0 : -8.0;
  CHECK(rec.final_objective == doctest::Approx(target).epsilon(1e-6));
}

TEST_CASE("outcomes are bimodal") {
  ExperimentConfig cfg = small_config();
  cfg.pi_values = {0.1, 0.3, 0.6};
  const auto trials = run_phase_trials(cfg);
  int unknown = 0;
  for (const auto& t : trials) unknown += t.classification == Classification::Unknown;
  CHECK(unknown <= 0.02 * static_cast<double>(trials.size()));
}

TEST_CASE("sweeps are deterministic and independent of thread count") {
  ExperimentConfig one = small_config();
  one.threads = 1;
  ExperimentConfig many = small_config();
  many.threads = 3;
  const std::string a = format_report(run_phase_transition(one), ReportFormat::Csv);
  const std::string b = format_report(run_phase_transition(many), ReportFormat::Csv);
  const std::string c = format_report(run_phase_transition(one), ReportFormat::Csv);
  CHECK(a == b);
  CHECK(a == c);

  const auto trials = run_phase_trials(many);
  for (std::size_t i = 0; i < trials.size(); ++i) {
    const int idx = static_cast<int>(i % 40);
    CHECK(trials[i].seed == trial_seed(2024, trials[i].n, trials[i].pi, idx));
  }
}

TEST_CASE("aggregation rejects mismatched trial lists") {
  ExperimentConfig cfg = small_config();
  auto trials = run_phase_trials(cfg);
  std::swap(trials.front(), trials.back());
  CHECK_THROWS_AS(aggregate_cells(cfg, trials), InvalidInput);
}

TEST_CASE("report formatting") {
  const std::vector<PhaseCell> cells{{4, 2, 0.3, 1000, 0.55, 0.0}};
  CHECK(format_report(cells, ReportFormat::Csv) ==
        "n,p,pi,trials,fraction_spurious,fraction_unknown\n4,2,0.3,1000,0.55,0\n");
  const std::vector<PhaseCell> long_digits{{4, 2, 1.0 / 3.0, 3, 2.0 / 3.0, 0.0}};
  CHECK(format_report(long_digits, ReportFormat::Csv).find("4,2,0.333333,3,0.666667,0\n") != std::string::npos);
  CHECK_THROWS_AS(format_report({}, ReportFormat::Csv), InvalidInput);
  CHECK_THROWS_AS(emit_report(cells, ReportFormat::Csv, "/nonexistent-dir/x.csv"), IoError);
  CHECK_THROWS_AS(report_format_from_string("xml"), InvalidInput);
}

TEST_CASE("JSON report round trip is exact") {
  const std::vector<PhaseCell> cells{{4, 2, 0.27, 1000, 0.123456789, 0.001}, {50, 25, 1.0 / 3.0, 7, 3.0 / 7.0, 0.0}};
  const auto back = parse_report(format_report(cells, ReportFormat::Json));
  REQUIRE(back.size() == 2);
  for (std::size_t i = 0; i < 2; ++i) {
    CHECK(back[i].n == cells[i].n);
    CHECK(back[i].p == cells[i].p);
    CHECK(back[i].pi == cells[i].pi);
    CHECK(back[i].trials == cells[i].trials);
    CHECK(back[i].fraction_spurious == cells[i].fraction_spurious);
    CHECK(back[i].fraction_unknown == cells[i].fraction_unknown);
  }
}

TEST_CASE("report files") {
  const std::vector<PhaseCell> cells{{4, 2, 0.25, 10, 0.6, 0.1}};
  const std::string path = "experiments_report_test.csv";
  emit_report(cells, ReportFormat::Csv, path);
  const std::string text = read_all(path);
  CHECK(text == format_report(cells, ReportFormat::Csv));
  const auto back = parse_report(text);
  REQUIRE(back.size() == 1);
  CHECK(back[0].fraction_spurious == 0.6);
  std::remove(path.c_str());

  CHECK_THROWS_AS(parse_report(""), InvalidInput);
  CHECK_THROWS_AS(parse_report("a,b\n1,2\n"), InvalidInput);
  CHECK_THROWS_AS(parse_report("n,p,pi,trials,fraction_spurious,fraction_unknown\n1,2\n"), InvalidInput);
  CHECK_THROWS_AS(parse_report("[{\"n\": 4}]"), InvalidInput);
}

TEST_CASE("spurious fraction is nonincreasing in pi up to binomial noise") {
  for (auto [n, trials] : {std::pair<Eigen::Index, int>{4, 400}, {50, 100}}) {
    ExperimentConfig cfg;
    cfg.n_values = {n};
    cfg.pi_values = {0.25, 0.27, 0.30};
    cfg.trials_per_cell = trials;
    cfg.seed0 = 77;
    const auto cells = run_phase_transition(cfg);
    for (std::size_t i = 1; i < cells.size(); ++i) {
      const double a = cells[i - 1].fraction_spurious, b = cells[i].fraction_spurious;
      const double sigma = std::sqrt((a * (1 - a) + b * (1 - b)) / trials);
      CHECK(b <= a + 2.0 * sigma);
    }
    for (const auto& c : cells) CHECK(c.fraction_unknown <= 0.02);
  }
}
