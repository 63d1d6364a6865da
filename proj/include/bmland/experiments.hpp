#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "bmland/manifold.hpp"
#include "bmland/optimize.hpp"
#include "bmland/rng.hpp"

namespace bmland {

// rownorm(axial(n) + pi * Delta), Delta_ij ~ N(0, 1/p), p = n/2.
Point sample_initializer(Eigen::Index n, double pi, Rng& rng);

struct ExperimentConfig {
  std::vector<Eigen::Index> n_values;
  std::vector<double> pi_values;
  int trials_per_cell = 1;
  SolverConfig solver;  // defaults to the trust-region method
  std::uint64_t seed0 = 0;
  double margin = 1e-3;
  std::string output_path;
  unsigned threads = 0;  // 0: hardware concurrency

  void validate() const;
};

struct TrialRecord {
  Eigen::Index n;
  Eigen::Index p;
  double pi;
  std::uint64_t seed;
  int iterations;
  double final_objective;
  Classification classification;
  std::int64_t wall_time_ms;
};

struct PhaseCell {
  Eigen::Index n;
  Eigen::Index p;
  double pi;
  int trials;
  double fraction_spurious;
  double fraction_unknown;
};

// Stable per-trial seed; independent of execution order.
std::uint64_t trial_seed(std::uint64_t seed0, Eigen::Index n, double pi, int trial_index);

// One trial on the block almost-average instance with p = n/2. Numerical
// failures are recorded as Unknown.
TrialRecord run_trial(Eigen::Index n, double pi, std::uint64_t seed, const SolverConfig& solver, double margin);

// Every trial of every (n, pi) cell, ordered by (n, pi, trial index).
std::vector<TrialRecord> run_phase_trials(const ExperimentConfig& cfg);

std::vector<PhaseCell> aggregate_cells(const ExperimentConfig& cfg, const std::vector<TrialRecord>& trials);

std::vector<PhaseCell> run_phase_transition(const ExperimentConfig& cfg);

enum class ReportFormat { Csv, Json };
ReportFormat report_format_from_string(const std::string& s);

// CSV header: n,p,pi,trials,fraction_spurious,fraction_unknown (6 significant digits).
std::string format_report(const std::vector<PhaseCell>& cells, ReportFormat format);
void emit_report(const std::vector<PhaseCell>& cells, ReportFormat format, const std::string& path);

nlohmann::json report_json(const std::vector<PhaseCell>& cells);
std::vector<PhaseCell> parse_report(const std::string& text);  // CSV or JSON, auto-detected

}  // namespace bmland
