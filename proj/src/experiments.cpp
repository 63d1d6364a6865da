#include "bmland/experiments.hpp"

#include <atomic>
#include <bit>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <thread>

#include "bmland/instances.hpp"

namespace bmland {

Point sample_initializer(Eigen::Index n, double pi, Rng& rng) {
  if (!(pi > 0.0)) throw InvalidInput("sample_initializer: pi must be positive");
  const Point base = axial(n);
  const Eigen::Index p = base.p();
  const double stddev = 1.0 / std::sqrt(static_cast<double>(p));
  RowMatrix z = base.matrix();
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < p; ++j) z(i, j) += pi * stddev * rng.normal();
  return Point(std::move(z), RowPolicy::Normalize);
}

void ExperimentConfig::validate() const {
  if (n_values.empty() || pi_values.empty()) throw InvalidInput("ExperimentConfig: empty n or pi list");
  for (auto n : n_values) {
    if (n < 4 || n % 2 != 0) throw InvalidDimensions("ExperimentConfig: every n must be even and >= 4");
  }
  for (double pi : pi_values) {
    if (!(pi > 0.0)) throw InvalidInput("ExperimentConfig: every pi must be positive");
  }
  if (trials_per_cell < 1) throw InvalidInput("ExperimentConfig: trials_per_cell must be >= 1");
  if (!(margin > 0.0)) throw InvalidInput("ExperimentConfig: margin must be positive");
  solver.validate();
}

std::uint64_t trial_seed(std::uint64_t seed0, Eigen::Index n, double pi, int trial_index) {
  std::uint64_t h = mix64(seed0);
  h = mix64(h ^ static_cast<std::uint64_t>(n));
  h = mix64(h ^ std::bit_cast<std::uint64_t>(pi));
  return mix64(h ^ static_cast<std::uint64_t>(trial_index));
}

TrialRecord run_trial(Eigen::Index n, double pi, std::uint64_t seed, const SolverConfig& solver, double margin) {
  const auto start = std::chrono::steady_clock::now();
  const Eigen::Index p = n / 2;
  const SymMatrix a = block_cost(almost_average(p));
  const double optimal = almost_average_opt_value(p);

  Rng rng(seed);
  const Point y0 = sample_initializer(n, pi, rng);
  SolverConfig cfg = solver;
  cfg.keep_iterates = IteratePolicy::Never;

  TrialRecord rec{n, p, pi, seed, 0, std::nan(""), Classification::Unknown, 0};
  try {
    const Trace trace = solve(a, y0, cfg);
    rec.iterations = trace.iterations;
    rec.final_objective = objective_value(a, trace.final_point);
    rec.classification = classify_value(rec.final_objective, 0.0, optimal, margin);
  } catch (const NumericalFailure& e) {
    rec.iterations = e.iteration();
  }
  rec.wall_time_ms = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start).count();
  return rec;
}

std::vector<TrialRecord> run_phase_trials(const ExperimentConfig& cfg) {
  cfg.validate();
  struct Job {
    Eigen::Index n;
    double pi;
    int index;
  };
  std::vector<Job> jobs;
  for (auto n : cfg.n_values)
    for (double pi : cfg.pi_values)
      for (int t = 0; t < cfg.trials_per_cell; ++t) jobs.push_back({n, pi, t});

  std::vector<TrialRecord> out(jobs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < jobs.size(); i = next++) {
      const Job& job = jobs[i];
      out[i] = run_trial(job.n, job.pi, trial_seed(cfg.seed0, job.n, job.pi, job.index), cfg.solver, cfg.margin);
    }
  };
  unsigned threads = cfg.threads ? cfg.threads : std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, jobs.size()));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  return out;
}

std::vector<PhaseCell> aggregate_cells(const ExperimentConfig& cfg, const std::vector<TrialRecord>& trials) {
  std::vector<PhaseCell> cells;
  std::size_t pos = 0;
  for (auto n : cfg.n_values) {
    for (double pi : cfg.pi_values) {
      int spurious = 0;
      int unknown = 0;
      for (int t = 0; t < cfg.trials_per_cell; ++t, ++pos) {
        const auto& r = trials.at(pos);
        if (r.n != n || r.pi != pi) throw InvalidInput("aggregate_cells: trial order does not match config");
        spurious += r.classification == Classification::Spurious;
        unknown += r.classification == Classification::Unknown;
      }
      const double total = cfg.trials_per_cell;
      cells.push_back({n, n / 2, pi, cfg.trials_per_cell, spurious / total, unknown / total});
    }
  }
  return cells;
}

std::vector<PhaseCell> run_phase_transition(const ExperimentConfig& cfg) {
  return aggregate_cells(cfg, run_phase_trials(cfg));
}

ReportFormat report_format_from_string(const std::string& s) {
  if (s == "csv") return ReportFormat::Csv;
  if (s == "json") return ReportFormat::Json;
  throw InvalidInput("unknown report format '" + s + "'");
}

nlohmann::json report_json(const std::vector<PhaseCell>& cells) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& c : cells) {
    arr.push_back({{"n", c.n},
                   {"p", c.p},
                   {"pi", c.pi},
                   {"trials", c.trials},
                   {"fraction_spurious", c.fraction_spurious},
                   {"fraction_unknown", c.fraction_unknown}});
  }
  return arr;
}

std::string format_report(const std::vector<PhaseCell>& cells, ReportFormat format) {
  if (cells.empty()) throw InvalidInput("emit_report: no results");
  if (format == ReportFormat::Json) return report_json(cells).dump(2) + "\n";
  std::string out = "n,p,pi,trials,fraction_spurious,fraction_unknown\n";
  char buf[160];
  for (const auto& c : cells) {
    std::snprintf(buf, sizeof buf, "%lld,%lld,%.6g,%d,%.6g,%.6g\n", static_cast<long long>(c.n),
                  static_cast<long long>(c.p), c.pi, c.trials, c.fraction_spurious, c.fraction_unknown);
    out += buf;
  }
  return out;
}

void emit_report(const std::vector<PhaseCell>& cells, ReportFormat format, const std::string& path) {
  const std::string text = format_report(cells, format);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write '" + path + "'");
  out << text;
  out.flush();
  if (!out) throw IoError("write failed for '" + path + "'");
}

std::vector<PhaseCell> parse_report(const std::string& text) {
  std::vector<PhaseCell> cells;
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) throw InvalidInput("report: empty input");
  if (text[first] == '[') {
    try {
      for (const auto& c : nlohmann::json::parse(text)) {
        cells.push_back({c.at("n").get<Eigen::Index>(), c.at("p").get<Eigen::Index>(), c.at("pi").get<double>(),
                         c.at("trials").get<int>(), c.at("fraction_spurious").get<double>(),
                         c.at("fraction_unknown").get<double>()});
      }
    } catch (const nlohmann::json::exception& e) {
      throw InvalidInput(std::string("report JSON: ") + e.what());
    }
    return cells;
  }
  std::istringstream in(text);
  std::string line;
  std::getline(in, line);
  if (line.rfind("n,p,pi,trials,fraction_spurious,fraction_unknown", 0) != 0) {
    throw InvalidInput("report CSV: unexpected header");
  }
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    long long n = 0, p = 0;
    int trials = 0;
    double pi = 0, fs = 0, fu = 0;
    if (std::sscanf(line.c_str(), "%lld,%lld,%lf,%d,%lf,%lf", &n, &p, &pi, &trials, &fs, &fu) != 6) {
      throw InvalidInput("report CSV: malformed row '" + line + "'");
    }
    cells.push_back({n, p, pi, trials, fs, fu});
  }
  if (cells.empty()) throw InvalidInput("report: no rows");
  return cells;
}

}  // namespace bmland
