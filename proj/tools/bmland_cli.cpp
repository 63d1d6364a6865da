#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "bmland/certify.hpp"
#include "bmland/experiments.hpp"
#include "bmland/instances.hpp"
#include "bmland/optimize.hpp"

using namespace bmland;

namespace {

constexpr int kExitInvalid = 1;
constexpr int kExitNumerical = 2;

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void spit(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write '" + path + "'");
  out << text;
  if (!out.flush()) throw IoError("write failed for '" + path + "'");
}

SymMatrix load_instance(const std::string& path) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(slurp(path));
  } catch (const nlohmann::json::exception& e) {
    throw InvalidInput("instance '" + path + "': " + e.what());
  }
  return instance_from_json(j).realize();
}

Point load_point(const std::string& path, bool normalize) {
  return Point(read_matrix_file(path), normalize ? RowPolicy::Normalize : RowPolicy::Reject);
}

std::vector<Eigen::Index> to_index_list(const std::vector<long long>& v) {
  return {v.begin(), v.end()};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spurious local minima of the Burer-Monteiro Max-Cut factorization"};
  app.require_subcommand(1);

  // gen
  auto* gen = app.add_subcommand("gen", "Write a block cost instance as JSON");
  std::string construction = "almost-average";
  long long gen_n = 0;
  double gen_mu = 0.0;
  std::uint64_t gen_seed = 0;
  std::string gen_out;
  gen->add_option("--construction", construction)->check(CLI::IsMember({"almost-average", "random"}));
  gen->add_option("--n", gen_n, "even dimension n >= 4 (block size n/2)")->required();
  gen->add_option("--mu", gen_mu, "mean of the random factor entries (default 2 sqrt(log k))");
  gen->add_option("--seed", gen_seed);
  gen->add_option("--out", gen_out)->required();

  // certify
  auto* cert = app.add_subcommand("certify", "Criticality report for a point");
  std::string cert_instance, cert_point;
  bool cert_axial = false, cert_normalize = false;
  double cert_tol = kDefaultCertTol;
  cert->add_option("--instance", cert_instance)->required();
  auto* cert_point_opt = cert->add_option("--point", cert_point);
  auto* cert_axial_flag = cert->add_flag("--axial", cert_axial, "use the axial point");
  cert_point_opt->excludes(cert_axial_flag);
  cert->add_flag("--normalize", cert_normalize, "normalize point rows instead of rejecting them");
  cert->add_option("--tol", cert_tol)->check(CLI::PositiveNumber);

  // optimize
  auto* opt = app.add_subcommand("optimize", "Run a solver from a starting point");
  std::string opt_instance, opt_point, opt_method = "tr", opt_trace, opt_final;
  bool opt_normalize = false;
  SolverConfig opt_cfg;
  opt->add_option("--instance", opt_instance)->required();
  opt->add_option("--point", opt_point)->required();
  opt->add_flag("--normalize", opt_normalize);
  opt->add_option("--method", opt_method)->check(CLI::IsMember({"rgd", "armijo", "tr"}));
  opt->add_option("--eta", opt_cfg.eta, "step size (default 1/(4|A|_F))");
  opt->add_option("--max-iters", opt_cfg.max_iters);
  opt->add_option("--grad-tol", opt_cfg.grad_tol);
  opt->add_option("--trace", opt_trace, "CSV trace: iter,objective,grad_norm,phi")->required();
  opt->add_option("--final-point", opt_final, "write the final point as text");

  // phase
  auto* phase = app.add_subcommand("phase", "Basin-of-attraction sweep around the axial point");
  std::vector<long long> phase_n;
  ExperimentConfig phase_cfg;
  std::string phase_out, phase_format = "csv", phase_method = "tr";
  phase->add_option("--n", phase_n)->delimiter(',')->required();
  phase->add_option("--pi", phase_cfg.pi_values)->delimiter(',')->required();
  phase->add_option("--trials", phase_cfg.trials_per_cell)->required();
  phase->add_option("--seed", phase_cfg.seed0);
  phase->add_option("--out", phase_out)->required();
  phase->add_option("--format", phase_format)->check(CLI::IsMember({"csv", "json"}));
  phase->add_option("--method", phase_method)->check(CLI::IsMember({"rgd", "armijo", "tr"}));
  phase->add_option("--margin", phase_cfg.margin);
  phase->add_option("--threads", phase_cfg.threads, "worker threads (0: all cores)");

  // report
  auto* rep = app.add_subcommand("report", "Re-emit a phase report");
  std::string rep_in, rep_format = "csv";
  rep->add_option("--in", rep_in)->required();
  rep->add_option("--format", rep_format)->check(CLI::IsMember({"csv", "json"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitInvalid;
  }

  try {
    if (*gen) {
      InstanceSpec spec;
      spec.n = gen_n;
      spec.p = gen_n / 2;
      spec.construction = construction_from_string(construction);
      spec.alpha = Vector::Zero(std::max<long long>(gen_n, 0));
      if (spec.construction == InstanceSpec::Construction::RandomGaussian) {
        if (gen_n < 4 || gen_n % 2 != 0) throw InvalidDimensions("gen: n must be even and >= 4");
        spec.seed = gen_seed;
        spec.mu = gen_mu > 0.0 ? gen_mu : default_mu(gen_n / 2);
        Rng rng(gen_seed);
        spec.block = random_pseudo_pd(gen_n / 2, spec.mu, rng).m.matrix();
      }
      spec.realize();  // validates dimensions
      spit(gen_out, to_json(spec).dump(2) + "\n");
    } else if (*cert) {
      const SymMatrix a = load_instance(cert_instance);
      if (!cert_axial && cert_point.empty()) throw InvalidInput("certify: --point or --axial is required");
      const Point y = cert_axial ? axial(a.dim()) : load_point(cert_point, cert_normalize);
      std::cout << to_json(criticality_report(a, y, cert_tol)).dump(2) << "\n";
    } else if (*opt) {
      const SymMatrix a = load_instance(opt_instance);
      const Point y0 = load_point(opt_point, opt_normalize);
      opt_cfg.method = method_from_string(opt_method);
      const Trace trace = solve(a, y0, opt_cfg);
      std::ostringstream csv;
      write_trace_csv(csv, trace);
      spit(opt_trace, csv.str());
      if (!opt_final.empty()) write_matrix_file(opt_final, trace.final_point.matrix());
      std::cout << trace_summary(trace).dump(2) << "\n";
    } else if (*phase) {
      phase_cfg.n_values = to_index_list(phase_n);
      phase_cfg.solver.method = method_from_string(phase_method);
      phase_cfg.output_path = phase_out;
      const auto cells = run_phase_transition(phase_cfg);
      emit_report(cells, report_format_from_string(phase_format), phase_out);
    } else if (*rep) {
      std::cout << format_report(parse_report(slurp(rep_in)), report_format_from_string(rep_format));
    }
  } catch (const NumericalFailure& e) {
    std::fprintf(stderr, "numerical failure: %s\n", e.what());
    return kExitNumerical;
  } catch (const ConstructionFailed& e) {
    std::fprintf(stderr, "construction failed: %s\n", e.what());
    return kExitNumerical;
  } catch (const Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitInvalid;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitInvalid;
  }
  return 0;
}
