#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "bmland/manifold.hpp"
#include "bmland/objective.hpp"

namespace bmland {

class NumericalFailure : public Error {
 public:
  NumericalFailure(const std::string& what, RowMatrix last_finite, int iteration)
      : Error(what), last_finite_(std::move(last_finite)), iteration_(iteration) {}
  const RowMatrix& last_finite() const { return last_finite_; }
  int iteration() const { return iteration_; }

 private:
  RowMatrix last_finite_;
  int iteration_;
};

enum class Method { FixedStepRGD, ArmijoRGD, TrustRegion };
enum class IteratePolicy { Auto, Never, Always };

Method method_from_string(const std::string& s);  // "rgd" | "armijo" | "tr"
std::string to_string(Method m);

struct ArmijoConfig {
  double c1 = 1e-4;
  double shrink = 0.5;
  int max_backtracks = 30;
};

// Zero radius / inner-iteration values are resolved per problem:
// initial_radius = 0.1 sqrt(np), max_radius = sqrt(np), tcg_max_iters = n(p-1).
struct TrustRegionConfig {
  double initial_radius = 0.0;
  double max_radius = 0.0;
  double rho_accept = 0.1;
  int tcg_max_iters = 0;
  double tcg_kappa = 0.1;
  double tcg_theta = 1.0;
};

struct SolverConfig {
  Method method = Method::TrustRegion;
  double eta = 0.0;  // fixed / initial Armijo step; 0 selects eta_safe(A)
  int max_iters = 0;  // 0 selects 10000 (RGD) or 500 (TR)
  double grad_tol = 1e-8;  // relative to max(1, |A|_F)
  ArmijoConfig armijo;
  TrustRegionConfig tr;
  IteratePolicy keep_iterates = IteratePolicy::Auto;

  void validate() const;
  int resolved_max_iters() const;
};

// 1 / (4 |A|_F).
double eta_safe(const SymMatrix& a);

struct Trace {
  std::vector<Point> iterates;  // empty unless kept
  std::vector<double> objectives;
  std::vector<double> grad_norms;
  std::vector<double> potentials;  // empty for odd n
  Point final_point;
  bool converged = false;
  int iterations = 0;
};

Point rgd_step(const SymMatrix& a, const Point& y, double eta);

Trace rgd_run(const SymMatrix& a, const Point& y0, const SolverConfig& cfg);
Trace tr_run(const SymMatrix& a, const Point& y0, const SolverConfig& cfg);

// Dispatches on cfg.method.
Trace solve(const SymMatrix& a, const Point& y0, const SolverConfig& cfg);

enum class Classification { Spurious, Global, Unknown };
std::string to_string(Classification c);

Classification classify_value(double objective, double spurious_value, double optimal_value, double margin);
Classification classify_limit(const SymMatrix& a, const Point& y, double spurious_value,
                              double optimal_value, double margin = 1e-3);

// iter,objective,grad_norm,phi
void write_trace_csv(std::ostream& out, const Trace& trace);
nlohmann::json trace_summary(const Trace& trace, std::optional<Classification> classification = std::nullopt);

}  // namespace bmland
