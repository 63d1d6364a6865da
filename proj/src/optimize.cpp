#include "bmland/optimize.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>

namespace bmland {

Method method_from_string(const std::string& s) {
  if (s == "rgd") return Method::FixedStepRGD;
  if (s == "armijo") return Method::ArmijoRGD;
  if (s == "tr") return Method::TrustRegion;
  throw InvalidInput("unknown method '" + s + "'");
}

std::string to_string(Method m) {
  switch (m) {
    case Method::FixedStepRGD: return "rgd";
    case Method::ArmijoRGD: return "armijo";
    case Method::TrustRegion: return "tr";
  }
  return "unknown";
}

std::string to_string(Classification c) {
  switch (c) {
    case Classification::Spurious: return "spurious";
    case Classification::Global: return "global";
    case Classification::Unknown: return "unknown";
  }
  return "unknown";
}

void SolverConfig::validate() const {
  if (eta < 0.0) throw InvalidInput("SolverConfig: eta must be positive (or 0 for eta_safe)");
  if (max_iters < 0) throw InvalidInput("SolverConfig: max_iters must be nonnegative");
  if (!(grad_tol > 0.0)) throw InvalidInput("SolverConfig: grad_tol must be positive");
  if (!(armijo.c1 > 0.0 && armijo.c1 < 1.0) || !(armijo.shrink > 0.0 && armijo.shrink < 1.0) ||
      armijo.max_backtracks < 1) {
    throw InvalidInput("SolverConfig: invalid Armijo parameters");
  }
  if (!(tr.rho_accept > 0.0 && tr.rho_accept < 1.0)) throw InvalidInput("SolverConfig: rho_accept must lie in (0, 1)");
  if (tr.initial_radius < 0.0 || tr.max_radius < 0.0 || tr.tcg_max_iters < 0 || !(tr.tcg_kappa > 0.0) ||
      !(tr.tcg_theta > 0.0)) {
    throw InvalidInput("SolverConfig: invalid trust-region parameters");
  }
}

int SolverConfig::resolved_max_iters() const {
  if (max_iters > 0) return max_iters;
  return method == Method::TrustRegion ? 500 : 10000;
}

double eta_safe(const SymMatrix& a) {
  const double norm = a.frobenius_norm();
  return norm > 0.0 ? 1.0 / (4.0 * norm) : 1.0;
}

Point rgd_step(const SymMatrix& a, const Point& y, double eta) {
  if (!(eta > 0.0)) throw InvalidInput("rgd_step: eta must be positive");
  return retract(y, -eta * riemannian_gradient(a, y));
}

namespace {

bool keep_iterates(const SolverConfig& cfg, const Point& y0) {
  switch (cfg.keep_iterates) {
    case IteratePolicy::Always: return true;
    case IteratePolicy::Never: return false;
    case IteratePolicy::Auto:
      return static_cast<double>(y0.n()) * static_cast<double>(y0.p()) * cfg.resolved_max_iters() <=
             static_cast<double>(1 << 22);
  }
  return false;
}

class Recorder {
 public:
  Recorder(const SolverConfig& cfg, const Point& y0)
      : keep_(keep_iterates(cfg, y0)), even_(y0.n() % 2 == 0), trace_{{}, {}, {}, {}, y0, false, 0} {}

  void record(const Point& y, double value, double grad_norm) {
    if (keep_) trace_.iterates.push_back(y);
    trace_.objectives.push_back(value);
    trace_.grad_norms.push_back(grad_norm);
    if (even_) trace_.potentials.push_back(potential_phi(y));
  }

  Trace finish(const Point& y, bool converged, int iterations) {
    trace_.final_point = y;
    trace_.converged = converged;
    trace_.iterations = iterations;
    return std::move(trace_);
  }

 private:
  bool keep_;
  bool even_;
  Trace trace_;
};

void require_finite(const Point& candidate, double value, const Point& last, int iteration) {
  if (!std::isfinite(value) || !candidate.matrix().allFinite()) {
    throw NumericalFailure("non-finite iterate at iteration " + std::to_string(iteration), last.matrix(),
                           iteration);
  }
}

// Retraction that reports overflow as a numerical failure rather than as an
// unnormalizable row.
Point checked_retract(const Point& y, const TangentVector& step, int iteration) {
  if (!step.matrix().allFinite() || !(y.matrix() + step.matrix()).allFinite()) {
    throw NumericalFailure("non-finite step at iteration " + std::to_string(iteration), y.matrix(), iteration);
  }
  try {
    return retract(y, step);
  } catch (const InvalidInput& e) {
    throw NumericalFailure(std::string(e.what()) + " at iteration " + std::to_string(iteration), y.matrix(),
                           iteration);
  }
}

}  // namespace

Trace rgd_run(const SymMatrix& a, const Point& y0, const SolverConfig& cfg) {
  cfg.validate();
  if (cfg.method == Method::TrustRegion) throw InvalidInput("rgd_run: method must be rgd or armijo");
  require_matching(a, y0, "rgd_run");

  const int max_iters = cfg.resolved_max_iters();
  const double tol = cfg.grad_tol * std::max(1.0, a.frobenius_norm());
  const double eta = cfg.eta > 0.0 ? cfg.eta : eta_safe(a);
  const double armijo_start = cfg.eta > 0.0 ? cfg.eta : 4.0 * eta_safe(a);

  Recorder rec(cfg, y0);
  Point y = y0;
  auto state = evaluate_first_order(a, y);
  require_finite(y, state.value, y, 0);
  int it = 0;
  for (;; ++it) {
    const double gnorm = state.grad.norm();
    rec.record(y, state.value, gnorm);
    if (gnorm <= tol) return rec.finish(y, true, it);
    if (it == max_iters) break;

    Point next = y;
    if (cfg.method == Method::FixedStepRGD) {
      next = checked_retract(y, -eta * state.grad, it + 1);
    } else {
      double step = armijo_start;
      bool accepted = false;
      for (int b = 0; b < cfg.armijo.max_backtracks; ++b, step *= cfg.armijo.shrink) {
        Point trial = checked_retract(y, -step * state.grad, it + 1);
        if (objective_value(a, trial) <= state.value - cfg.armijo.c1 * step * gnorm * gnorm) {
          next = std::move(trial);
          accepted = true;
          break;
        }
      }
      if (!accepted) break;  // no sufficient decrease at any step length
    }
    auto next_state = evaluate_first_order(a, next);
    require_finite(next, next_state.value, y, it + 1);
    y = std::move(next);
    state = std::move(next_state);
  }
  return rec.finish(y, false, it);
}

namespace {

struct TcgResult {
  TangentVector step;
  TangentVector h_step;
  bool hit_boundary;
};

// Steihaug-Toint truncated CG on m(s) = <g, s> + 1/2 <H s, s>, |s| <= radius.
TcgResult truncated_cg(const SymMatrix& a, const Multiplier& nu, const TangentVector& grad, double radius,
                       const TrustRegionConfig& cfg, int max_inner) {
  TangentVector s = TangentVector::zero(grad.base());
  TangentVector hs = s;
  TangentVector r = grad;
  TangentVector d = -r;
  double rr = inner(r, r);
  const double r0 = std::sqrt(rr);
  const double stop = r0 * std::min(std::pow(r0, cfg.tcg_theta), cfg.tcg_kappa);

  for (int j = 0; j < max_inner; ++j) {
    const TangentVector hd = hessian_apply(a, nu, d);
    const double dhd = inner(d, hd);
    const double alpha = rr / dhd;
    const double ss = inner(s, s);
    const double sd = inner(s, d);
    const double dd = inner(d, d);
    const double s_next_sq = ss + 2.0 * alpha * sd + alpha * alpha * dd;
    if (dhd <= 0.0 || s_next_sq >= radius * radius) {
      const double tau = (-sd + std::sqrt(sd * sd + dd * (radius * radius - ss))) / dd;
      return {s + tau * d, hs + tau * hd, true};
    }
    s = s + alpha * d;
    hs = hs + alpha * hd;
    r = r + alpha * hd;
    const double rr_next = inner(r, r);
    if (std::sqrt(rr_next) <= stop) break;
    d = -r + (rr_next / rr) * d;
    rr = rr_next;
  }
  return {s, hs, false};
}

}  // namespace

Trace tr_run(const SymMatrix& a, const Point& y0, const SolverConfig& cfg) {
  cfg.validate();
  if (cfg.method != Method::TrustRegion) throw InvalidInput("tr_run: method must be tr");
  require_matching(a, y0, "tr_run");

  const double np = static_cast<double>(y0.n() * y0.p());
  const double max_radius = cfg.tr.max_radius > 0.0 ? cfg.tr.max_radius : std::sqrt(np);
  double radius = cfg.tr.initial_radius > 0.0 ? cfg.tr.initial_radius : 0.1 * std::sqrt(np);
  radius = std::min(radius, max_radius);
  const int max_inner = cfg.tr.tcg_max_iters > 0 ? cfg.tr.tcg_max_iters
                                                 : static_cast<int>(std::max<Eigen::Index>(1, y0.n() * (y0.p() - 1)));
  const int max_iters = cfg.resolved_max_iters();
  const double tol = cfg.grad_tol * std::max(1.0, a.frobenius_norm());

  Recorder rec(cfg, y0);
  Point y = y0;
  auto state = evaluate_first_order(a, y);
  require_finite(y, state.value, y, 0);
  int it = 0;
  for (;; ++it) {
    const double gnorm = state.grad.norm();
    rec.record(y, state.value, gnorm);
    if (gnorm <= tol) return rec.finish(y, true, it);
    if (it == max_iters) break;

    const auto tcg = truncated_cg(a, state.nu, state.grad, radius, cfg.tr, max_inner);
    Point candidate = checked_retract(y, tcg.step, it + 1);
    auto cand_state = evaluate_first_order(a, candidate);
    require_finite(candidate, cand_state.value, y, it + 1);

    const double model_decrease = -(inner(state.grad, tcg.step) + 0.5 * inner(tcg.h_step, tcg.step));
    // Regularized ratio: keeps the test meaningful when both decreases are at
    // roundoff level.
    const double reg = std::max(1.0, std::abs(state.value)) * std::numeric_limits<double>::epsilon() * 1e3;
    const double rho = (state.value - cand_state.value + reg) / (model_decrease + reg);

    if (!(rho >= 0.25)) {
      radius *= 0.25;
    } else if (rho > 0.75 && tcg.hit_boundary) {
      radius = std::min(2.0 * radius, max_radius);
    }
    if (model_decrease > 0.0 && rho > cfg.tr.rho_accept) {
      y = std::move(candidate);
      state = std::move(cand_state);
    }
    if (radius < 1e-15 * max_radius) {
      ++it;
      rec.record(y, state.value, state.grad.norm());
      break;
    }
  }
  return rec.finish(y, false, it);
}

Trace solve(const SymMatrix& a, const Point& y0, const SolverConfig& cfg) {
  return cfg.method == Method::TrustRegion ? tr_run(a, y0, cfg) : rgd_run(a, y0, cfg);
}

Classification classify_value(double objective, double spurious_value, double optimal_value, double margin) {
  const double span = spurious_value - optimal_value;
  if (!(span > 0.0)) throw InvalidInput("classify_limit: spurious_value must exceed optimal_value");
  if (!(margin > 0.0)) throw InvalidInput("classify_limit: margin must be positive");
  if (std::abs(objective - spurious_value) <= margin * span) return Classification::Spurious;
  if (std::abs(objective - optimal_value) <= margin * span) return Classification::Global;
  return Classification::Unknown;
}

Classification classify_limit(const SymMatrix& a, const Point& y, double spurious_value, double optimal_value,
                              double margin) {
  return classify_value(objective_value(a, y), spurious_value, optimal_value, margin);
}

void write_trace_csv(std::ostream& out, const Trace& trace) {
  out << "iter,objective,grad_norm,phi\n";
  char buf[128];
  for (std::size_t i = 0; i < trace.objectives.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%zu,%.17g,%.17g,", i, trace.objectives[i], trace.grad_norms[i]);
    out << buf;
    if (i < trace.potentials.size()) {
      std::snprintf(buf, sizeof buf, "%.17g", trace.potentials[i]);
      out << buf;
    }
    out << '\n';
  }
}

nlohmann::json trace_summary(const Trace& trace, std::optional<Classification> classification) {
  nlohmann::json j = {{"converged", trace.converged},
                      {"iterations", trace.iterations},
                      {"final_objective", trace.objectives.empty() ? 0.0 : trace.objectives.back()}};
  if (classification) j["classification"] = to_string(*classification);
  return j;
}

}  // namespace bmland
