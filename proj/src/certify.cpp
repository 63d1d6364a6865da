#include "bmland/certify.hpp"

#include <cmath>
#include <limits>

#include "bmland/instances.hpp"
#include "bmland/linalg.hpp"

namespace bmland {

PseudoReport pseudo_report(const SymMatrix& m, double tol) {
  const Eigen::Index k = m.dim();
  if (k < 2) throw InvalidDimensions("pseudo_report: dimension must be >= 2");
  const double thr = relative_tol(tol, m.matrix());

  PseudoReport r;
  r.per_index_min_eigs.resize(k);
  for (Eigen::Index i = 0; i < k; ++i) r.per_index_min_eigs(i) = min_eigenvalue(remove_index(m.matrix(), i));
  r.full_min_eig = min_eigenvalue(m.matrix());
  const double worst_sub = r.per_index_min_eigs.minCoeff();
  r.pseudo_pd = worst_sub > thr;
  r.pseudo_psd = worst_sub >= -thr;
  const bool not_psd = r.full_min_eig < -thr;
  r.strictly_pseudo_pd = r.pseudo_pd && not_psd;
  r.strictly_pseudo_psd = r.pseudo_psd && not_psd;
  return r;
}

FirstOrderResult first_order_check(const SymMatrix& a, const Point& y, double tol) {
  auto state = evaluate_first_order(a, y);
  const double gn = state.grad.norm();
  return {gn <= relative_tol(tol, a.matrix()), gn, std::move(state.nu)};
}

SecondOrderResult second_order_check(const SymMatrix& a, const Point& y, double tol, Eigen::Index max_dim) {
  if (!first_order_check(a, y, tol).ok) {
    return {false, false, std::numeric_limits<double>::quiet_NaN()};
  }
  const auto spec = hessian_spectrum(a, y, max_dim);
  const double min_eig = spec.eigenvalues.size() ? spec.eigenvalues(0) : 0.0;
  return {true, min_eig >= -relative_tol(tol, a.matrix()), min_eig};
}

GlobalOptimalityResult global_optimality_check(const SymMatrix& a, const Point& y, double tol) {
  const Multiplier nu = multiplier_nu(a, y);
  Matrix slack = a.matrix();
  slack.diagonal() -= nu.nu;
  const double min_eig = min_eigenvalue(slack);
  return {min_eig >= -relative_tol(tol, a.matrix()), min_eig};
}

int negative_eigen_count(const SymMatrix& m, double tol) {
  const double thr = relative_tol(tol, m.matrix());
  const Vector ev = symmetric_eigenvalues(m.matrix());
  return static_cast<int>((ev.array() < -thr).count());
}

DegeneracyResult degeneracy_check(const SymMatrix& a, const Point& y, double tol, Eigen::Index max_dim) {
  const auto spec = hessian_spectrum(a, y, max_dim);
  const double thr = relative_tol(tol, a.matrix());
  const Eigen::Index n = y.n();
  const Eigen::Index p = y.p();
  DegeneracyResult r;
  r.hess_rank = (spec.eigenvalues.array().abs() > thr).count();
  r.rank_bound = p * (n - p);
  r.nondegenerate_rank = n * p - n - p * (p - 1) / 2;
  r.degenerate = r.hess_rank < r.nondegenerate_rank;
  return r;
}

bool is_block_form(const SymMatrix& a, double tol) {
  const Eigen::Index n = a.dim();
  if (n % 2 != 0) return false;
  const Eigen::Index k = n / 2;
  const Matrix& m = a.matrix();
  const double thr = tol * std::max(1.0, m.cwiseAbs().maxCoeff());
  const Matrix b = m.topRightCorner(k, k);
  for (Eigen::Index i = 0; i < k; ++i) {
    for (Eigen::Index j = 0; j < k; ++j) {
      if (std::abs(m(k + i, j) - b(i, j)) > thr) return false;
      if (i == j) continue;
      if (std::abs(m(i, j) - b(i, j)) > thr || std::abs(m(k + i, k + j) - b(i, j)) > thr) return false;
    }
  }
  return true;
}

std::vector<TangentVector> kernel_subspace_basis(Eigen::Index n) {
  const Point base = axial(n);
  const Eigen::Index k = n / 2;
  std::vector<TangentVector> basis;
  basis.reserve(static_cast<std::size_t>(k * (k - 1) / 2));
  for (Eigen::Index i = 0; i < k; ++i) {
    for (Eigen::Index j = i + 1; j < k; ++j) {
      RowMatrix u = RowMatrix::Zero(n, k);
      u(i, j) = u(j, i) = 1.0;
      u(k + i, j) = u(k + j, i) = -1.0;
      basis.emplace_back(base, std::move(u));
    }
  }
  return basis;
}

KernelSubspaceResult kernel_subspace_check(const SymMatrix& a) {
  if (!is_block_form(a)) throw InvalidInput("kernel_subspace_check: cost matrix is not of the form [[B,B],[B,B]] + diag(alpha)");
  const Point base = axial(a.dim());
  KernelSubspaceResult r{kernel_subspace_basis(a.dim()), 0.0};
  for (const auto& u : r.basis) {
    r.max_abs_quadratic = std::max(r.max_abs_quadratic, std::abs(hessian_quadratic(a, u.base(), u)));
  }
  return r;
}

KktCertificate kkt_certificate_almost_average(Eigen::Index p, double tol) {
  if (p < 2) throw InvalidDimensions("kkt_certificate_almost_average: p must be >= 2");
  const Eigen::Index n = 2 * p;
  const double pd = static_cast<double>(p);
  const SymMatrix a = block_cost(almost_average(p));

  KktCertificate c;
  c.b = 2.0 * (1.0 - (pd - 1.0) / (pd - 1.5));
  Matrix s = a.matrix();
  s.diagonal().array() -= c.b;
  c.sj_norm = (s * Matrix::Ones(n, n)).norm();
  const Vector ev = symmetric_eigenvalues(s);
  c.slack_min_eig = ev(0);
  const double thr = relative_tol(tol, s);
  c.slack_rank = (ev.array().abs() > thr).count();
  c.ok = c.sj_norm <= thr && c.slack_min_eig >= -thr;
  c.strict_complementarity = c.slack_rank == n - 1;
  return c;
}

CriticalityReport criticality_report(const SymMatrix& a, const Point& y, double tol, Eigen::Index max_dim) {
  CriticalityReport r;
  auto first = first_order_check(a, y, tol);
  r.grad_norm = first.grad_norm;
  r.nu = std::move(first.nu);
  r.first_order = first.ok;

  Matrix slack = a.matrix();
  slack.diagonal() -= r.nu.nu;
  r.slack_min_eig = min_eigenvalue(slack);
  const double thr = relative_tol(tol, a.matrix());
  r.globally_optimal = r.first_order && r.slack_min_eig >= -thr;
  r.spurious = r.first_order && !r.globally_optimal;

  if (r.first_order && y.n() * (y.p() - 1) <= max_dim) {
    const auto spec = hessian_spectrum(a, y, max_dim);
    const double min_eig = spec.eigenvalues.size() ? spec.eigenvalues(0) : 0.0;
    r.hess_min_eig = min_eig;
    r.second_order = min_eig >= -thr;
    r.hess_rank = (spec.eigenvalues.array().abs() > thr).count();
  }
  return r;
}

double sampled_min_curvature(const SymMatrix& a, const Point& y, Rng& rng, int probes, int iterations) {
  require_matching(a, y, "sampled_min_curvature");
  const Multiplier nu = multiplier_nu(a, y);
  // |Hess| <= 2 |A - diag(nu)|_2 <= 2 (|A|_F + |nu|_inf).
  const double shift = 2.0 * (a.frobenius_norm() + nu.nu.cwiseAbs().maxCoeff());
  double best = std::numeric_limits<double>::infinity();
  for (int probe = 0; probe < probes; ++probe) {
    TangentVector u = random_tangent(y, rng);
    if (u.norm() == 0.0) continue;
    u = u * (1.0 / u.norm());
    for (int it = 0; it < iterations; ++it) {
      // (shift I - H) u, renormalized, converges to the bottom eigenvector.
      TangentVector next = u * shift - hessian_apply(a, nu, u);
      const double nn = next.norm();
      if (nn == 0.0) break;
      u = next * (1.0 / nn);
    }
    best = std::min(best, inner(hessian_apply(a, nu, u), u));
  }
  return best;
}

namespace {

nlohmann::json vec_json(const Vector& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

}  // namespace

nlohmann::json to_json(const PseudoReport& r) {
  return {{"per_index_min_eigs", vec_json(r.per_index_min_eigs)},
          {"full_min_eig", r.full_min_eig},
          {"pseudo_psd", r.pseudo_psd},
          {"pseudo_pd", r.pseudo_pd},
          {"strictly_pseudo_pd", r.strictly_pseudo_pd},
          {"strictly_pseudo_psd", r.strictly_pseudo_psd}};
}

nlohmann::json to_json(const CriticalityReport& r) {
  nlohmann::json j = {{"grad_norm", r.grad_norm},
                      {"nu", vec_json(r.nu.nu)},
                      {"first_order", r.first_order},
                      {"slack_min_eig", r.slack_min_eig},
                      {"globally_optimal", r.globally_optimal},
                      {"spurious", r.spurious}};
  j["hess_min_eig"] = r.hess_min_eig ? nlohmann::json(*r.hess_min_eig) : nlohmann::json(nullptr);
  j["second_order"] = r.second_order ? nlohmann::json(*r.second_order) : nlohmann::json(nullptr);
  j["hess_rank"] = r.hess_rank ? nlohmann::json(*r.hess_rank) : nlohmann::json(nullptr);
  return j;
}

nlohmann::json to_json(const KktCertificate& r) {
  return {{"b", r.b},
          {"slack_min_eig", r.slack_min_eig},
          {"SJ_norm", r.sj_norm},
          {"slack_rank", r.slack_rank},
          {"ok", r.ok},
          {"strict_complementarity", r.strict_complementarity}};
}

nlohmann::json to_json(const DegeneracyResult& r) {
  return {{"hess_rank", r.hess_rank},
          {"rank_bound", r.rank_bound},
          {"nondegenerate_rank", r.nondegenerate_rank},
          {"degenerate", r.degenerate}};
}

}  // namespace bmland
