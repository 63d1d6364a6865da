#pragma once

#include <optional>
#include <vector>

#include <json.hpp>

#include "bmland/manifold.hpp"
#include "bmland/objective.hpp"
#include "bmland/rng.hpp"

namespace bmland {

// All verdicts below compare against tol * max(1, |matrix|_F).

struct PseudoReport {
  Vector per_index_min_eigs;  // lambda_min(M[i]) for every i
  double full_min_eig;        // lambda_min(M)
  bool pseudo_psd;
  bool pseudo_pd;
  bool strictly_pseudo_pd;
  bool strictly_pseudo_psd;
};

PseudoReport pseudo_report(const SymMatrix& m, double tol = kDefaultCertTol);

struct FirstOrderResult {
  bool ok;
  double grad_norm;
  Multiplier nu;
};

FirstOrderResult first_order_check(const SymMatrix& a, const Point& y, double tol = kDefaultCertTol);

struct SecondOrderResult {
  bool applicable;  // false when Y is not first-order critical
  bool ok;
  double hess_min_eig;
};

// Exact dense check. Throws TooLarge above the spectrum size guard.
SecondOrderResult second_order_check(const SymMatrix& a, const Point& y, double tol = kDefaultCertTol,
                                     Eigen::Index max_dim = kDefaultSpectrumMaxDim);

struct GlobalOptimalityResult {
  bool ok;
  double slack_min_eig;  // lambda_min(A - diag(nu))
};

GlobalOptimalityResult global_optimality_check(const SymMatrix& a, const Point& y,
                                               double tol = kDefaultCertTol);

// Eigenvalues below -tol * max(1, |M|), with multiplicity.
int negative_eigen_count(const SymMatrix& m, double tol = kDefaultCertTol);

struct DegeneracyResult {
  Eigen::Index hess_rank;
  Eigen::Index rank_bound;       // p(n - p)
  Eigen::Index nondegenerate_rank;  // np - n - p(p-1)/2
  bool degenerate;
};

DegeneracyResult degeneracy_check(const SymMatrix& a, const Point& y, double tol = kDefaultCertTol,
                                  Eigen::Index max_dim = kDefaultSpectrumMaxDim);

// Basis of W = {[G; -G] : G symmetric, zero diagonal} at the axial point, one
// vector per pair i < j (G = E_ij + E_ji).
std::vector<TangentVector> kernel_subspace_basis(Eigen::Index n);

struct KernelSubspaceResult {
  std::vector<TangentVector> basis;
  double max_abs_quadratic;
};

// Requires A = [[B, B], [B, B]] + diag(alpha); throws InvalidInput otherwise.
KernelSubspaceResult kernel_subspace_check(const SymMatrix& a);

bool is_block_form(const SymMatrix& a, double tol = 1e-12);

struct KktCertificate {
  double b;
  double slack_min_eig;
  double sj_norm;
  Eigen::Index slack_rank;
  bool ok;
  bool strict_complementarity;
};

// Dual certificate S = A - b I with b = 2(1 - (p-1)/(p-1.5)) for the block
// almost-average instance with n = 2p.
KktCertificate kkt_certificate_almost_average(Eigen::Index p, double tol = kDefaultCertTol);

struct CriticalityReport {
  double grad_norm;
  Multiplier nu;
  bool first_order;
  std::optional<double> hess_min_eig;
  std::optional<bool> second_order;
  double slack_min_eig;
  bool globally_optimal;
  bool spurious;
  std::optional<Eigen::Index> hess_rank;
};

// Runs every check that applies. The Hessian part is skipped (left empty)
// when Y is not first-order critical or the size guard is exceeded.
CriticalityReport criticality_report(const SymMatrix& a, const Point& y, double tol = kDefaultCertTol,
                                     Eigen::Index max_dim = kDefaultSpectrumMaxDim);

// Non-certifying estimate of the smallest Hessian eigenvalue for instances
// beyond the size guard: shifted power iteration from random tangent starts.
// The value is an upper estimate of the true minimum.
double sampled_min_curvature(const SymMatrix& a, const Point& y, Rng& rng, int probes = 4,
                             int iterations = 200);

nlohmann::json to_json(const PseudoReport& r);
nlohmann::json to_json(const CriticalityReport& r);
nlohmann::json to_json(const KktCertificate& r);
nlohmann::json to_json(const DegeneracyResult& r);

}  // namespace bmland
