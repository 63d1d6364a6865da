#pragma once

#include <vector>

#include "bmland/manifold.hpp"
#include "bmland/types.hpp"

namespace bmland {

// Dense symmetric cost matrix. Construction rejects matrices whose asymmetry
// exceeds 1e-12 * max(1, max|a_ij|).
class SymMatrix {
 public:
  explicit SymMatrix(Matrix entries);
  static SymMatrix zero(Eigen::Index dim) { return SymMatrix(Matrix::Zero(dim, dim)); }
  static SymMatrix identity(Eigen::Index dim) { return SymMatrix(Matrix::Identity(dim, dim)); }

  Eigen::Index dim() const { return entries_.rows(); }
  const Matrix& matrix() const { return entries_; }
  double operator()(Eigen::Index i, Eigen::Index j) const { return entries_(i, j); }
  double frobenius_norm() const { return entries_.norm(); }

 private:
  Matrix entries_;
};

// nu_i = sum_j A_ij <Y_i, Y_j>.
struct Multiplier {
  Vector nu;
};

double objective_value(const SymMatrix& a, const Point& y);

Multiplier multiplier_nu(const SymMatrix& a, const Point& y);

// 2 (A - diag(nu)) Y.
TangentVector riemannian_gradient(const SymMatrix& a, const Point& y);

// 2 Proj_Y((A - diag(nu)) U).
TangentVector hessian_apply(const SymMatrix& a, const Point& y, const TangentVector& u);
// Same, with a multiplier already computed for (A, Y).
TangentVector hessian_apply(const SymMatrix& a, const Multiplier& nu, const TangentVector& u);

// 2 <A - diag(nu), U U^T>.
double hessian_quadratic(const SymMatrix& a, const Point& y, const TangentVector& u);

// Everything a solver needs at one point, computed from a single product AY.
struct FirstOrderState {
  double value;
  Multiplier nu;
  TangentVector grad;
};
FirstOrderState evaluate_first_order(const SymMatrix& a, const Point& y);

// Orthonormal basis of Y_i^perp for every row, from a Householder reflector
// taking e_1 to +-Y_i. Block i is p x (p-1).
std::vector<Matrix> tangent_row_bases(const Point& y);

inline constexpr Eigen::Index kDefaultSpectrumMaxDim = 2000;

struct HessianSpectrum {
  Vector eigenvalues;  // ascending, length n(p-1)
  TangentVector min_vector;
  Matrix coordinates_matrix;  // Hessian in the tangent basis
};

// Full spectrum of the Riemannian Hessian on the n(p-1)-dimensional tangent
// space. Throws TooLarge when n(p-1) > max_dim.
HessianSpectrum hessian_spectrum(const SymMatrix& a, const Point& y,
                                 Eigen::Index max_dim = kDefaultSpectrumMaxDim);

// Step used by the finite-difference derivative checks.
inline double fd_step(const Point& y) { return 1e-5 * std::max(1.0, y.matrix().norm()); }

void require_matching(const SymMatrix& a, const Point& y, const char* what);

}  // namespace bmland
