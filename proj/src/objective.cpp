#include "bmland/objective.hpp"

#include <cmath>
#include <string>

namespace bmland {

SymMatrix::SymMatrix(Matrix entries) : entries_(std::move(entries)) {
  if (entries_.rows() < 1 || entries_.rows() != entries_.cols()) {
    throw InvalidDimensions("SymMatrix: need a nonempty square matrix");
  }
  if (!entries_.allFinite()) throw InvalidInput("SymMatrix: non-finite entry");
  const double scale = std::max(1.0, entries_.cwiseAbs().maxCoeff());
  const double asym = (entries_ - entries_.transpose()).cwiseAbs().maxCoeff();
  if (asym > 1e-12 * scale) {
    throw InvalidInput("SymMatrix: matrix is not symmetric (max asymmetry " +
                       std::to_string(asym) + ")");
  }
}

void require_matching(const SymMatrix& a, const Point& y, const char* what) {
  if (a.dim() != y.n()) {
    throw InvalidDimensions(std::string(what) + ": cost matrix is " + std::to_string(a.dim()) +
                            "x" + std::to_string(a.dim()) + " but point has " +
                            std::to_string(y.n()) + " rows");
  }
}

namespace {

Vector row_dots(const RowMatrix& x, const RowMatrix& y) {
  return x.cwiseProduct(y).rowwise().sum();
}

}  // namespace

double objective_value(const SymMatrix& a, const Point& y) {
  require_matching(a, y, "objective_value");
  const RowMatrix ay = a.matrix() * y.matrix();
  return ay.cwiseProduct(y.matrix()).sum();
}

Multiplier multiplier_nu(const SymMatrix& a, const Point& y) {
  require_matching(a, y, "multiplier_nu");
  const RowMatrix ay = a.matrix() * y.matrix();
  return {row_dots(ay, y.matrix())};
}

FirstOrderState evaluate_first_order(const SymMatrix& a, const Point& y) {
  require_matching(a, y, "evaluate_first_order");
  const RowMatrix ay = a.matrix() * y.matrix();
  Vector nu = row_dots(ay, y.matrix());
  RowMatrix g = 2.0 * (ay - nu.asDiagonal() * y.matrix());
  return {nu.sum(), {std::move(nu)}, tangent_project(y, g)};
}

TangentVector riemannian_gradient(const SymMatrix& a, const Point& y) {
  return evaluate_first_order(a, y).grad;
}

TangentVector hessian_apply(const SymMatrix& a, const Multiplier& nu, const TangentVector& u) {
  const Point& y = u.base();
  require_matching(a, y, "hessian_apply");
  if (nu.nu.size() != y.n()) throw InvalidDimensions("hessian_apply: multiplier length mismatch");
  const RowMatrix su = a.matrix() * u.matrix() - nu.nu.asDiagonal() * u.matrix();
  return tangent_project(y, 2.0 * su);
}

TangentVector hessian_apply(const SymMatrix& a, const Point& y, const TangentVector& u) {
  if (!(u.base() == y)) throw InvalidInput("hessian_apply: tangent vector has a different base");
  return hessian_apply(a, multiplier_nu(a, y), u);
}

double hessian_quadratic(const SymMatrix& a, const Point& y, const TangentVector& u) {
  require_matching(a, y, "hessian_quadratic");
  if (!(u.base() == y)) throw InvalidInput("hessian_quadratic: tangent vector has a different base");
  const Vector nu = multiplier_nu(a, y).nu;
  const RowMatrix& um = u.matrix();
  const double au = (a.matrix() * um).cwiseProduct(um).sum();
  const double du = nu.dot(um.rowwise().squaredNorm());
  return 2.0 * (au - du);
}

std::vector<Matrix> tangent_row_bases(const Point& y) {
  const Eigen::Index p = y.p();
  std::vector<Matrix> bases;
  bases.reserve(static_cast<std::size_t>(y.n()));
  for (Eigen::Index i = 0; i < y.n(); ++i) {
    // v = y + sign(y_0) e_1; H = I - 2 v v^T / |v|^2 maps y to -sign(y_0) e_1,
    // so columns 2..p of H span y^perp.
    Vector v = y.row(i).transpose();
    const double sign = v(0) >= 0.0 ? 1.0 : -1.0;
    v(0) += sign;
    Matrix h = Matrix::Identity(p, p) - (2.0 / v.squaredNorm()) * v * v.transpose();
    bases.push_back(h.rightCols(p - 1));
  }
  return bases;
}

HessianSpectrum hessian_spectrum(const SymMatrix& a, const Point& y, Eigen::Index max_dim) {
  require_matching(a, y, "hessian_spectrum");
  const Eigen::Index n = y.n();
  const Eigen::Index p = y.p();
  const Eigen::Index k = p - 1;
  const Eigen::Index dim = n * k;
  if (dim > max_dim) {
    throw TooLarge("hessian_spectrum: tangent dimension " + std::to_string(dim) +
                   " exceeds limit " + std::to_string(max_dim));
  }
  if (dim == 0) return {Vector(0), TangentVector::zero(y), Matrix(0, 0)};

  const auto bases = tangent_row_bases(y);
  const Multiplier nu = multiplier_nu(a, y);
  Matrix h(dim, dim);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index c = 0; c < k; ++c) {
      RowMatrix e = RowMatrix::Zero(n, p);
      e.row(i) = bases[static_cast<std::size_t>(i)].col(c).transpose();
      const RowMatrix he = hessian_apply(a, nu, tangent_project(y, e)).matrix();
      for (Eigen::Index j = 0; j < n; ++j) {
        h.block(j * k, i * k + c, k, 1) =
            bases[static_cast<std::size_t>(j)].transpose() * he.row(j).transpose();
      }
    }
  }
  h = 0.5 * (h + h.transpose()).eval();

  Eigen::SelfAdjointEigenSolver<Matrix> eig(h);
  const Vector coords = eig.eigenvectors().col(0);
  RowMatrix u(n, p);
  for (Eigen::Index i = 0; i < n; ++i) {
    u.row(i) = (bases[static_cast<std::size_t>(i)] * coords.segment(i * k, k)).transpose();
  }
  return {eig.eigenvalues(), tangent_project(y, u), std::move(h)};
}

}  // namespace bmland
