#include "bmland/manifold.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace bmland {

namespace {

void require_same_shape(const RowMatrix& a, const RowMatrix& b, const char* what) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw InvalidDimensions(std::string(what) + ": shape mismatch (" +
                            std::to_string(a.rows()) + "x" + std::to_string(a.cols()) +
                            " vs " + std::to_string(b.rows()) + "x" +
                            std::to_string(b.cols()) + ")");
  }
}

void require_same_base(const Point& a, const Point& b, const char* what) {
  if (!(a == b)) throw InvalidInput(std::string(what) + ": tangent vector has a different base point");
}

}  // namespace

Point::Point(RowMatrix entries, RowPolicy policy, double feas_tol) {
  if (entries.rows() < 1 || entries.cols() < 1) {
    throw InvalidDimensions("Point: need n >= 1 and p >= 1");
  }
  if (policy == RowPolicy::Normalize) {
    entries = rownorm(entries);
  } else {
    const auto report = check_point(entries, feas_tol);
    if (!report.ok) {
      throw InvalidInput("Point: row norm error " + std::to_string(report.worst_row_norm_error) +
                         " exceeds tolerance");
    }
  }
  data_ = std::make_shared<const RowMatrix>(std::move(entries));
}

Point::Point(RowMatrix entries, Unchecked)
    : data_(std::make_shared<const RowMatrix>(std::move(entries))) {}

Point make_point_unchecked(RowMatrix entries) { return Point(std::move(entries), Point::Unchecked{}); }

TangentVector::TangentVector(Point base, RowMatrix entries, double tol)
    : base_(std::move(base)), entries_(std::move(entries)) {
  require_same_shape(base_.matrix(), entries_, "TangentVector");
  for (Eigen::Index i = 0; i < entries_.rows(); ++i) {
    const double dot = base_.row(i).dot(entries_.row(i));
    if (std::abs(dot) > tol * std::max(1.0, entries_.row(i).norm())) {
      throw InvalidInput("TangentVector: row " + std::to_string(i) +
                         " is not orthogonal to the base point");
    }
  }
}

TangentVector TangentVector::zero(const Point& base) {
  return TangentVector(base, RowMatrix::Zero(base.n(), base.p()), Unchecked{});
}

TangentVector TangentVector::operator+(const TangentVector& other) const {
  require_same_base(base_, other.base_, "TangentVector::operator+");
  return TangentVector(base_, entries_ + other.entries_, Unchecked{});
}

TangentVector TangentVector::operator-(const TangentVector& other) const {
  require_same_base(base_, other.base_, "TangentVector::operator-");
  return TangentVector(base_, entries_ - other.entries_, Unchecked{});
}

TangentVector TangentVector::operator-() const { return TangentVector(base_, -entries_, Unchecked{}); }

TangentVector TangentVector::operator*(double s) const {
  return TangentVector(base_, s * entries_, Unchecked{});
}

double inner(const TangentVector& u, const TangentVector& v) {
  require_same_base(u.base(), v.base(), "inner");
  return u.matrix().cwiseProduct(v.matrix()).sum();
}

FeasibilityReport check_point(const RowMatrix& y, double feas_tol) {
  if (y.rows() < 1 || y.cols() < 1) throw InvalidDimensions("check_point: empty matrix");
  double worst = 0.0;
  for (Eigen::Index i = 0; i < y.rows(); ++i) {
    const double err = std::abs(y.row(i).norm() - 1.0);
    worst = std::isfinite(err) ? std::max(worst, err) : std::numeric_limits<double>::infinity();
  }
  return {worst <= feas_tol, worst};
}

RowMatrix rownorm(const RowMatrix& z) {
  RowMatrix out = z;
  for (Eigen::Index i = 0; i < out.rows(); ++i) {
    const double norm = out.row(i).norm();
    if (!(norm > 0.0) || !std::isfinite(norm)) {
      throw InvalidInput("rownorm: row " + std::to_string(i) + " cannot be normalized");
    }
    out.row(i) /= norm;
  }
  return out;
}

TangentVector tangent_project(const Point& y, const RowMatrix& z) {
  require_same_shape(y.matrix(), z, "tangent_project");
  RowMatrix u = z;
  const RowMatrix& ym = y.matrix();
  for (Eigen::Index i = 0; i < u.rows(); ++i) {
    u.row(i) -= u.row(i).dot(ym.row(i)) * ym.row(i);
  }
  return TangentVector(y, std::move(u), TangentVector::Unchecked{});
}

Point retract(const Point& y, const TangentVector& u) {
  require_same_base(y, u.base(), "retract");
  return make_point_unchecked(rownorm(y.matrix() + u.matrix()));
}

double sinc(double x) {
  if (std::abs(x) < 1e-8) return 1.0 - x * x / 6.0;
  return std::sin(x) / x;
}

Point sphere_geodesic(const Point& y, const TangentVector& u, double t) {
  require_same_base(y, u.base(), "sphere_geodesic");
  RowMatrix out(y.n(), y.p());
  for (Eigen::Index i = 0; i < y.n(); ++i) {
    const double speed = u.matrix().row(i).norm();
    const double angle = t * speed;
    // sin(t s)/s = t * sinc(t s)
    out.row(i) = std::cos(angle) * y.row(i) + (t * sinc(angle)) * u.matrix().row(i);
    // Renormalize to remove drift from the rounded cos/sin pair.
    out.row(i) /= out.row(i).norm();
  }
  return make_point_unchecked(std::move(out));
}

double potential_phi(const RowMatrix& y) {
  if (y.rows() % 2 != 0) throw InvalidDimensions("potential_phi: n must be even");
  const Eigen::Index half = y.rows() / 2;
  return (y.topRows(half) + y.bottomRows(half)).squaredNorm();
}

bool is_antipodal(const Point& y, double tol) { return potential_phi(y) <= tol; }

TangentVector random_tangent(const Point& y, Rng& rng) {
  RowMatrix z(y.n(), y.p());
  for (Eigen::Index i = 0; i < z.rows(); ++i)
    for (Eigen::Index j = 0; j < z.cols(); ++j) z(i, j) = rng.normal();
  return tangent_project(y, z);
}

}  // namespace bmland
