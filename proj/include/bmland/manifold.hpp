#pragma once

#include <memory>

#include "bmland/rng.hpp"
#include "bmland/types.hpp"

namespace bmland {

// How a Point constructor treats rows that are not unit norm.
enum class RowPolicy { Reject, Normalize };

// A feasible point of the rank-p factorized Max-Cut program: an n x p matrix
// whose rows lie on the unit sphere S^{p-1}. Immutable; copies share storage.
class Point {
 public:
  explicit Point(RowMatrix entries, RowPolicy policy = RowPolicy::Reject,
                 double feas_tol = kDefaultFeasTol);

  Eigen::Index n() const { return data_->rows(); }
  Eigen::Index p() const { return data_->cols(); }
  const RowMatrix& matrix() const { return *data_; }
  auto row(Eigen::Index i) const { return data_->row(i); }

  bool same_storage(const Point& other) const { return data_ == other.data_; }
  bool operator==(const Point& other) const {
    return same_storage(other) || *data_ == *other.data_;
  }

 private:
  struct Unchecked {};
  Point(RowMatrix entries, Unchecked);
  friend Point make_point_unchecked(RowMatrix entries);

  std::shared_ptr<const RowMatrix> data_;
};

// Wraps rows that are unit norm by construction (normalized output of a
// retraction, geodesic, ...). Library-internal.
Point make_point_unchecked(RowMatrix entries);

// An element of the tangent space at `base`: rows orthogonal to the base rows.
// The linear operations below keep the base and do not re-validate.
class TangentVector {
 public:
  // Checked: throws InvalidInput unless |<Y_i, U_i>| <= tol * max(1, |U_i|).
  TangentVector(Point base, RowMatrix entries, double tol = kDefaultFeasTol);

  static TangentVector zero(const Point& base);

  const Point& base() const { return base_; }
  const RowMatrix& matrix() const { return entries_; }
  double norm() const { return entries_.norm(); }

  TangentVector operator+(const TangentVector& other) const;
  TangentVector operator-(const TangentVector& other) const;
  TangentVector operator-() const;
  TangentVector operator*(double s) const;
  friend TangentVector operator*(double s, const TangentVector& u) { return u * s; }

 private:
  struct Unchecked {};
  TangentVector(Point base, RowMatrix entries, Unchecked)
      : base_(std::move(base)), entries_(std::move(entries)) {}
  friend TangentVector tangent_project(const Point& y, const RowMatrix& z);

  Point base_;
  RowMatrix entries_;
};

double inner(const TangentVector& u, const TangentVector& v);

struct FeasibilityReport {
  bool ok;
  double worst_row_norm_error;
};

FeasibilityReport check_point(const RowMatrix& y, double feas_tol = kDefaultFeasTol);

// Normalizes each row. Throws InvalidInput on a zero row.
RowMatrix rownorm(const RowMatrix& z);

// Row-wise projection Z_i - <Z_i, Y_i> Y_i onto the tangent space at Y.
TangentVector tangent_project(const Point& y, const RowMatrix& z);

// Metric projection retraction: rows of Y + U, each renormalized.
Point retract(const Point& y, const TangentVector& u);

// Product of great-circle geodesics, one per row:
//   row_i(t) = cos(t|U_i|) Y_i + sin(t|U_i|)/|U_i| U_i.
Point sphere_geodesic(const Point& y, const TangentVector& u, double t);

// |G1 + G2|_F^2 for Y = [G1; G2] split into equal halves. Requires even n.
double potential_phi(const RowMatrix& y);
inline double potential_phi(const Point& y) { return potential_phi(y.matrix()); }

// True iff potential_phi(Y) <= tol, i.e. Y = [G; -G] up to tol.
bool is_antipodal(const Point& y, double tol);

// Standard-normal entries projected onto the tangent space.
TangentVector random_tangent(const Point& y, Rng& rng);

// sin(x)/x with a series fallback near zero.
double sinc(double x);

}  // namespace bmland
