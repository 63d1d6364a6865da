#include "bmland/linalg.hpp"

namespace bmland {

Vector symmetric_eigenvalues(const Matrix& m) {
  if (m.rows() != m.cols()) throw InvalidDimensions("symmetric_eigenvalues: matrix is not square");
  if (m.rows() == 0) return Vector(0);
  Eigen::SelfAdjointEigenSolver<Matrix> eig(m, Eigen::EigenvaluesOnly);
  return eig.eigenvalues();
}

double min_eigenvalue(const Matrix& m) {
  const Vector ev = symmetric_eigenvalues(m);
  if (ev.size() == 0) throw InvalidDimensions("min_eigenvalue: empty matrix");
  return ev(0);
}

Matrix remove_index(const Matrix& m, Eigen::Index i) {
  const Eigen::Index k = m.rows();
  if (i < 0 || i >= k || m.cols() != k) throw InvalidDimensions("remove_index: bad index");
  Matrix out(k - 1, k - 1);
  const Eigen::Index after = k - 1 - i;
  out.topLeftCorner(i, i) = m.topLeftCorner(i, i);
  out.topRightCorner(i, after) = m.topRightCorner(i, after);
  out.bottomLeftCorner(after, i) = m.bottomLeftCorner(after, i);
  out.bottomRightCorner(after, after) = m.bottomRightCorner(after, after);
  return out;
}

}  // namespace bmland
