#pragma once

#include "bmland/types.hpp"

namespace bmland {

// Ascending eigenvalues of a symmetric matrix (lower triangle is read).
Vector symmetric_eigenvalues(const Matrix& m);

double min_eigenvalue(const Matrix& m);

// M[i]: the principal submatrix with row and column i removed.
Matrix remove_index(const Matrix& m, Eigen::Index i);

// tol * max(1, |m|_F); the scale every PSD verdict is measured against.
inline double relative_tol(double tol, const Matrix& m) { return tol * std::max(1.0, m.norm()); }

}  // namespace bmland
