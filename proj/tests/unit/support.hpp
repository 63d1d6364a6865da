#pragma once

#include "bmland/manifold.hpp"
#include "bmland/objective.hpp"
#include "bmland/rng.hpp"

namespace testing {

inline bmland::SymMatrix random_sym(Eigen::Index n, bmland::Rng& rng) {
  bmland::Matrix g(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) g(i, j) = rng.normal();
  return bmland::SymMatrix(0.5 * (g + g.transpose()));
}

inline bmland::Point random_point(Eigen::Index n, Eigen::Index p, bmland::Rng& rng) {
  bmland::RowMatrix z(n, p);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < p; ++j) z(i, j) = rng.normal();
  return bmland::Point(std::move(z), bmland::RowPolicy::Normalize);
}

inline double rel_err(double got, double want) { return std::abs(got - want) / std::max(1.0, std::abs(want)); }

}  // namespace testing
