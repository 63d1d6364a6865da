#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>

namespace bmland {

// Points and tangent vectors are stored row-major: every formula on the
// product of spheres is row-wise.
using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

inline constexpr double kDefaultFeasTol = 1e-10;
inline constexpr double kDefaultCertTol = 1e-9;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidDimensions : public Error {
 public:
  using Error::Error;
};

class InvalidInput : public Error {
 public:
  using Error::Error;
};

class ConstructionFailed : public Error {
 public:
  ConstructionFailed(const std::string& what, int attempts, double last_min_sub_eig)
      : Error(what), attempts_(attempts), last_min_sub_eig_(last_min_sub_eig) {}
  int attempts() const { return attempts_; }
  double last_min_sub_eig() const { return last_min_sub_eig_; }

 private:
  int attempts_;
  double last_min_sub_eig_;
};

// Thrown when a dense tangent-space computation would exceed the size guard.
class TooLarge : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace bmland
