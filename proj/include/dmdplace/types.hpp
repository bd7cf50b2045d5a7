#pragma once

#include <Eigen/Core>

#include <complex>

namespace dmdplace {

using Index         = Eigen::Index;
using Matrix        = Eigen::MatrixXd;
using Vector        = Eigen::VectorXd;
using Complex       = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

}  // namespace dmdplace
