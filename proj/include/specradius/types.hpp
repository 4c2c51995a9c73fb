// Copyright specradius contributors.
// SPDX-License-Identifier: Apache-2.0

#ifndef SPECRADIUS_TYPES_HPP
#define SPECRADIUS_TYPES_HPP

#include <Eigen/Dense>
#include <complex>

namespace specradius {

using Matrix = Eigen::MatrixXd;
using ComplexMatrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXd;
using ComplexVector = Eigen::VectorXcd;
using Complex = std::complex<double>;

}  // namespace specradius

#endif  // SPECRADIUS_TYPES_HPP
