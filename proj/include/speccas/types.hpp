#pragma once

#include <complex>

#include <Eigen/Dense>

namespace speccas {

using cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

}  // namespace speccas
