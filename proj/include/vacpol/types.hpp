#pragma once

#include <Eigen/Dense>
#include <complex>

namespace vacpol {

using Real = double;
using Complex = std::complex<double>;

using Matrix2c = Eigen::Matrix2cd;
using Matrix4c = Eigen::Matrix4cd;
using MatrixXc = Eigen::MatrixXcd;
using Vector3r = Eigen::Vector3d;
using Vector3i = Eigen::Vector3i;
using Vector4c = Eigen::Vector4cd;
using VectorXc = Eigen::VectorXcd;
using VectorXr = Eigen::VectorXd;

inline constexpr Real kPi = 3.14159265358979323846;

}  // namespace vacpol
