// Common Eigen aliases and small numeric helpers.
#pragma once

#include <Eigen/Dense>
#include <cmath>

namespace dockmpc {

using Vec3 = Eigen::Vector3d;
using Vec6 = Eigen::Matrix<double, 6, 1>;
using VecX = Eigen::VectorXd;
using Mat3 = Eigen::Matrix3d;
using Mat66 = Eigen::Matrix<double, 6, 6>;
using Mat63 = Eigen::Matrix<double, 6, 3>;
using MatX = Eigen::MatrixXd;

inline constexpr double kPi = 3.141592653589793238462643383279502884;

inline double deg2rad(double d) { return d * kPi / 180.0; }
inline double rad2deg(double r) { return r * 180.0 / kPi; }

// sign with sign(0) = 0
inline double sgn(double x) { return (x > 0.0) - (x < 0.0); }

}  // namespace dockmpc
