#pragma once

#include <Eigen/Dense>
#include <complex>
#include <numbers>

namespace qlattice {

using cplx = std::complex<double>;
using Mat4 = Eigen::Matrix4cd;
using Vec4 = Eigen::Vector4cd;
using MatX = Eigen::MatrixXcd;

inline constexpr double pi = std::numbers::pi;
inline constexpr cplx iu{0.0, 1.0};

// Reduce an angle into (-pi, pi].
inline double reduce_angle(double th) {
  th = std::remainder(th, 2.0 * pi);
  if (th <= -pi) th += 2.0 * pi;
  return th;
}

}  // namespace qlattice
