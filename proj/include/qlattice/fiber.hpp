#pragma once

// The Bloch-Floquet fiber problem of the square lattice.  A momentum k
// (real k > 0 for energy k^2, k = i*kappa for energy -kappa^2) and a
// quasimomentum pair (th1, th2) select one fiber; k^2 lies in the spectrum
// iff det(A M + i k B N) vanishes for some quasimomentum.

#include <cmath>
#include <optional>

#include "qlattice/coupling.hpp"
#include "qlattice/trigform.hpp"
#include "qlattice/types.hpp"

namespace qlattice {

struct FiberPoint {
  cplx k;
  double theta1 = 0.0, theta2 = 0.0;

  FiberPoint(cplx k_, double th1, double th2)
      : k(k_), theta1(reduce_angle(th1)), theta2(reduce_angle(th2)) {}
};

namespace detail {
inline cplx half_phase(cplx arg) { return std::exp(iu * (0.5 * arg)); }
}  // namespace detail

inline Mat4 matrix_M(cplx k, double th1, double th2, double a) {
  using detail::half_phase;
  const cplx ak = a * k;
  Mat4 m = Mat4::Zero();
  m(0, 0) = half_phase(-(th1 - ak));
  m(0, 1) = half_phase(-(th1 + ak));
  m(1, 0) = half_phase(th1 - ak);
  m(1, 1) = half_phase(th1 + ak);
  m(2, 2) = half_phase(-(th2 - ak));
  m(2, 3) = half_phase(-(th2 + ak));
  m(3, 2) = half_phase(th2 - ak);
  m(3, 3) = half_phase(th2 + ak);
  return m;
}

inline Mat4 matrix_N(cplx k, double th1, double th2, double a) {
  using detail::half_phase;
  const cplx ak = a * k;
  Mat4 n = Mat4::Zero();
  n(0, 0) = -half_phase(-(th1 - ak));
  n(0, 1) = half_phase(-(th1 + ak));
  n(1, 0) = half_phase(th1 - ak);
  n(1, 1) = -half_phase(th1 + ak);
  n(2, 2) = -half_phase(-(th2 - ak));
  n(2, 3) = half_phase(-(th2 + ak));
  n(3, 2) = half_phase(th2 - ak);
  n(3, 3) = -half_phase(th2 + ak);
  return n;
}

inline Mat4 matrix_D(cplx k, double th1, double th2, double a) {
  using detail::half_phase;
  const cplx ak = a * k;
  Mat4 d = Mat4::Zero();
  d(0, 0) = half_phase(th1 - ak);
  d(1, 1) = half_phase(th1 + ak);
  d(2, 2) = half_phase(th2 - ak);
  d(3, 3) = half_phase(th2 + ak);
  return d;
}

// det(A M + i k B N); zero iff k^2 belongs to the fiber spectrum at (th1,th2).
inline cplx spectral_det(const ABCoupling& c, const FiberPoint& p, double a) {
  const Mat4 m = matrix_M(p.k, p.theta1, p.theta2, a);
  const Mat4 n = matrix_N(p.k, p.theta1, p.theta2, a);
  return (c.A * m + iu * p.k * c.B * n).determinant();
}

// Real normal form of the determinant.  For couplings derived from an ST
// form the determinant is real on both the real and the imaginary momentum
// axis; the defect records how far a given evaluation strays from that.
struct RealDispersion {
  double value = 0.0;
  double defect = 0.0;                  // |Im det| / (1 + |det|)
  bool realness_violation = false;      // defect > 1e-8
};

inline RealDispersion dispersion_real(const ABCoupling& c, const FiberPoint& p, double a) {
  const cplx d = spectral_det(c, p, a);
  RealDispersion r;
  r.value = d.real();
  r.defect = std::abs(d.imag()) / (1.0 + std::abs(d));
  r.realness_violation = r.defect > 1e-8;
  return r;
}

// The determinant at fixed momentum as an exact trig polynomial of the
// quasimomenta (nine harmonics, recovered from nine evaluations).
inline BiTrigPoly dispersion_bitrig(const ABCoupling& c, cplx k, double a) {
  return extract_bitrig([&](double t1, double t2) {
    return spectral_det(c, FiberPoint(k, t1, t2), a);
  });
}

// Wavefunction coefficients (C1+, C1-, D1+, D1-) spanning the fiber kernel,
// or nothing when the fiber matrix is regular at p.
inline std::optional<Vec4> nullspace_vector(const ABCoupling& c, const FiberPoint& p, double a) {
  const Mat4 m = matrix_M(p.k, p.theta1, p.theta2, a);
  const Mat4 n = matrix_N(p.k, p.theta1, p.theta2, a);
  const Mat4 d = matrix_D(p.k, p.theta1, p.theta2, a);
  const Mat4 fiber = (c.A * m + iu * p.k * c.B * n) * d;
  Eigen::JacobiSVD<Mat4> svd(fiber, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  if (sv(0) == 0.0) return svd.matrixV().col(3);
  if (sv(3) >= 1e-8 * sv(0)) return std::nullopt;
  return svd.matrixV().col(3);
}

// Range amplitude of Re(t1 e^{i th1} + conj(t2) t3 e^{i th2}): the two-angle
// expression sweeps exactly the interval |t1| + |t2||t3| times cos.
inline double reduced_range_m1(cplx t1, cplx t2, cplx t3) {
  return std::abs(t1) + std::abs(t2) * std::abs(t3);
}

// 2(|t1| + |t2||t3|) <= 1 + |t1|^2 + |t2|^2 + |t3|^2, equality iff
// |t1| = 1 and |t2| = |t3|.  Returns the slack (lhs - rhs <= 0).
inline double m1_amplitude_slack(cplx t1, cplx t2, cplx t3) {
  const double lhs = 2.0 * reduced_range_m1(t1, t2, t3);
  const double rhs = 1.0 + std::norm(t1) + std::norm(t2) + std::norm(t3);
  return lhs - rhs;
}

}  // namespace qlattice
