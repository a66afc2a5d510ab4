#pragma once

#include <Eigen/Dense>
#include <complex>

namespace shiftframe {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

// Shared tolerance defaults. One clustering knob is used everywhere so that
// eigenvalue ordering, partition bookkeeping and gap measurements stay
// mutually consistent.
inline constexpr double kDefaultClusterTol = 1e-8;
inline constexpr double kDefaultRankTol = 1e-10;
inline constexpr double kDefaultNormalityTol = 1e-10;
inline constexpr double kDefaultInvarianceTol = 1e-8;
inline constexpr double kDefaultMembershipTol = 1e-8;
inline constexpr double kOracleMembershipTol = 1e-10;
inline constexpr double kDefaultBracketSlack = 1e-8;

/// Frame bounds of a vector system: lower > 0 exactly when the system is a
/// frame of its space.
struct FrameBounds {
  double lower = 0.0;
  double upper = 0.0;
  bool is_frame = false;
};

/// a <= b up to additive slack scaled by the magnitude of b.
inline bool leq_with_slack(double a, double b,
                           double slack = kDefaultBracketSlack) {
  return a <= b + slack * std::max(1.0, std::abs(b));
}

/// a >= b up to additive slack scaled by the magnitude of b.
inline bool geq_with_slack(double a, double b,
                           double slack = kDefaultBracketSlack) {
  return a >= b - slack * std::max(1.0, std::abs(b));
}

}  // namespace shiftframe
