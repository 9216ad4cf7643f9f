#pragma once

namespace gtpslam {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

/// Wraps an angle into (-pi, pi]. -pi maps to +pi.
double wrap_angle(double a);

}  // namespace gtpslam
