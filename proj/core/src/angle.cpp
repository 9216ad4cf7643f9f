#include "gtpslam/core/angle.hpp"

#include <cmath>

namespace gtpslam {

double wrap_angle(double a) {
  double r = std::remainder(a, kTwoPi);
  if (r <= -kPi) r += kTwoPi;
  return r;
}

}  // namespace gtpslam
