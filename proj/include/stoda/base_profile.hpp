#pragma once

#include <cmath>
#include <vector>

namespace stoda {

// The fixed smooth profile u0 with u0(x) = -log|x| outside the unit ball.
// Inside B_1 it is the radial polynomial in s = |x|^2
//   p(s) = 3/4 - s + s^2/4,
// which matches value, first and second radial derivatives of -log r at
// r = 1 and has vanishing gradient at the origin, so u0 is C^2 on R^n and
// bounded on B_1 (u0(0) = 3/4).
struct BaseProfile {
  static double eval_radius(double r) {
    if (r >= 1.0) return -std::log(r);
    const double s = r * r;
    return 0.75 - s + 0.25 * s * s;
  }

  static double eval(const std::vector<double>& x) {
    double r2 = 0.0;
    for (double c : x) r2 += c * c;
    return eval_radius(std::sqrt(r2));
  }

  // Radial derivative, for the seam-smoothness checks.
  static double radial_derivative(double r) {
    if (r >= 1.0) return -1.0 / r;
    return 2.0 * r * (-1.0 + 0.5 * r * r);
  }
};

}  // namespace stoda
