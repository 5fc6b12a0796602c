#pragma once

namespace stoda {

inline constexpr double kPi = 3.14159265358979323846;

// Surface measure of the unit n-sphere S^n embedded in R^{n+1}:
// |S^n| = 2 pi^{(n+1)/2} / Gamma((n+1)/2).
double sphere_measure(int n);

// gamma_n = (n-1)!/2 * |S^n|, the constant normalizing log(1/|x|) as the
// fundamental solution of (-Delta)^{n/2} in R^n.  gamma_2 = 2*pi.
double gamma_n(int n);

// Quantized total mass 2*gamma_n of the weight-free problem.
double lambda_1(int n);

}  // namespace stoda
