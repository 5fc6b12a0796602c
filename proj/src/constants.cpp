#include "stoda/constants.hpp"

#include <cmath>
#include <stdexcept>

namespace stoda {

double sphere_measure(int n) {
  if (n < 1) throw std::invalid_argument("sphere_measure: n must be >= 1");
  return 2.0 * std::pow(kPi, 0.5 * (n + 1)) / std::tgamma(0.5 * (n + 1));
}

double gamma_n(int n) {
  if (n < 2) throw std::invalid_argument("gamma_n: n must be >= 2");
  return 0.5 * std::tgamma(static_cast<double>(n)) * sphere_measure(n);
}

double lambda_1(int n) { return 2.0 * gamma_n(n); }

}  // namespace stoda
