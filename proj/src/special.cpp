#include "sosim/special.hpp"

#include <cmath>

namespace sosim {

double bessel_i0_scaled(double x) {
  x = std::abs(x);
  if (x < 20.0) {
    const double y = 0.25 * x * x;
    double term = 1.0, sum = 1.0;
    for (int k = 1; k < 500; ++k) {
      term *= y / (static_cast<double>(k) * k);
      sum += term;
      if (term < 1e-17 * sum) break;
    }
    return std::exp(-x) * sum;
  }
  // e^{−x} I₀(x) ~ (2πx)^{−1/2} Σ ((2k−1)!!)² / (k! (8x)^k)
  double term = 1.0, sum = 1.0;
  for (int k = 1; k < 200; ++k) {
    const double next = term * (2.0 * k - 1.0) * (2.0 * k - 1.0) / (k * 8.0 * x);
    if (next > term) break;
    term = next;
    sum += term;
    if (term < 1e-17 * sum) break;
  }
  return sum / std::sqrt(2.0 * kPi * x);
}

double log_bessel_i0(double x) { return std::abs(x) + std::log(bessel_i0_scaled(x)); }

RealVector laguerre_sequence(int n, double x) {
  RealVector l(n);
  if (n > 0) l(0) = 1.0;
  if (n > 1) l(1) = 1.0 - x;
  for (int k = 1; k + 1 < n; ++k)
    l(k + 1) = ((2.0 * k + 1.0 - x) * l(k) - k * l(k - 1)) / (k + 1.0);
  return l;
}

RealVector weyl_diagonal(double abs_z, int n) {
  const double r2 = abs_z * abs_z;
  return std::exp(-0.5 * r2) * laguerre_sequence(n, r2);
}

}  // namespace sosim
