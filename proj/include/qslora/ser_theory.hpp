#pragma once

// Symbol error rate of noncoherent detection of M equal-energy orthogonal
// signals in AWGN, the synchronous (delta_s = 0) reference curve.

#include <cmath>
#include <limits>
#include <vector>

#include "fscm.hpp"
#include "quadrature.hpp"

namespace qslora {

namespace detail {

// exp(-z) I0(z) for z >= 0.
inline double bessel_i0_scaled(double z) {
  if (z < 500.0) {
    return std::cyl_bessel_i(0.0, z) * std::exp(-z);
  }
  // Hankel asymptotic series; terms ((2j-1)!!)^2 / (j! 8^j z^j)
  double term = 1.0;
  double sum = 1.0;
  for (int j = 1; j < 12; ++j) {
    const double odd = 2.0 * j - 1.0;
    term *= odd * odd / (8.0 * j * z);
    sum += term;
  }
  return sum / std::sqrt(2.0 * std::numbers::pi * z);
}

}  // namespace detail

// P_s = sum_{j=1}^{M-1} (-1)^{j+1} C(M-1, j) / (j + 1) exp(-g j / (j + 1)),
// g = Es/N0. The alternating sum cancels catastrophically in double
// precision once M grows past a few dozen, so it is evaluated through its
// integral form
//   P_s = int_0^inf r exp(-(r^2 + a^2)/2) I0(a r) [1 - (1 - e^{-r^2/2})^{M-1}] dr,
// a^2 = 2g, which is the same quantity (the sum is the term-by-term
// integration of the binomial expansion).
inline double analytical_ser_sync(SpreadingFactor sf, double snr_db) {
  const double m = static_cast<double>(sf.chips());
  if (std::isnan(snr_db)) {
    throw invalid_input("SNR is NaN");
  }
  if (snr_db == -std::numeric_limits<double>::infinity()) {
    return (m - 1.0) / m;
  }
  if (snr_db == std::numeric_limits<double>::infinity()) {
    return 0.0;
  }
  const double gamma = std::pow(10.0, snr_db / 10.0);
  const double a = std::sqrt(2.0 * gamma);
  auto integrand = [&](double r) {
    if (r <= 0.0) {
      return 0.0;
    }
    const double u = std::exp(-0.5 * r * r);
    // 1 - (1 - u)^{M-1}
    const double miss = -std::expm1((m - 1.0) * std::log1p(-u));
    const double d = r - a;
    return r * std::exp(-0.5 * d * d) * detail::bessel_i0_scaled(a * r) * miss;
  };
  // the Rician factor is concentrated within a few units of a; the miss
  // factor decays like (M-1) e^{-r^2/2}
  std::vector<double> cuts{0.0};
  const double tail = std::sqrt(2.0 * std::log(m)) + 12.0;
  for (double c = 1.0; c < std::max(a + 12.0, tail); c += 1.0) {
    cuts.push_back(c);
  }
  cuts.push_back(std::max(a + 12.0, tail));
  // absolute tolerance scaled to the magnitude of the answer
  const double rough = quadrature::integrate_pieces(integrand, cuts, {.absolute = 1e-8, .relative = 1e-10});
  const double tol = std::abs(rough) * 1e-13;
  return quadrature::integrate_pieces(integrand, cuts, {.absolute = tol, .relative = 1e-14});
}

}  // namespace qslora
