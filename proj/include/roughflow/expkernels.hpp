#ifndef ROUGHFLOW_EXPKERNELS_HPP
#define ROUGHFLOW_EXPKERNELS_HPP

#include <cmath>

// Exact moments of decaying exponentials over one grid cell. These are the
// only scalar integrals the convolution processes need against a piecewise
// linear driver, so getting them exact (and cancellation-free) makes the
// whole first/second-order layer exact to roundoff.

namespace roughflow {

/// (1 - e^{-z}) / z, continuous through z = 0.
inline double phi1n(double z) {
  if (std::abs(z) < 1e-4) {
    // 1 - z/2 + z^2/6 - z^3/24
    return 1.0 + z * (-0.5 + z * (1.0 / 6.0 + z * (-1.0 / 24.0)));
  }
  return -std::expm1(-z) / z;
}

/// mom0(lam, h) = int_0^h e^{-lam w} dw
inline double mom0(double lam, double h) { return h * phi1n(lam * h); }

/// mom1(lam, h) = int_0^h e^{-lam w} w dw
inline double mom1(double lam, double h) {
  double z = lam * h;
  if (std::abs(z) < 0.5) {
    // h^2 * sum_i (-z)^i / (i! (i+2))
    double term = 0.5, sum = 0.5;
    for (int i = 1; i < 24; ++i) {
      term *= -z / i;
      // convert factor 1/(i+1) -> 1/(i+2): term_i = (-z)^i/(i! (i+2))
      double add = term * (i + 1.0) / (i + 2.0);
      term = add;
      sum += add;
      if (std::abs(add) < 1e-18 * std::abs(sum)) break;
    }
    return h * h * sum;
  }
  return (1.0 - (1.0 + z) * std::exp(-z)) / (lam * lam);
}

/// mom2(lam, h) = int_0^h e^{-lam w} w^2 dw
inline double mom2(double lam, double h) {
  double z = lam * h;
  if (std::abs(z) < 0.5) {
    // h^3 * sum_i (-z)^i / (i! (i+3))
    double fact = 1.0, sum = 1.0 / 3.0;
    double zp = 1.0;
    for (int i = 1; i < 24; ++i) {
      fact *= i;
      zp *= -z;
      double add = zp / (fact * (i + 3.0));
      sum += add;
      if (std::abs(add) < 1e-18 * std::abs(sum)) break;
    }
    return h * h * h * sum;
  }
  return (2.0 - (2.0 + 2.0 * z + z * z) * std::exp(-z)) / (lam * lam * lam);
}

/// bridge0(p, q, h) = int_0^h e^{-p(h-u)} e^{-q u} du   (symmetric in p, q)
inline double bridge0(double p, double q, double h) {
  double mu = p - q;
  double z = mu * h;
  if (std::abs(z) < 0.5) {
    // e^{-p h} * h * sum_i z^i / (i+1)!
    double term = 1.0, sum = 1.0;
    for (int i = 1; i < 24; ++i) {
      term *= z / (i + 1.0);
      sum += term;
      if (std::abs(term) < 1e-18 * std::abs(sum)) break;
    }
    return std::exp(-p * h) * h * sum;
  }
  return (std::exp(-q * h) - std::exp(-p * h)) / mu;
}

/// bridge1(p, q, h) = int_0^h e^{-p(h-u)} e^{-q u} u du
inline double bridge1(double p, double q, double h) {
  double mu = p - q;
  double z = mu * h;
  if (std::abs(z) < 0.5) {
    // e^{-p h} * h^2 * sum_i z^i / (i! (i+2))
    double fact = 1.0, zp = 1.0, sum = 0.5;
    for (int i = 1; i < 24; ++i) {
      fact *= i;
      zp *= z;
      double add = zp / (fact * (i + 2.0));
      sum += add;
      if (std::abs(add) < 1e-18 * std::abs(sum)) break;
    }
    return std::exp(-p * h) * h * h * sum;
  }
  return (std::exp(-q * h) * (z - 1.0) + std::exp(-p * h)) / (mu * mu);
}

}  // namespace roughflow

#endif
