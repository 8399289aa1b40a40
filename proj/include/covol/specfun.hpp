#pragma once

// Gamma-family special functions on the right half-plane: log Gamma with the
// branch that is real on the positive axis, polygamma up to order 4, the
// digamma inverse, and the kappa-weighted combination
//   alpha_kappa(z) = kappa*log Gamma(z) + (1-kappa)*log Gamma(z+1/2).
// Target relative accuracy is 1e-12 for double-range arguments.

#include <array>
#include <cmath>
#include <complex>

#include "covol/common.hpp"

namespace covol {

enum class PlaceKind { Real, Complex };

inline int place_multiplier(PlaceKind k) { return k == PlaceKind::Real ? 1 : 2; }

namespace detail {

// B_2, B_4, ..., B_28.
inline constexpr std::array<double, 14> kBernoulli = {
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
    43867.0 / 798.0,
    -174611.0 / 330.0,
    854513.0 / 138.0,
    -236364091.0 / 2730.0,
    8553103.0 / 6.0,
    -23749461029.0 / 870.0,
};

inline constexpr double kHalfLog2Pi = 0.91893853320467274178032973640562;

// Stirling series for log Gamma, valid once Re(z) is large. The shifted
// recurrence log Gamma(z) = log Gamma(z+1) - log(z) keeps the branch that is
// real on the positive axis, since every shifted argument stays in the right
// half-plane.
inline cplx log_gamma_shifted(cplx z) {
  cplx acc = 0.0;
  while (z.real() < 12.0) {
    acc -= std::log(z);
    z += 1.0;
  }
  cplx inv = 1.0 / z;
  cplx inv2 = inv * inv;
  cplx series = 0.0;
  cplx p = inv;
  for (std::size_t k = 0; k < kBernoulli.size(); ++k) {
    double denom = (2.0 * (k + 1)) * (2.0 * (k + 1) - 1.0);
    series += kBernoulli[k] / denom * p;
    p *= inv2;
  }
  return acc + (z - 0.5) * std::log(z) - z + kHalfLog2Pi + series;
}

// Asymptotic series for psi^(m), m >= 0, after shifting Re(z) past the cutoff.
inline cplx polygamma_shifted(cplx z, int m, double cutoff) {
  static constexpr std::array<double, 5> factorial = {1, 1, 2, 6, 24};
  cplx acc = 0.0;
  // psi^(m)(z) = psi^(m)(z+1) - (-1)^m m! z^-(m+1)
  double sign_m = (m % 2 == 0) ? 1.0 : -1.0;
  while (z.real() < cutoff) {
    cplx zp = std::pow(z, -(m + 1));
    acc -= sign_m * factorial[static_cast<std::size_t>(m)] * zp;
    z += 1.0;
  }
  cplx inv = 1.0 / z;
  cplx inv2 = inv * inv;
  cplx tail;
  if (m == 0) {
    tail = std::log(z) - 0.5 * inv;
    cplx p = inv2;
    for (std::size_t k = 0; k < kBernoulli.size(); ++k) {
      tail -= kBernoulli[k] / (2.0 * (k + 1)) * p;
      p *= inv2;
    }
  } else {
    // (-1)^(m-1) [ (m-1)!/z^m + m!/(2 z^(m+1)) + sum B_2k (2k+m-1)!/(2k)! z^-(2k+m) ]
    double sgn = (m % 2 == 1) ? 1.0 : -1.0;
    cplx zm = std::pow(z, -m);
    cplx sum = factorial[static_cast<std::size_t>(m - 1)] * zm +
               0.5 * factorial[static_cast<std::size_t>(m)] * zm * inv;
    cplx p = zm * inv2;
    for (std::size_t k = 0; k < kBernoulli.size(); ++k) {
      // (2K+m-1)!/(2K)! = (2K+1)(2K+2)...(2K+m-1), empty when m = 1.
      double ratio = 1.0;
      for (int j = 1; j <= m - 1; ++j) ratio *= static_cast<double>(2 * (k + 1) + j);
      sum += kBernoulli[k] * ratio * p;
      p *= inv2;
    }
    tail = sgn * sum;
  }
  return acc + tail;
}

}  // namespace detail

// Principal-branch log Gamma on Re(z) > 0, real on the positive axis.
inline cplx log_gamma(cplx z) {
  require(z.real() > 0.0, Errc::DomainError, "log_gamma requires Re(z) > 0");
  return detail::log_gamma_shifted(z);
}

inline double log_gamma(double x) {
  require(x > 0.0, Errc::DomainError, "log_gamma requires x > 0");
  return detail::log_gamma_shifted(cplx(x, 0.0)).real();
}

// psi^(order) on Re(z) > 0, order in 0..4.
inline cplx polygamma(cplx z, int order) {
  require(order >= 0 && order <= 4, Errc::DomainError, "polygamma order must be 0..4");
  require(z.real() > 0.0, Errc::DomainError, "polygamma requires Re(z) > 0");
  return detail::polygamma_shifted(z, order, 12.0);
}

inline double polygamma(double x, int order) {
  require(order >= 0 && order <= 4, Errc::DomainError, "polygamma order must be 0..4");
  require(x > 0.0, Errc::DomainError, "polygamma requires x > 0");
  return detail::polygamma_shifted(cplx(x, 0.0), order, 10.0).real();
}

inline double digamma(double x) { return polygamma(x, 0); }

// Inverse of psi on (0, infinity). Safeguarded Newton; the two seeds cover the
// asymptotic regimes psi(x) ~ log(x) and psi(x) ~ -1/x.
inline double digamma_inverse(double y) {
  if (y > 690.0) return std::exp(y);  // beyond any refinable double range
  double x = (y >= -2.0) ? std::exp(y) + 0.5 : -1.0 / y;
  double lo = 0.0, hi = std::numeric_limits<double>::infinity();
  for (int it = 0; it < 200; ++it) {
    double f = digamma(x) - y;
    if (f > 0.0) hi = std::min(hi, x);
    else lo = std::max(lo, x);
    if (std::abs(f) < 1e-14 * std::max(1.0, std::abs(y))) break;
    double step = f / polygamma(x, 1);
    double xn = x - step;
    if (!(xn > lo && (xn < hi))) {
      xn = std::isfinite(hi) ? 0.5 * (lo + hi) : 2.0 * x;
    }
    if (xn == x) break;
    x = xn;
  }
  return x;
}

// log Gamma_v: log Gamma(z) at a real place, log Gamma(z) + log Gamma(z+1/2)
// at a complex place.
inline cplx log_gamma_v(cplx z, PlaceKind kind) {
  cplx g = log_gamma(z);
  if (kind == PlaceKind::Complex) g += log_gamma(z + 0.5);
  return g;
}

// d^order/dz^order of kappa*log Gamma(z) + (1-kappa)*log Gamma(z+1/2).
inline cplx alpha_kappa(cplx z, double kappa, int order = 0) {
  require(kappa >= 0.5 && kappa <= 1.0, Errc::DomainError, "kappa must lie in [1/2, 1]");
  require(order >= 0 && order <= 4, Errc::DomainError, "alpha_kappa order must be 0..4");
  require(z.real() > 0.0, Errc::DomainError, "alpha_kappa requires Re(z) > 0");
  if (order == 0)
    return kappa * log_gamma(z) + (1.0 - kappa) * log_gamma(z + 0.5);
  return kappa * polygamma(z, order - 1) + (1.0 - kappa) * polygamma(z + 0.5, order - 1);
}

inline double alpha_kappa(double x, double kappa, int order = 0) {
  return alpha_kappa(cplx(x, 0.0), kappa, order).real();
}

}  // namespace covol
