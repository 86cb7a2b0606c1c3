#pragma once

// Log-gamma on the complex plane, real digamma/trigamma, and the modified
// Bessel functions K0/K1 (real argument) and K0 (complex argument).

#include <array>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <string>

#include "stieltjes/errors.hpp"

namespace stieltjes {

using Complex = std::complex<double>;

namespace detail {

inline constexpr double euler_gamma = 0.57721566490153286060651209;
inline constexpr double half_log_two_pi = 0.91893853320467274178032973;

// B_{2k} / (2k (2k-1)), k = 1..10
inline constexpr std::array<double, 10> stirling_coefficients{
    1.0 / 12.0,           -1.0 / 360.0,        1.0 / 1260.0,
    -1.0 / 1680.0,        1.0 / 1188.0,        -691.0 / 360360.0,
    1.0 / 156.0,          -3617.0 / 122400.0,  43867.0 / 244188.0,
    -174611.0 / 125400.0};

inline bool is_nonpositive_integer(double x) {
  return x <= 0.0 && x == std::floor(x);
}

// Stirling series for log Gamma, valid when |z| >= 15 and |arg z| < pi/2 + a bit.
inline Complex ln_gamma_stirling(Complex z) {
  const Complex inv = 1.0 / z;
  const Complex inv2 = inv * inv;
  Complex series = 0.0;
  Complex power = inv;
  for (double c : stirling_coefficients) {
    series += c * power;
    power *= inv2;
  }
  return (z - 0.5) * std::log(z) - z + half_log_two_pi + series;
}

// log sin(pi z) on a branch that stays finite for large |Im z|.
inline Complex log_sin_pi(Complex z) {
  constexpr double pi = std::numbers::pi;
  if (std::abs(z.imag()) < 20.0)
    return std::log(std::sin(pi * z));
  const Complex i(0.0, 1.0);
  if (z.imag() > 0.0) {
    // sin(pi z) = (i/2) e^{-i pi z} (1 - e^{2 i pi z})
    return std::log(i / 2.0) - i * pi * z + std::log(1.0 - std::exp(2.0 * i * pi * z));
  }
  // sin(pi z) = -(i/2) e^{i pi z} (1 - e^{-2 i pi z})
  return std::log(-i / 2.0) + i * pi * z + std::log(1.0 - std::exp(-2.0 * i * pi * z));
}

} // namespace detail

/// Real log-gamma, ln|Gamma(x)|.
inline double ln_gamma(double x) {
  if (detail::is_nonpositive_integer(x))
    throw PoleError("ln_gamma: pole at x = " + std::to_string(x));
  return std::lgamma(x);
}

/// Complex log-gamma. For Re z >= 1/2 this is the principal branch (the
/// analytic continuation of the real function from the positive axis,
/// imaginary part not reduced mod 2 pi). Left of that line the reflection
/// formula is used and the imaginary part is only meaningful mod 2 pi.
inline Complex ln_gamma(Complex z) {
  if (z.imag() == 0.0) {
    if (detail::is_nonpositive_integer(z.real()))
      throw PoleError("ln_gamma: pole at z = " + std::to_string(z.real()));
    if (z.real() > 0.0)
      return {std::lgamma(z.real()), 0.0};
  }
  if (z.real() < 0.5) {
    // Gamma(z) Gamma(1-z) = pi / sin(pi z)
    return std::log(std::numbers::pi) - detail::log_sin_pi(z) - ln_gamma(1.0 - z);
  }
  Complex shift = 0.0;
  while (std::abs(z) < 15.0) {
    shift += std::log(z);
    z += 1.0;
  }
  return detail::ln_gamma_stirling(z) - shift;
}

/// Digamma psi(x) for real x > 0.
inline double digamma(double x) {
  if (!(x > 0.0))
    throw DomainError("digamma: requires x > 0");
  double acc = 0.0;
  while (x < 10.0) {
    acc -= 1.0 / x;
    x += 1.0;
  }
  const double inv2 = 1.0 / (x * x);
  // -sum B_{2k} / (2k x^{2k})
  const double tail =
      inv2 * (1.0 / 12.0 -
              inv2 * (1.0 / 120.0 -
                      inv2 * (1.0 / 252.0 -
                              inv2 * (1.0 / 240.0 - inv2 * (1.0 / 132.0 - inv2 * (691.0 / 32760.0))))));
  return acc + std::log(x) - 0.5 / x - tail;
}

/// Trigamma psi'(x) for real x > 0.
inline double trigamma(double x) {
  if (!(x > 0.0))
    throw DomainError("trigamma: requires x > 0");
  double acc = 0.0;
  while (x < 10.0) {
    acc += 1.0 / (x * x);
    x += 1.0;
  }
  const double inv = 1.0 / x;
  const double inv2 = inv * inv;
  // 1/x + 1/(2x^2) + sum B_{2k} / x^{2k+1}
  const double tail =
      inv * inv2 *
      (1.0 / 6.0 -
       inv2 * (1.0 / 30.0 - inv2 * (1.0 / 42.0 - inv2 * (1.0 / 30.0 - inv2 * (5.0 / 66.0)))));
  return acc + inv + 0.5 * inv2 + tail;
}

// ---------------------------------------------------------------------------
// Modified Bessel functions of the second kind
// ---------------------------------------------------------------------------

namespace detail {

struct BesselKPair {
  double k0;
  double k1;
};

// Ascending series, intended for 0 < x <= 2.
inline BesselKPair bessel_k01_series(double x) {
  const double q = 0.25 * x * x;
  const double log_half = std::log(0.5 * x);

  double term = 1.0;      // q^k / (k!)^2
  double term1 = 1.0;     // q^k / (k! (k+1)!)
  double harmonic = 0.0;  // H_k
  double i0 = 0.0, i1s = 0.0, s0 = 0.0, s1 = 0.0;
  for (int k = 0; k < 60; ++k) {
    if (k > 0) {
      term *= q / (double(k) * double(k));
      term1 *= q / (double(k) * double(k + 1));
      harmonic += 1.0 / k;
    }
    const double psi1 = -euler_gamma + harmonic;                 // psi(k+1)
    const double psi2 = psi1 + 1.0 / double(k + 1);              // psi(k+2)
    i0 += term;
    i1s += term1;
    s0 += harmonic * term;
    s1 += (psi1 + psi2) * term1;
    if (term < 1e-18 * i0 && term1 < 1e-18 * i1s)
      break;
  }
  const double i1 = 0.5 * x * i1s;
  BesselKPair out;
  out.k0 = -(log_half + euler_gamma) * i0 + s0;
  out.k1 = 1.0 / x + log_half * i1 - 0.25 * x * s1;
  return out;
}

// Steed's continued fraction (CF2) with Temme's normalisation, x > 2.
// Returns e^x K0(x), e^x K1(x).
inline BesselKPair bessel_k01_scaled_asymptotic(double x) {
  // e^x K_nu(x) ~ sqrt(pi/2x) sum_k prod_{j<=k} (4nu^2 - (2j-1)^2) / (k! (8x)^k)
  const double lead = std::sqrt(std::numbers::pi / (2.0 * x));
  double t0 = 1.0, t1 = 1.0, s0 = 1.0, s1 = 1.0;
  for (int k = 1; k < 30; ++k) {
    const double odd = double(2 * k - 1) * double(2 * k - 1);
    t0 *= -odd / (k * 8.0 * x);
    t1 *= (4.0 - odd) / (k * 8.0 * x);
    s0 += t0;
    s1 += t1;
    if (std::abs(t0) < 1e-18 && std::abs(t1) < 1e-18)
      break;
  }
  return {lead * s0, lead * s1};
}

inline BesselKPair bessel_k01_scaled_cf(double x) {
  if (x > 1000.0)
    return bessel_k01_scaled_asymptotic(x);
  constexpr double eps = 1e-17;
  double b = 2.0 * (1.0 + x);
  double d = 1.0 / b;
  double h = d, delh = d;
  double q1 = 0.0, q2 = 1.0;
  const double a1 = 0.25;
  double q = a1, c = a1, a = -a1;
  double s = 1.0 + q * delh;
  for (int i = 1; i < 10000; ++i) {
    a -= 2 * i;
    c = -a * c / (i + 1.0);
    const double qnew = (q1 - b * q2) / a;
    q1 = q2;
    q2 = qnew;
    q += c * qnew;
    b += 2.0;
    d = 1.0 / (b + a * d);
    delh = (b * d - 1.0) * delh;
    h += delh;
    const double dels = q * delh;
    s += dels;
    if (std::abs(dels / s) < eps)
      break;
  }
  h *= a1;
  BesselKPair out;
  out.k0 = std::sqrt(std::numbers::pi / (2.0 * x)) / s;
  out.k1 = out.k0 * (x + 0.5 - h) / x;
  return out;
}

inline BesselKPair bessel_k01(double x) {
  if (!(x > 0.0))
    throw DomainError("bessel_k: requires x > 0");
  if (x <= 2.0)
    return bessel_k01_series(x);
  auto scaled = bessel_k01_scaled_cf(x);
  const double e = std::exp(-x);
  return {scaled.k0 * e, scaled.k1 * e};
}

} // namespace detail

/// K0(x), x > 0. Underflows to 0 for x beyond ~745; see bessel_k0_scaled.
inline double bessel_k0(double x) { return detail::bessel_k01(x).k0; }

/// K1(x), x > 0.
inline double bessel_k1(double x) { return detail::bessel_k01(x).k1; }

/// e^x K0(x), finite for every x > 0.
inline double bessel_k0_scaled(double x) {
  if (!(x > 0.0))
    throw DomainError("bessel_k0_scaled: requires x > 0");
  if (x <= 2.0)
    return detail::bessel_k01_series(x).k0 * std::exp(x);
  return detail::bessel_k01_scaled_cf(x).k0;
}

/// e^x K1(x), finite for every x > 0.
inline double bessel_k1_scaled(double x) {
  if (!(x > 0.0))
    throw DomainError("bessel_k1_scaled: requires x > 0");
  if (x <= 2.0)
    return detail::bessel_k01_series(x).k1 * std::exp(x);
  return detail::bessel_k01_scaled_cf(x).k1;
}

/// ln K0(x), accurate where K0 itself would underflow.
inline double log_bessel_k0(double x) { return std::log(bessel_k0_scaled(x)) - x; }

/// True when K0(x) underflows in double precision (the value returned by
/// bessel_k0 is then 0 and callers should switch to the scaled form).
inline bool bessel_k0_underflows(double x) {
  return x > 0.0 && log_bessel_k0(x) < std::log(std::numeric_limits<double>::min());
}

namespace detail {

inline Complex bessel_k0_complex_series(Complex z) {
  const Complex q = 0.25 * z * z;
  Complex term = 1.0, i0 = 1.0, s = 0.0;
  double harmonic = 0.0;
  for (int k = 1; k < 80; ++k) {
    term *= q / (double(k) * double(k));
    harmonic += 1.0 / k;
    i0 += term;
    s += harmonic * term;
    if (std::abs(term) * (1.0 + harmonic) < 1e-18 * std::abs(i0))
      break;
  }
  return -(std::log(0.5 * z) + euler_gamma) * i0 + s;
}

// e^z K0(z) = int_0^inf exp(-z (cosh t - 1)) dt, trapezoid rule. The
// integrand is analytic in the strip |Im t| < pi/2 - |arg z|.
inline Complex bessel_k0_complex_scaled_integral(Complex z) {
  const double strip = 0.5 * std::numbers::pi - std::abs(std::arg(z));
  const double h = std::min(0.1, strip / 6.0);
  const double t_max = std::acosh(1.0 + 42.0 / z.real());
  const int n = static_cast<int>(std::ceil(t_max / h));
  Complex sum = 0.5;  // t = 0 node, half weight
  for (int j = 1; j <= n; ++j) {
    const double t = j * h;
    // cosh t - 1 = 2 sinh^2(t/2), no cancellation near 0
    const double sh = std::sinh(0.5 * t);
    sum += std::exp(-z * (2.0 * sh * sh));
  }
  return h * sum;
}

inline Complex bessel_k0_complex_scaled_asymptotic(Complex z) {
  const Complex inv8z = 1.0 / (8.0 * z);
  Complex term = 1.0, sum = 1.0;
  double last = 1.0;
  for (int k = 1; k < 200; ++k) {
    const double m = 2.0 * k - 1.0;
    term *= -(m * m) * inv8z / double(k);
    const double mag = std::abs(term);
    if (mag > last)
      break;
    sum += term;
    last = mag;
    if (mag < 1e-17)
      break;
  }
  return std::sqrt(std::numbers::pi / (2.0 * z)) * sum;
}

} // namespace detail

/// e^z K0(z) for Re z > 0, principal branch.
inline Complex bessel_k0_complex_scaled(Complex z) {
  if (!(z.real() > 0.0))
    throw DomainError("bessel_k0_complex: requires Re z > 0");
  const double mag = std::abs(z);
  if (mag <= 2.0)
    return detail::bessel_k0_complex_series(z) * std::exp(z);
  if (mag >= 25.0)
    return detail::bessel_k0_complex_scaled_asymptotic(z);
  return detail::bessel_k0_complex_scaled_integral(z);
}

/// K0(z) for Re z > 0, principal branch.
inline Complex bessel_k0(Complex z) {
  if (!(z.real() > 0.0))
    throw DomainError("bessel_k0_complex: requires Re z > 0");
  if (std::abs(z) <= 2.0)
    return detail::bessel_k0_complex_series(z);
  return bessel_k0_complex_scaled(z) * std::exp(-z);
}

/// Alias with the explicit name used throughout the docs.
inline Complex bessel_k0_complex(Complex z) { return bessel_k0(z); }

} // namespace stieltjes
