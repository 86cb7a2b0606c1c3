#pragma once

// Inverse Mellin transform along a vertical line and Mellin convolution.
//
//   W(x) = (1 / 2 pi) int exp(S(c + i t) - (c + i t) ln x) dt
//
// where S is the log of the Mellin symbol. All contour arithmetic is done in
// log domain; the sum is renormalised by the largest node magnitude.

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <utility>
#include <numbers>
#include <string>
#include <vector>

#include "stieltjes/detail/line_quadrature.hpp"
#include "stieltjes/detail/summation.hpp"
#include "stieltjes/errors.hpp"
#include "stieltjes/moment_sequence.hpp"
#include "stieltjes/special_functions.hpp"

namespace stieltjes {

enum class ContourRule { TrapezoidUniform, DoubleExponential };

struct ContourSpec {
  double c = 1.0;       // abscissa of the vertical line
  double t_max = 20.0;  // truncation height
  int n_points = 513;
  ContourRule rule = ContourRule::TrapezoidUniform;
};

/// mantissa * exp(log_scale); keeps densities representable far in the tail.
struct ScaledValue {
  double mantissa = 0.0;
  double log_scale = 0.0;

  double value() const { return mantissa * std::exp(log_scale); }
  double log_abs() const { return std::log(std::abs(mantissa)) + log_scale; }
};

struct ContourResult {
  ScaledValue value;
  double imag_part = 0.0;   // same scale as value.mantissa
  double l1 = 0.0;          // sum of |node contributions|, same scale
  double tail_l1 = 0.0;     // contribution of the outer 10% of the line
  int nodes = 0;
};

namespace detail {

inline void validate(const ContourSpec &spec) {
  if (!(spec.t_max > 0.0))
    throw DomainError("contour: t_max must be positive");
  if (spec.n_points < 64)
    throw DomainError("contour: n_points must be at least 64");
}

} // namespace detail

namespace detail {

struct LineSum {
  Complex total;  // scaled by exp(-peak)
  double peak = 0.0;
  double l1 = 0.0;
  double tail_l1 = 0.0;
  double phase_scale = 0.0;  // magnitude of the phase terms before cancellation
  int nodes = 0;
};

template <class Symbol>
LineSum line_sum(Symbol &&symbol, double x, const ContourSpec &spec) {
  if (!(x > 0.0))
    throw DomainError("inverse_mellin: requires x > 0");
  validate(spec);
  const double log_x = std::log(x);
  const int n = spec.n_points;

  std::vector<double> t(n), w(n);
  if (spec.rule == ContourRule::TrapezoidUniform) {
    const double h = 2.0 * spec.t_max / (n - 1);
    for (int j = 0; j < n; ++j) {
      t[j] = -spec.t_max + j * h;
      w[j] = (j == 0 || j == n - 1) ? 0.5 * h : h;
    }
  } else {
    // tanh-sinh on [-t_max, t_max]
    constexpr double tau_max = 3.5;
    const double ht = 2.0 * tau_max / (n - 1);
    for (int j = 0; j < n; ++j) {
      const double tau = -tau_max + j * ht;
      const double arg = 0.5 * std::numbers::pi * std::sinh(tau);
      const double ch = std::cosh(arg);
      t[j] = spec.t_max * std::tanh(arg);
      w[j] = spec.t_max * ht * 0.5 * std::numbers::pi * std::cosh(tau) / (ch * ch);
    }
  }

  std::vector<Complex> log_terms(n);
  double peak = -std::numeric_limits<double>::infinity();
  double phase_scale = 0.0;
  for (int j = 0; j < n; ++j) {
    const Complex s(spec.c, t[j]);
    const Complex sym = symbol(s);
    log_terms[j] = sym - s * log_x;
    peak = std::max(peak, log_terms[j].real());
    // the phase is a difference of these two; its rounding scales with them
    phase_scale = std::max({phase_scale, std::abs(sym.imag()), std::abs(t[j] * log_x)});
  }

  ComplexCompensatedSum sum;
  CompensatedSum l1, tail;
  const double tail_edge = 0.9 * spec.t_max;
  for (int j = 0; j < n; ++j) {
    const Complex term = w[j] * std::exp(log_terms[j] - peak);
    sum += term;
    const double a = std::abs(term);
    l1 += a;
    if (std::abs(t[j]) > tail_edge)
      tail += a;
  }
  constexpr double inv_two_pi = 0.5 / std::numbers::pi;
  LineSum out;
  out.total = sum.value() * inv_two_pi;
  out.peak = peak;
  out.l1 = l1.value() * inv_two_pi;
  out.tail_l1 = tail.value() * inv_two_pi;
  out.phase_scale = phase_scale;
  out.nodes = n;
  if (out.tail_l1 > 1e-10 * out.l1)
    throw TruncationError("inverse_mellin: outer decade carries a fraction " + std::to_string(out.tail_l1 / out.l1) +
                          " of the integral; raise t_max");
  return out;
}

} // namespace detail

/// Contour quadrature with full diagnostics. `symbol` maps complex s to
/// the log of the Mellin transform. Throws SymmetryError when the imaginary
/// part of the sum does not cancel and TruncationError when the outer part
/// of the line still carries weight.
template <class Symbol>
ContourResult inverse_mellin_detailed(Symbol &&symbol, double x, const ContourSpec &spec) {
  const auto sum = detail::line_sum(symbol, x, spec);
  ContourResult out;
  out.value = {sum.total.real(), sum.peak};
  out.imag_part = sum.total.imag();
  out.l1 = sum.l1;
  out.tail_l1 = sum.tail_l1;
  out.nodes = sum.nodes;
  // far in the tail the node phases are huge and their rounding alone
  // leaves an imaginary residue of order eps * phase * l1
  const double phase_noise = 16.0 * std::numeric_limits<double>::epsilon() * sum.phase_scale * out.l1;
  if (std::abs(out.imag_part) > 1e-9 * std::abs(sum.total.real()) + 1e-13 * out.l1 + phase_noise)
    throw SymmetryError("inverse_mellin: imaginary part " + std::to_string(out.imag_part) +
                        " does not cancel against real part " + std::to_string(sum.total.real()));
  return out;
}

/// mantissa * exp(log_scale) for transforms without conjugate symmetry.
struct ComplexScaled {
  Complex mantissa;
  double log_scale = 0.0;
};

/// Complex-valued inverse Mellin transform; no symmetry check.
template <class Symbol>
ComplexScaled inverse_mellin_complex(Symbol &&symbol, double x, const ContourSpec &spec) {
  const auto sum = detail::line_sum(symbol, x, spec);
  return {sum.total, sum.peak};
}

template <class Symbol>
ScaledValue inverse_mellin_scaled(Symbol &&symbol, double x, const ContourSpec &spec) {
  return inverse_mellin_detailed(std::forward<Symbol>(symbol), x, spec).value;
}

/// Real inverse Mellin transform at x.
template <class Symbol>
double inverse_mellin(Symbol &&symbol, double x, const ContourSpec &spec) {
  return inverse_mellin_scaled(std::forward<Symbol>(symbol), x, spec).value();
}

namespace detail {

// Step so that the trapezoid error from the nearest pole, a distance
// `pole_gap` left of the line, stays near e^-40.
inline double contour_step(double pole_gap) { return 2.0 * std::numbers::pi * pole_gap / 45.0; }

// Smallest t (on a grid of `step`) beyond which log|integrand| stays more
// than `drop` below its value at t = 0.
template <class LogIntegrand>
double decay_height(LogIntegrand &&log_mag, double step, double drop) {
  const double ref = log_mag(0.0);
  double t = step;
  for (int j = 1; j < 100000; ++j, t += step) {
    if (log_mag(t) < ref - drop)
      return t;
  }
  throw TruncationError("contour integrand does not decay along the line");
}

// As decay_height, for integrands that are not even in t.
template <class LogIntegrand>
double two_sided_height(LogIntegrand &&log_mag, double step, double drop) {
  return std::max(decay_height(log_mag, step, drop), decay_height([&](double t) { return log_mag(-t); }, step, drop));
}

} // namespace detail

/// Fixed contour for a sequence: abscissa max(1, pole + 1/2), height and
/// node count chosen from the decay of |rho(s - 1)| on that line so the
/// discarded tail is below 1e-12 of the peak.
inline ContourSpec default_contour(const MomentSequence &seq) {
  const double pole = seq.rightmost_pole();
  ContourSpec spec;
  spec.c = std::max(1.0, pole + 0.5);
  const double h = detail::contour_step(spec.c - pole);
  auto log_mag = [&](double t) { return mellin_symbol(seq, Complex(spec.c, t)).real(); };
  // coarse march, then pad by one coarse step
  const double coarse = std::max(h, 0.25);
  spec.t_max = detail::decay_height(log_mag, coarse, std::log(1e14)) + coarse;
  spec.n_points = std::max(65, 2 * static_cast<int>(std::ceil(spec.t_max / h)) + 1);
  return spec;
}

/// Contour adapted to the evaluation point: the abscissa sits at the real
/// saddle of |rho(s - 1) x^{-s}| (clamped at pole + 1/4), which removes the
/// cancellation a fixed line suffers far in the tail of the density.
inline ContourSpec saddle_contour(const MomentSequence &seq, double x) {
  if (!(x > 0.0))
    throw DomainError("saddle_contour: requires x > 0");
  const double log_x = std::log(x);
  const double pole = seq.rightmost_pole();
  const double c_min = pole + 0.25;

  double c = c_min;
  if (mellin_symbol_slope(seq, c_min) < log_x) {
    double lo = c_min, hi = c_min + 1.0;
    while (mellin_symbol_slope(seq, hi) < log_x) {
      lo = hi;
      hi = c_min + 2.0 * (hi - c_min);
      if (hi > 1e300)
        throw DomainError("saddle_contour: x too large");
    }
    for (int it = 0; it < 200 && hi - lo > 1e-12 * std::max(1.0, hi); ++it) {
      const double mid = 0.5 * (lo + hi);
      (mellin_symbol_slope(seq, mid) < log_x ? lo : hi) = mid;
    }
    c = 0.5 * (lo + hi);
  }

  const double sigma = 1.0 / std::sqrt(mellin_symbol_curvature(seq, c));
  const double h = std::min(0.5 * sigma, detail::contour_step(c - pole));
  auto log_mag = [&](double t) {
    const Complex s(c, t);
    return (mellin_symbol(seq, s) - s * log_x).real();
  };
  const double coarse = std::max(h, 0.25 * sigma);
  ContourSpec spec;
  spec.c = c;
  spec.t_max = detail::decay_height(log_mag, coarse, 42.0) + coarse;
  int half = static_cast<int>(std::ceil(spec.t_max / h));
  half = std::max(half, 32);
  spec.n_points = 2 * half + 1;
  return spec;
}

namespace detail {

// The two rightmost distinct poles of s -> rho(s - 1).
inline std::pair<double, double> leading_poles(const MomentSequence &seq) {
  std::vector<double> poles;
  for (const auto &f : seq.factors())
    for (int m = 0; m < 3; ++m)
      poles.push_back(1.0 - (f.offset + m) / f.multiplier);
  std::sort(poles.begin(), poles.end(), std::greater<>());
  const double s0 = poles.front();
  for (double p : poles)
    if (p < s0 - 1e-12)
      return {s0, p};
  return {s0, s0 - 1.0};
}

inline ComplexScaled add(ComplexScaled a, ComplexScaled b) {
  if (a.mantissa == 0.0)
    return b;
  if (b.mantissa == 0.0)
    return a;
  const double scale = std::max(a.log_scale, b.log_scale);
  return {a.mantissa * std::exp(a.log_scale - scale) + b.mantissa * std::exp(b.log_scale - scale), scale};
}

} // namespace detail

/// Residue of exp(symbol(s)) x^{-s} at a real pole, by the trapezoid rule on
/// a circle of the given radius (which must exclude every other pole).
template <class Symbol>
ComplexScaled pole_residue(Symbol &&symbol, double pole, double radius, double x, int n_points = 96) {
  const double log_x = std::log(x);
  std::vector<Complex> log_terms(n_points);
  double peak = -std::numeric_limits<double>::infinity();
  for (int j = 0; j < n_points; ++j) {
    // offset by half a step so no node sits on the real axis
    const double phi = 2.0 * std::numbers::pi * (j + 0.5) / n_points;
    const Complex e = std::polar(1.0, phi);
    const Complex s = pole + radius * e;
    log_terms[j] = symbol(s) - s * log_x + std::log(e);
    peak = std::max(peak, log_terms[j].real());
  }
  detail::ComplexCompensatedSum sum;
  for (const auto &lt : log_terms)
    sum += std::exp(lt - peak);
  return {radius * sum.value() / double(n_points), peak};
}

/// Inverse Mellin transform on `spec`, made robust for small x: when the
/// line sits against the rightmost pole s0 it is moved halfway to the next
/// pole s1 and the residue at s0 is added back, so the line only carries a
/// correction and nothing cancels.
template <class Symbol>
ComplexScaled barnes_integral(Symbol &&symbol, double x, const ContourSpec &spec, double s0, double s1) {
  if (spec.c > s0 + 0.25 + 1e-9)
    return inverse_mellin_complex(symbol, x, spec);

  const double gap = s0 - s1;
  ContourSpec shifted;
  shifted.c = s0 - 0.5 * gap;
  const double h = detail::contour_step(0.5 * gap);
  const double log_x = std::log(x);
  auto log_mag = [&](double t) {
    const Complex s(shifted.c, t);
    return (symbol(s) - s * log_x).real();
  };
  const double coarse = std::max(h, 0.25);
  shifted.t_max = detail::two_sided_height(log_mag, coarse, 42.0) + coarse;
  shifted.n_points = std::max(65, 2 * static_cast<int>(std::ceil(shifted.t_max / h)) + 1);

  // x^{-s} swings by e^{2 radius |ln x|} around the circle; keep that
  // below e^4 so the residue sum does not cancel
  const double radius = std::min(0.25 * gap, 2.0 / std::max(std::abs(log_x), 1e-300));
  return detail::add(inverse_mellin_complex(symbol, x, shifted), pole_residue(symbol, s0, radius, x));
}

/// Principal solution of a gamma-product moment problem, evaluated by
/// Mellin-Barnes quadrature on the saddle contour (see barnes_integral for
/// small x).
inline ScaledValue mellin_barnes_density(const MomentSequence &seq, double x) {
  auto symbol = [&](Complex s) { return mellin_symbol(seq, s); };
  const auto spec = saddle_contour(seq, x);
  const auto [s0, s1] = detail::leading_poles(seq);
  if (spec.c > s0 + 0.25 + 1e-9)
    return inverse_mellin_scaled(symbol, x, spec);
  const auto v = barnes_integral(symbol, x, spec, s0, s1);
  return {v.mantissa.real(), v.log_scale};
}

// ---------------------------------------------------------------------------
// Mellin convolution
// ---------------------------------------------------------------------------

struct ConvolutionOptions {
  double rel_tol = 1e-11;
  double scan_step = 0.5;
  std::size_t max_nodes = 200000;
};

/// (f * g)(x) = int_0^inf f(x/t) g(t) dt/t, integrated in u = ln t.
template <class F, class G>
detail::LineIntegral mellin_convolve_detailed(F &&f, G &&g, double x, const ConvolutionOptions &opt = {}) {
  if (!(x > 0.0))
    throw DomainError("mellin_convolve: requires x > 0");
  const double log_x = std::log(x);
  auto integrand = [&](double u) { return f(std::exp(log_x - u)) * g(std::exp(u)); };
  detail::LineQuadratureOptions q;
  q.rel_tol = opt.rel_tol;
  q.scan_step = opt.scan_step;
  q.max_nodes = opt.max_nodes;
  q.cutoff = 1e-17;
  auto res = detail::integrate_line(integrand, 0.5 * log_x, q);
  if (res.error_estimate > 1e-9 && res.l1 > 0.0)
    throw ConvergenceError("mellin_convolve: refinement stalled at " + std::to_string(res.error_estimate));
  return res;
}

template <class F, class G>
double mellin_convolve(F &&f, G &&g, double x, const ConvolutionOptions &opt = {}) {
  return mellin_convolve_detailed(std::forward<F>(f), std::forward<G>(g), x, opt).value;
}

} // namespace stieltjes
