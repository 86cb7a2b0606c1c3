#pragma once

// Vanishing-moment perturbations omega_k and the one-parameter families of
// densities sharing the moments of a principal solution.
//
//   TM1: omega1(r,k;x) = W1(2r;x) sin(k pi (2r-1)/2r + x^{1/2r} tan(k pi/2r)),  r > |k|
//   TM2: omega2(r,k;x) = 2/(r x^{(r-1)/r}) V(x),
//        V(x) = Re[exp(i pi (1/2 - k (r-1)/r)) K0(2 x^{1/2r} (1 + i tan(pi k/r))^{1/2})],  r > 2|k|
//   TM3: omega3(r,k;x) = (W2(r) * omega1(q=r))(x)   (Mellin convolution),  r > 2|k|
//        evaluated as one complex Mellin-Barnes integral
//
// The sine factor used for the vanishing Mellin transform is sin(pi k s).

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "stieltjes/errors.hpp"
#include "stieltjes/mellin.hpp"
#include "stieltjes/moment_sequence.hpp"
#include "stieltjes/principal_solutions.hpp"
#include "stieltjes/special_functions.hpp"
#include "stieltjes/weight_function.hpp"

namespace stieltjes {

enum class Family { TM1, TM2, TM3 };

inline std::string to_string(Family f) {
  switch (f) {
  case Family::TM1: return "tm1";
  case Family::TM2: return "tm2";
  case Family::TM3: return "tm3";
  }
  return "unknown";
}

// ---------------------------------------------------------------------------
// Constraint checks
// ---------------------------------------------------------------------------

inline void require_tm1_constraint(int r, int k) {
  if (k == 0)
    throw ConstraintError("perturbation index k must be a nonzero integer");
  if (!(r > std::abs(k)))
    throw ConstraintError("TM1 perturbations require r > |k| (got r=" + std::to_string(r) +
                          ", k=" + std::to_string(k) + ")");
}

inline void require_tm2_constraint(int r, int k, const char *family = "TM2") {
  if (k == 0)
    throw ConstraintError("perturbation index k must be a nonzero integer");
  if (!(r > 2 * std::abs(k)))
    throw ConstraintError(std::string(family) + " perturbations require r > 2|k| (got r=" +
                          std::to_string(r) + ", k=" + std::to_string(k) + ")");
}

// ---------------------------------------------------------------------------
// TM1
// ---------------------------------------------------------------------------

/// Sine phase of the TM1-type perturbation with continuous index q:
/// k pi (q-1)/q + x^{1/q} tan(k pi / q).
inline double tm1_phase(double q, int k, double x) {
  return k * std::numbers::pi * (q - 1.0) / q + std::pow(x, 1.0 / q) * std::tan(k * std::numbers::pi / q);
}

/// W1(q;x) sin(tm1_phase). Needs q > 2|k| for the moments to vanish.
inline double omega1_general(double q, int k, double x) {
  if (k == 0 || !(q > 2.0 * std::abs(k)))
    throw ConstraintError("perturbation with index q requires q > 2|k|");
  return w1(q, x) * std::sin(tm1_phase(q, k, x));
}

inline double omega1(int r, int k, double x) {
  require_tm1_constraint(r, k);
  return w1(2.0 * r, x) * std::sin(tm1_phase(2.0 * r, k, x));
}

// ---------------------------------------------------------------------------
// TM2
// ---------------------------------------------------------------------------

namespace detail {

struct Tm2Kernel {
  Complex rotation;  // exp(i pi (1/2 - k (r-1)/r))
  Complex stretch;   // (1 + i tan(pi k / r))^{1/2}, principal root
};

inline Tm2Kernel tm2_kernel(int r, int k) {
  const double beta = std::numbers::pi * (0.5 - double(k) * (r - 1.0) / r);
  return {std::polar(1.0, beta), std::sqrt(Complex(1.0, std::tan(std::numbers::pi * k / r)))};
}

} // namespace detail

/// V_k^{(r)}(x).
inline double tm2_oscillation(int r, int k, double x) {
  require_tm2_constraint(r, k);
  if (!(x > 0.0))
    throw DomainError("tm2_oscillation: requires x > 0");
  const auto kern = detail::tm2_kernel(r, k);
  const double v = 2.0 * std::pow(x, 1.0 / (2.0 * r));
  const Complex w = v * kern.stretch;
  return (kern.rotation * bessel_k0(w)).real();
}

/// V_k^{(r)}(x) / K0(2 x^{1/2r}), evaluated with exponentially scaled K0 so
/// it stays finite where both factors underflow.
inline double tm2_ratio(int r, int k, double x) {
  require_tm2_constraint(r, k);
  if (!(x > 0.0))
    throw DomainError("tm2_ratio: requires x > 0");
  const auto kern = detail::tm2_kernel(r, k);
  const double v = 2.0 * std::pow(x, 1.0 / (2.0 * r));
  const Complex w = v * kern.stretch;
  const Complex num = kern.rotation * bessel_k0_complex_scaled(w) * std::exp(v - w);
  return num.real() / bessel_k0_scaled(v);
}

/// Limit of tm2_ratio as x -> 0+: cos(pi (1/2 - k (r-1)/r)).
inline double tm2_ratio_at_origin(int r, int k) {
  return std::cos(std::numbers::pi * (0.5 - double(k) * (r - 1.0) / r));
}

inline double omega2(int r, int k, double x) {
  require_tm2_constraint(r, k);
  if (!(x > 0.0))
    throw DomainError("omega2: requires x > 0");
  // W2 times the ratio, so the far tail does not go through K0(w) directly
  return w2(r, x) * tm2_ratio(r, k, x);
}

/// omega2 as the Mellin convolution of W1(q=r) with the q=r TM1-type
/// perturbation; independent of the closed form.
inline double omega2_by_convolution(int r, int k, double x, const ConvolutionOptions &opt = {}) {
  require_tm2_constraint(r, k);
  const double q = r;
  return mellin_convolve([q](double y) { return w1(q, y); },
                         [q, k](double t) { return omega1_general(q, k, t); }, x, opt);
}

// ---------------------------------------------------------------------------
// TM3
// ---------------------------------------------------------------------------

namespace detail {

// log M[W2(r) * W1(q=r) e^{i phase}](s): with z = r(s-1)+1 and theta = pi k/r,
// Gamma(z)^3 (cos theta)^z e^{i theta z} e^{i k pi (r-1)/r}.
inline Complex omega3_log_symbol(int r, int k, Complex s) {
  const double theta = std::numbers::pi * k / r;
  const Complex z = double(r) * (s - 1.0) + 1.0;
  return 3.0 * ln_gamma(z) + z * Complex(std::log(std::cos(theta)), theta) +
         Complex(0.0, std::numbers::pi * k * (r - 1.0) / r);
}

} // namespace detail

/// omega3 as the imaginary part of one complex Mellin-Barnes integral on
/// the saddle line of the envelope W3. The phase factor e^{i theta z} makes
/// the integrand lopsided in t, so the height is measured on both sides.
inline double omega3(int r, int k, double x) {
  require_tm2_constraint(r, k, "TM3");
  const auto env = MomentSequence::tm3(r);
  auto symbol = [r, k](Complex s) { return detail::omega3_log_symbol(r, k, s); };
  auto spec = saddle_contour(env, x);
  const double h = 2.0 * spec.t_max / (spec.n_points - 1);
  const double log_x = std::log(x);
  auto log_mag = [&](double t) {
    const Complex s(spec.c, t);
    return (symbol(s) - s * log_x).real();
  };
  spec.t_max = detail::two_sided_height(log_mag, h, 42.0) + h;
  spec.n_points = 2 * static_cast<int>(std::ceil(spec.t_max / h)) + 1;
  const auto [s0, s1] = detail::leading_poles(env);
  const auto v = barnes_integral(symbol, x, spec, s0, s1);
  return v.mantissa.imag() * std::exp(v.log_scale);
}

/// omega3 by direct Mellin convolution W2(r) * omega1(q=r); an independent
/// route to the contour evaluation.
inline double omega3_by_convolution(int r, int k, double x, const ConvolutionOptions &opt = {}) {
  require_tm2_constraint(r, k, "TM3");
  const double q = r;
  return mellin_convolve([r](double y) { return w2(r, y); },
                         [q, k](double t) { return omega1_general(q, k, t); }, x, opt);
}

/// |omega3| is dominated by this convolution (which equals W3 itself).
inline double omega3_envelope(int r, double x, const ConvolutionOptions &opt = {}) {
  const double q = r;
  return mellin_convolve([r](double y) { return w2(r, y); }, [q](double t) { return w1(q, t); }, x, opt);
}

// ---------------------------------------------------------------------------
// Perturbation value type
// ---------------------------------------------------------------------------

class Perturbation {
public:
  Perturbation(Family family, int r, int k) : family_(family), r_(r), k_(k) {
    if (family == Family::TM1)
      require_tm1_constraint(r, k);
    else
      require_tm2_constraint(r, k, family == Family::TM2 ? "TM2" : "TM3");
  }

  double evaluate(double x) const {
    switch (family_) {
    case Family::TM1: return omega1(r_, k_, x);
    case Family::TM2: return omega2(r_, k_, x);
    case Family::TM3: return omega3(r_, k_, x);
    }
    return 0.0;
  }
  double operator()(double x) const { return evaluate(x); }

  Family family() const { return family_; }
  int r() const { return r_; }
  int k() const { return k_; }

  /// The moment sequence whose moments this perturbation leaves unchanged.
  MomentSequence sequence() const {
    switch (family_) {
    case Family::TM1: return MomentSequence::tm1(r_);
    case Family::TM2: return MomentSequence::tm2(r_);
    case Family::TM3: return MomentSequence::tm3(r_);
    }
    return MomentSequence::tm1(r_);
  }

private:
  Family family_;
  int r_;
  int k_;
};

// ---------------------------------------------------------------------------
// Positivity bound for TM2 families
// ---------------------------------------------------------------------------

struct GammaSearchOptions {
  double x_min = 1e-8;
  double log_step = 0.01;          // grid step in ln(2 x^{1/2r})
  double tail_threshold = 1e-3;    // |V/K0| <= envelope below this ends the scan
  double safety = 0.99;
  std::uint64_t mc_seed = 20240531;
  int mc_factor = 10;
};

struct GammaBound {
  double gamma_max = 0.0;      // certified bound on |gamma|
  double sup_ratio = 0.0;      // sup_x |V/K0|
  double argsup_x = 0.0;
  double x_star = 0.0;         // end of the scanned grid
  double tail_envelope = 0.0;  // |K0(w)|/K0(v) at x_star
  double origin_limit = 0.0;   // ratio as x -> 0+
  std::size_t grid_points = 0;
  std::size_t mc_points = 0;
  double mc_min_factor = 0.0;  // min over MC points of 1 - gamma_max |ratio|
};

namespace detail {

inline double tm2_envelope(const Tm2Kernel &kern, double v) {
  const Complex w = v * kern.stretch;
  return std::abs(bessel_k0_complex_scaled(w)) * std::exp(v - w.real()) / bessel_k0_scaled(v);
}

inline double tm2_ratio_in_v(const Tm2Kernel &kern, double v) {
  const Complex w = v * kern.stretch;
  return (kern.rotation * bessel_k0_complex_scaled(w) * std::exp(v - w)).real() / bessel_k0_scaled(v);
}

} // namespace detail

/// Largest |gamma| for which W2 (1 + gamma V/K0) stays nonnegative, times a
/// safety factor. The bound is sup_x |V/K0| taken over a dense log grid,
/// refined by golden-section search, closed at x -> 0 by the analytic limit
/// and at x -> inf by the decaying envelope |K0(w)|/K0(v) >= |V/K0|.
inline GammaBound find_gamma_max(int r, int k, const GammaSearchOptions &opt = {}) {
  require_tm2_constraint(r, k);
  const auto kern = detail::tm2_kernel(r, k);
  const double two_r = 2.0 * r;
  auto v_of_x = [&](double x) { return 2.0 * std::pow(x, 1.0 / two_r); };
  auto x_of_v = [&](double v) { return std::pow(0.5 * v, two_r); };
  auto abs_ratio = [&](double lv) { return std::abs(detail::tm2_ratio_in_v(kern, std::exp(lv))); };

  GammaBound out;
  out.origin_limit = std::abs(tm2_ratio_at_origin(r, k));

  const double lv0 = std::log(v_of_x(opt.x_min));
  double best = out.origin_limit, best_lv = -std::numeric_limits<double>::infinity();
  double lv = lv0;
  std::size_t count = 0;
  for (;; lv += opt.log_step, ++count) {
    const double val = abs_ratio(lv);
    if (!std::isfinite(val))
      throw SearchError("V/K0 is not finite at x = " + std::to_string(x_of_v(std::exp(lv))));
    if (val > best) {
      best = val;
      best_lv = lv;
    }
    const double env = detail::tm2_envelope(kern, std::exp(lv));
    if (env < opt.tail_threshold * std::max(best, 1e-300) && lv > 0.0) {
      out.tail_envelope = env;
      break;
    }
    if (lv > std::log(1e8))
      throw SearchError("V/K0 envelope does not decay; the ratio looks unbounded");
  }
  const double lv_end = lv;
  // The envelope ~ sqrt(v/|w|) exp(-(Re w - v)) must keep decreasing past the grid.
  double prev = out.tail_envelope;
  for (int j = 1; j <= 10; ++j) {
    const double e = detail::tm2_envelope(kern, std::exp(lv_end) * (1.0 + 0.5 * j));
    if (e > prev * (1.0 + 1e-12))
      throw SearchError("V/K0 envelope is not monotone beyond the scanned grid");
    prev = e;
  }

  if (std::isfinite(best_lv)) {
    double a = best_lv - opt.log_step, b = best_lv + opt.log_step;
    const double g = 0.5 * (std::sqrt(5.0) - 1.0);
    double c = b - g * (b - a), d = a + g * (b - a);
    double fc = abs_ratio(c), fd = abs_ratio(d);
    for (int it = 0; it < 60; ++it) {
      if (fc > fd) {
        b = d; d = c; fd = fc; c = b - g * (b - a); fc = abs_ratio(c);
      } else {
        a = c; c = d; fc = fd; d = a + g * (b - a); fd = abs_ratio(d);
      }
    }
    const double lm = 0.5 * (a + b), fm = abs_ratio(lm);
    if (fm > best) {
      best = fm;
      best_lv = lm;
    }
  }
  if (!(best > 0.0) || best > 1e6)
    throw SearchError("sup |V/K0| is not usable: " + std::to_string(best));

  out.sup_ratio = best;
  out.argsup_x = std::isfinite(best_lv) ? x_of_v(std::exp(best_lv)) : 0.0;
  out.x_star = x_of_v(std::exp(lv_end));
  out.grid_points = count + 1;
  out.gamma_max = opt.safety / best;

  // Independent recheck on a random, finer grid.
  std::mt19937_64 rng(opt.mc_seed);
  std::uniform_real_distribution<double> uni(lv0, lv_end);
  out.mc_points = out.grid_points * static_cast<std::size_t>(opt.mc_factor);
  double worst = 1.0;
  for (std::size_t j = 0; j < out.mc_points; ++j) {
    const double f = 1.0 - out.gamma_max * abs_ratio(uni(rng));
    worst = std::min(worst, f);
  }
  out.mc_min_factor = worst;
  if (worst < 0.0)
    throw SearchError("random recheck found a negative class member at gamma_max");
  return out;
}

// ---------------------------------------------------------------------------
// Class members
// ---------------------------------------------------------------------------

inline void require_unit_amplitude(double amplitude, const char *name) {
  if (!(std::abs(amplitude) < 1.0))
    throw ConstraintError(std::string("class member amplitude requires |") + name + "| < 1 (got " +
                          std::to_string(amplitude) + ")");
}

/// W1(2r;x) [1 + eps sin(phase)], |eps| < 1.
inline double class_member_tm1(int r, int k, double eps, double x) {
  require_tm1_constraint(r, k);
  require_unit_amplitude(eps, "eps");
  return w1(2.0 * r, x) * (1.0 + eps * std::sin(tm1_phase(2.0 * r, k, x)));
}

/// W2(r;x) [1 + gamma V/K0] with |gamma| <= gamma_max (passed in so the
/// bound search runs once per family).
inline double class_member_tm2(int r, int k, double gamma, double x, const GammaBound &bound) {
  require_tm2_constraint(r, k);
  if (!(std::abs(gamma) <= bound.gamma_max))
    throw ConstraintError("TM2 class member requires |gamma| <= gamma_max = " +
                          std::to_string(bound.gamma_max) + " (got " + std::to_string(gamma) + ")");
  return w2(r, x) * (1.0 + gamma * tm2_ratio(r, k, x));
}

inline double class_member_tm2(int r, int k, double gamma, double x) {
  return class_member_tm2(r, k, gamma, x, find_gamma_max(r, k));
}

/// W3(r;x) + gamma omega3(r,k;x). Since |omega3| <= W2 * W1(q=r) = W3,
/// every |gamma| < 1 keeps the member nonnegative.
inline double class_member_tm3(int r, int k, double gamma, double x) {
  require_tm2_constraint(r, k, "TM3");
  require_unit_amplitude(gamma, "gamma");
  return w3(r, x) + gamma * omega3(r, k, x);
}

/// A principal solution plus a scaled vanishing-moment perturbation.
class StieltjesClassMember {
public:
  static StieltjesClassMember tm1(int r, int k, double eps) {
    require_tm1_constraint(r, k);
    require_unit_amplitude(eps, "eps");
    return StieltjesClassMember(principal_solution(MomentSequence::tm1(r)), Perturbation(Family::TM1, r, k),
                                eps, 1.0);
  }
  static StieltjesClassMember tm2(int r, int k, double gamma, const GammaBound &bound) {
    require_tm2_constraint(r, k);
    if (!(std::abs(gamma) <= bound.gamma_max))
      throw ConstraintError("TM2 class member requires |gamma| <= gamma_max = " +
                            std::to_string(bound.gamma_max));
    return StieltjesClassMember(principal_solution(MomentSequence::tm2(r)), Perturbation(Family::TM2, r, k),
                                gamma, bound.gamma_max);
  }
  static StieltjesClassMember tm2(int r, int k, double gamma) { return tm2(r, k, gamma, find_gamma_max(r, k)); }
  static StieltjesClassMember tm3(int r, int k, double gamma) {
    require_tm2_constraint(r, k, "TM3");
    require_unit_amplitude(gamma, "gamma");
    return StieltjesClassMember(principal_solution(MomentSequence::tm3(r)), Perturbation(Family::TM3, r, k),
                                gamma, 1.0);
  }

  /// base(x) + amplitude * omega(x); for TM2 the perturbation enters through
  /// V/K0 so the product is formed without underflow.
  double evaluate(double x) const {
    switch (perturbation_.family()) {
    case Family::TM1: return class_member_tm1(perturbation_.r(), perturbation_.k(), amplitude_, x);
    case Family::TM2:
      return base_.evaluate(x) * (1.0 + amplitude_ * tm2_ratio(perturbation_.r(), perturbation_.k(), x));
    case Family::TM3: return base_.evaluate(x) + amplitude_ * perturbation_.evaluate(x);
    }
    return 0.0;
  }
  double operator()(double x) const { return evaluate(x); }

  const WeightFunction &base() const { return base_; }
  const Perturbation &perturbation() const { return perturbation_; }
  double amplitude() const { return amplitude_; }
  double amplitude_bound() const { return amplitude_bound_; }

private:
  StieltjesClassMember(WeightFunction base, Perturbation perturbation, double amplitude, double bound)
      : base_(std::move(base)), perturbation_(perturbation), amplitude_(amplitude), amplitude_bound_(bound) {}

  WeightFunction base_;
  Perturbation perturbation_;
  double amplitude_;
  double amplitude_bound_;
};

} // namespace stieltjes
