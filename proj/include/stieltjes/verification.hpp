#pragma once

// Moment checks int_0^inf x^n W(x) dx = rho(n), compared in log domain.
//
// The integral is taken on the line y = p ln x, where p is the tail power of
// the density (-ln W ~ g x^p). In that variable the tail decays like
// exp(-g e^y) and the origin like exp((n + 1 + alpha0) y / p), so a plain
// trapezoid rule converges geometrically. The integrand is divided by rho(n)
// before summation; nothing astronomically large is ever formed.

#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>

#include "stieltjes/detail/line_quadrature.hpp"
#include "stieltjes/errors.hpp"
#include "stieltjes/moment_sequence.hpp"
#include "stieltjes/principal_solutions.hpp"
#include "stieltjes/stieltjes_classes.hpp"
#include "stieltjes/weight_function.hpp"

namespace stieltjes {

struct MomentCheckResult {
  int n = 0;
  double log_integral = 0.0;  // ln |int x^n W dx|
  double log_target = 0.0;    // ln rho(n)
  double rel_error = 0.0;     // |exp(log_integral - log_target) - 1|, or |I|/rho(n) for vanishing checks
  std::size_t nodes_used = 0;
  double ratio = 0.0;         // I / rho(n), signed

  bool passed(double tol) const { return rel_error <= tol; }
};

enum class Substitution {
  GrowthPower,  // u = x^p, p from the density's tail law
  Identity,     // plain x (still integrated in ln x)
};

struct VerificationOptions {
  double rel_tol = 1e-12;
  std::size_t max_nodes = 200000;  // per moment
  Substitution substitution = Substitution::GrowthPower;
  double scan_step = 0.5;
  double stall_tol = 1e-7;
};

namespace detail {

struct MomentLine {
  double p;
  double centre;
};

inline MomentLine moment_line(double alpha0, TailGrowth growth, int n, Substitution sub) {
  const double p = sub == Substitution::GrowthPower ? growth.p : 1.0;
  return {p, p * moment_peak_log_x(alpha0, growth, n)};
}

template <class Integrand>
LineIntegral run_moment_line(Integrand &&f, double centre, const VerificationOptions &opt) {
  LineQuadratureOptions q;
  q.rel_tol = opt.rel_tol;
  q.max_nodes = opt.max_nodes;
  q.scan_step = opt.scan_step;
  try {
    return integrate_line(f, centre, q);
  } catch (const ConvergenceError &) {
    // retry with a looser target; only a stall above stall_tol is an error
    q.rel_tol = opt.stall_tol;
    return integrate_line(f, centre, q);
  }
}

} // namespace detail

/// Checks moment n of a positive density against seq.
inline MomentCheckResult check_moment(const WeightFunction &w, const MomentSequence &seq, int n,
                                      const VerificationOptions &opt = {}) {
  if (n < 0)
    throw DomainError("check_moment: n must be nonnegative");
  const double log_target = log_moment(seq, n);
  const auto line = detail::moment_line(w.alpha0(), w.growth(), n, opt.substitution);
  const double shift = std::log(line.p) + log_target;
  auto f = [&](double y) {
    const double lx = y / line.p;
    const double log_w = w.log_evaluate(std::exp(lx));
    return std::exp((n + 1.0) * lx + log_w - shift);
  };
  const auto res = detail::run_moment_line(f, line.centre, opt);

  MomentCheckResult out;
  out.n = n;
  out.log_target = log_target;
  out.ratio = res.value;
  out.log_integral = std::log(std::abs(res.value)) + log_target;
  out.rel_error = std::abs(res.value - 1.0);
  out.nodes_used = res.nodes;
  return out;
}

/// Checks that moment n of a signed function vanishes relative to rho(n).
/// `alpha0` and `growth` describe the density the perturbation rides on;
/// they place the quadrature line.
inline MomentCheckResult check_vanishing(const std::function<double(double)> &omega, double alpha0,
                                         TailGrowth growth, const MomentSequence &seq, int n,
                                         const VerificationOptions &opt = {}) {
  if (n < 0)
    throw DomainError("check_vanishing: n must be nonnegative");
  const double log_target = log_moment(seq, n);
  const auto line = detail::moment_line(alpha0, growth, n, opt.substitution);
  const double shift = std::log(line.p) + log_target;
  auto f = [&](double y) {
    const double lx = y / line.p;
    const double v = omega(std::exp(lx));
    if (v == 0.0)
      return 0.0;
    return v * std::exp((n + 1.0) * lx - shift);
  };
  const auto res = detail::run_moment_line(f, line.centre, opt);

  MomentCheckResult out;
  out.n = n;
  out.log_target = log_target;
  out.ratio = res.value;
  out.log_integral = std::log(std::abs(res.value)) + log_target;
  out.rel_error = std::abs(res.value);
  out.nodes_used = res.nodes;
  return out;
}

inline MomentCheckResult check_vanishing(const Perturbation &omega, const MomentSequence &seq, int n,
                                         const VerificationOptions &opt = {}) {
  const auto base = omega.sequence();
  return check_vanishing([&omega](double x) { return omega.evaluate(x); }, principal_alpha0(base),
                         principal_growth(base), seq, n, opt);
}

/// Moments of a class member (base + amplitude * omega); the member is
/// positive, so this is an ordinary moment check on its own log.
inline MomentCheckResult check_moment(const StieltjesClassMember &member, const MomentSequence &seq, int n,
                                      const VerificationOptions &opt = {}) {
  const auto &base = member.base();
  WeightFunction as_density(
      base.name() + "~", base.sequence(),
      [&member](double x) { return std::log(member.evaluate(x)); }, base.alpha0(), base.growth(),
      base.representation());
  return check_moment(as_density, seq, n, opt);
}

} // namespace stieltjes
