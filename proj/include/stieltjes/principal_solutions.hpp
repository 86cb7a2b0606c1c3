#pragma once

// Principal (inverse-Mellin) solutions of the four toy models.
//
//   W1(q; x) = e^{-x^{1/q}} / (q x^{(q-1)/q})            moments Gamma(q n + 1)
//   W2(r; x) = 2 K0(2 x^{1/2r}) / (r x^{(r-1)/r})         moments [(rn)!]^2
//   W3(r; x) = G(x^{1/r}) / (r x^{(r-1)/r}),  G = M^-1[Gamma(s)^3]
//   W4(r; x) = M^-1[(2r(s-1))! ((r(s-1))!)^2]  =  W1(2r) * W2(r)  (Mellin convolution)
//
// W1 with q = 2r solves TM1; the continuous q also covers the half-index
// partner q = r used to build TM2/TM3 perturbations.

#include <cmath>
#include <string>

#include "stieltjes/errors.hpp"
#include "stieltjes/mellin.hpp"
#include "stieltjes/moment_sequence.hpp"
#include "stieltjes/special_functions.hpp"
#include "stieltjes/weight_function.hpp"

namespace stieltjes {

inline double log_w1(double q, double x) {
  if (!(q >= 1.0))
    throw DomainError("w1: requires q >= 1");
  if (!(x > 0.0))
    throw DomainError("w1: requires x > 0");
  const double lx = std::log(x);
  return -std::log(q) - (q - 1.0) / q * lx - std::exp(lx / q);
}

inline double w1(double q, double x) { return std::exp(log_w1(q, x)); }

inline double log_w2(int r, double x) {
  if (r < 1)
    throw DomainError("w2: requires r >= 1");
  if (!(x > 0.0))
    throw DomainError("w2: requires x > 0");
  const double lx = std::log(x);
  const double v = 2.0 * std::exp(lx / (2.0 * r));
  return std::log(2.0 / r) - (r - 1.0) / r * lx + log_bessel_k0(v);
}

inline double w2(int r, double x) { return std::exp(log_w2(r, x)); }

namespace detail {

inline const MomentSequence &cube_of_gamma() {
  static const MomentSequence seq = MomentSequence::tm3(1);
  return seq;
}

inline double positive_log(const ScaledValue &v, const char *who) {
  if (!(v.mantissa > 0.0))
    throw NumericError(std::string(who) + ": contour evaluation returned a non-positive density");
  return v.log_abs();
}

} // namespace detail

inline double log_w3(int r, double x) {
  if (r < 1)
    throw DomainError("w3: requires r >= 1");
  if (!(x > 0.0))
    throw DomainError("w3: requires x > 0");
  const double lx = std::log(x);
  const double y = std::exp(lx / r);
  const double log_g = detail::positive_log(mellin_barnes_density(detail::cube_of_gamma(), y), "w3");
  return log_g - std::log(double(r)) - (r - 1.0) / r * lx;
}

inline double w3(int r, double x) { return std::exp(log_w3(r, x)); }

inline double log_w4(int r, double x) {
  if (r < 1)
    throw DomainError("w4: requires r >= 1");
  if (!(x > 0.0))
    throw DomainError("w4: requires x > 0");
  return detail::positive_log(mellin_barnes_density(MomentSequence::tm4(r), x), "w4");
}

inline double w4(int r, double x) { return std::exp(log_w4(r, x)); }

/// W4 through the Mellin convolution of the TM1 and TM2 principal
/// solutions; an independent route to the contour evaluation.
inline double w4_by_convolution(int r, double x, const ConvolutionOptions &opt = {}) {
  if (r < 1)
    throw DomainError("w4: requires r >= 1");
  return mellin_convolve([r](double y) { return w1(2.0 * r, y); }, [r](double t) { return w2(r, t); }, x,
                         opt);
}

/// The principal solution of `seq` packaged as a WeightFunction. Toy models
/// use their closed forms where available; any other gamma product is
/// evaluated by Mellin-Barnes quadrature.
inline WeightFunction principal_solution(const MomentSequence &seq) {
  const double alpha0 = principal_alpha0(seq);
  const TailGrowth growth = principal_growth(seq);
  const int r = seq.r();
  switch (seq.kind()) {
  case SequenceKind::TM1:
    return {"W1", seq, [r](double x) { return log_w1(2.0 * r, x); }, alpha0, growth,
            Representation::ClosedForm};
  case SequenceKind::TM2:
    return {"W2", seq, [r](double x) { return log_w2(r, x); }, alpha0, growth, Representation::ClosedForm};
  case SequenceKind::TM3:
    return {"W3", seq, [r](double x) { return log_w3(r, x); }, alpha0, growth,
            Representation::MellinBarnes};
  case SequenceKind::TM4:
    return {"W4", seq, [r](double x) { return log_w4(r, x); }, alpha0, growth,
            Representation::MellinBarnes};
  case SequenceKind::GammaProduct:
    break;
  }
  return {"W", seq,
          [seq](double x) { return detail::positive_log(mellin_barnes_density(seq, x), "principal solution"); },
          alpha0, growth, Representation::MellinBarnes};
}

} // namespace stieltjes
