#pragma once

#include <cmath>
#include <functional>
#include <string>
#include <utility>

#include "stieltjes/errors.hpp"
#include "stieltjes/moment_sequence.hpp"

namespace stieltjes {

/// Stretched-exponential tail: -ln W(x) ~ g * x^p as x -> infinity.
struct TailGrowth {
  double g = 1.0;
  double p = 1.0;
};

/// How a density is evaluated. Only closed forms have a logarithm that can
/// be written down, which matters for the Krein criterion.
enum class Representation { ClosedForm, MellinBarnes, Convolution };

/// A strictly positive density on (0, inf) together with its endpoint
/// behaviour and the moment sequence it is meant to solve.
class WeightFunction {
public:
  using LogDensity = std::function<double(double)>;

  WeightFunction(std::string name, MomentSequence seq, LogDensity log_density, double alpha0,
                 TailGrowth growth, Representation repr)
      : name_(std::move(name)), seq_(std::move(seq)), log_density_(std::move(log_density)),
        alpha0_(alpha0), growth_(growth), repr_(repr) {}

  /// ln W(x), x > 0.
  double log_evaluate(double x) const {
    if (!(x > 0.0))
      throw DomainError(name_ + ": requires x > 0");
    return log_density_(x);
  }
  double evaluate(double x) const { return std::exp(log_evaluate(x)); }
  double operator()(double x) const { return evaluate(x); }

  const std::string &name() const { return name_; }
  const MomentSequence &sequence() const { return seq_; }
  /// W(x) ~ x^alpha0 (up to log factors) as x -> 0+.
  double alpha0() const { return alpha0_; }
  TailGrowth growth() const { return growth_; }
  Representation representation() const { return repr_; }
  bool closed_form() const { return repr_ == Representation::ClosedForm; }

private:
  std::string name_;
  MomentSequence seq_;
  LogDensity log_density_;
  double alpha0_;
  TailGrowth growth_;
  Representation repr_;
};

/// Tail law of the principal solution of a gamma-product sequence:
/// p = 1 / A and g = A (prod a_j^{a_j})^{-1/A}, A = sum a_j.
inline TailGrowth principal_growth(const MomentSequence &seq) {
  const double a_total = seq.total_multiplier();
  double log_prod = 0.0;
  for (const auto &f : seq.factors())
    log_prod += f.multiplier * std::log(f.multiplier);
  return {a_total * std::exp(-log_prod / a_total), 1.0 / a_total};
}

/// Small-x exponent of the principal solution: (rightmost pole) - 1.
inline double principal_alpha0(const MomentSequence &seq) { return seq.rightmost_pole() - 1.0; }

/// ln x at which x^{n+1} W(x) peaks, from the declared endpoint laws.
inline double moment_peak_log_x(double alpha0, TailGrowth growth, int n) {
  const double lead = std::max(n + 1.0 + alpha0, 0.05);
  return std::log(lead / (growth.p * growth.g)) / growth.p;
}

} // namespace stieltjes
