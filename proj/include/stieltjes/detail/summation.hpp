#pragma once

#include <cmath>
#include <complex>
#include <span>

namespace stieltjes::detail {

/// Neumaier compensated sum. Order-dependent but deterministic for a
/// fixed order of additions.
class CompensatedSum {
public:
  CompensatedSum &operator+=(double v) {
    const double t = sum_ + v;
    if (std::abs(sum_) >= std::abs(v))
      comp_ += (sum_ - t) + v;
    else
      comp_ += (v - t) + sum_;
    sum_ = t;
    return *this;
  }
  double value() const { return sum_ + comp_; }

private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

class ComplexCompensatedSum {
public:
  ComplexCompensatedSum &operator+=(std::complex<double> v) {
    re_ += v.real();
    im_ += v.imag();
    return *this;
  }
  std::complex<double> value() const { return {re_.value(), im_.value()}; }

private:
  CompensatedSum re_;
  CompensatedSum im_;
};

/// Pairwise summation of a contiguous range.
inline double pairwise_sum(std::span<const double> v) {
  if (v.size() <= 16) {
    CompensatedSum s;
    for (double x : v)
      s += x;
    return s.value();
  }
  const auto half = v.size() / 2;
  return pairwise_sum(v.first(half)) + pairwise_sum(v.subspan(half));
}

} // namespace stieltjes::detail
