#pragma once

// Numerical uniqueness criteria for the Stieltjes moment problem.
//
//   C1 (Carleman)          sum_n rho(n)^{-1/2n} = inf                 => unique
//   C2 (Krein)             int_0^inf -ln W(x^2) / (1 + x^2) dx < inf  => non-unique
//   C3 (converse Carleman) C1 sum finite and -ln W(e^y) convex on (y', inf)
//                                                                     => non-unique
//
// Each criterion is an analytic statement; the engine classifies it from
// asymptotic fits and reports Undecided instead of guessing near a boundary.

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "stieltjes/detail/gauss_legendre.hpp"
#include "stieltjes/detail/line_quadrature.hpp"
#include "stieltjes/detail/parallel.hpp"
#include "stieltjes/errors.hpp"
#include "stieltjes/moment_sequence.hpp"
#include "stieltjes/verification.hpp"
#include "stieltjes/weight_function.hpp"

namespace stieltjes {

enum class C1Verdict { Divergent, Convergent, Undecided };
enum class C2Verdict { Finite, Infinite, Undecided };
enum class C3Verdict { NonUnique, Inconclusive };
enum class Overall { Unique, NonUnique, Undecided };

inline std::string to_string(C1Verdict v) {
  switch (v) {
  case C1Verdict::Divergent: return "Divergent";
  case C1Verdict::Convergent: return "Convergent";
  case C1Verdict::Undecided: return "Undecided";
  }
  return "?";
}

inline std::string to_string(C2Verdict v) {
  switch (v) {
  case C2Verdict::Finite: return "Finite";
  case C2Verdict::Infinite: return "Infinite";
  case C2Verdict::Undecided: return "Undecided";
  }
  return "?";
}

inline std::string to_string(C3Verdict v) { return v == C3Verdict::NonUnique ? "NonUnique" : "Inconclusive"; }

inline std::string to_string(Overall v) {
  switch (v) {
  case Overall::Unique: return "Unique";
  case Overall::NonUnique: return "NonUnique";
  case Overall::Undecided: return "Undecided";
  }
  return "?";
}

struct CriteriaOptions {
  int n_max = 2000;               // Carleman terms
  double slope_dead_zone = 0.05;  // around the critical decay exponent -1
  double limit_stability = 1e-3;  // n a_n limits from two windows must agree to this
  double beta_dead_zone = 0.02;   // Krein: fitted vs declared exponent, and around 1
  double fit_z_lo = 10.0;         // Krein tail fit on ln x in [fit_z_lo, fit_z_hi]
  double fit_z_hi = 20.0;
  double y_lo = -10.0;            // convexity grid for C3
  double y_hi = 30.0;
  double y_step = 0.25;
  int min_convex_points = 8;      // y' must leave at least this many grid points
  int verify_moments = 4;         // n = 0 .. verify_moments-1 checked before any verdict
  double verify_tol = 1e-6;
};

struct CarlemanPart {
  C1Verdict verdict = C1Verdict::Undecided;
  std::vector<std::pair<int, double>> terms;  // (n, a_n)
  double fitted_decay_exponent = 0.0;
  std::optional<double> limit_n_an;           // set when the slope is near -1
  std::string note;
};

struct KreinPart {
  C2Verdict verdict = C2Verdict::Undecided;
  double integral_estimate = std::numeric_limits<double>::quiet_NaN();
  double growth_exponent = 0.0;   // beta used for the decision
  double fitted_exponent = 0.0;   // beta from the tail fit
  bool exact_exponent = false;    // growth_exponent comes from a closed form
  std::string note;
};

struct ConverseCarlemanPart {
  C3Verdict verdict = C3Verdict::Inconclusive;
  double convexity_margin = std::numeric_limits<double>::quiet_NaN();  // min psi'' on (y', y_hi)
  double y_prime = std::numeric_limits<double>::quiet_NaN();
  std::string note;
};

struct CriterionReport {
  std::string sequence;
  std::string solution;
  std::vector<MomentCheckResult> moment_checks;
  CarlemanPart c1;
  KreinPart c2;
  ConverseCarlemanPart c3;
  Overall overall = Overall::Undecided;
};

namespace detail {

// Least squares for y ~ sum_k c_k basis_k by modified Gram-Schmidt.
template <std::size_t K>
std::array<double, K> least_squares(const std::vector<std::array<double, K>> &rows, const std::vector<double> &y) {
  const std::size_t m = rows.size();
  std::array<std::vector<double>, K> q;
  std::array<std::array<double, K>, K> r{};
  for (std::size_t k = 0; k < K; ++k) {
    q[k].resize(m);
    for (std::size_t i = 0; i < m; ++i)
      q[k][i] = rows[i][k];
    for (std::size_t j = 0; j < k; ++j) {
      double dot = 0.0;
      for (std::size_t i = 0; i < m; ++i)
        dot += q[j][i] * q[k][i];
      r[j][k] = dot;
      for (std::size_t i = 0; i < m; ++i)
        q[k][i] -= dot * q[j][i];
    }
    double norm = 0.0;
    for (double v : q[k])
      norm += v * v;
    norm = std::sqrt(norm);
    if (!(norm > 0.0))
      throw NumericError("least squares: rank-deficient basis");
    r[k][k] = norm;
    for (double &v : q[k])
      v /= norm;
  }
  std::array<double, K> qty{}, c{};
  for (std::size_t k = 0; k < K; ++k)
    for (std::size_t i = 0; i < m; ++i)
      qty[k] += q[k][i] * y[i];
  for (std::size_t k = K; k-- > 0;) {
    double s = qty[k];
    for (std::size_t j = k + 1; j < K; ++j)
      s -= r[k][j] * c[j];
    c[k] = s / r[k][k];
  }
  return c;
}

// lim n a_n from n a_n ~ L + b ln(n)/n + c/n on [lo, hi].
inline double n_an_limit(const std::vector<std::pair<int, double>> &terms, int lo, int hi) {
  std::vector<std::array<double, 3>> rows;
  std::vector<double> y;
  for (const auto &[n, a] : terms) {
    if (n < lo || n > hi)
      continue;
    rows.push_back({1.0, std::log(double(n)) / n, 1.0 / n});
    y.push_back(n * a);
  }
  return least_squares<3>(rows, y)[0];
}

} // namespace detail

/// C1: Carleman sum of a_n = rho(n)^{-1/2n}. The decay exponent is the
/// log-log slope over the upper half of 1..n_max; near -1 the limit of
/// n a_n decides (a positive limit means harmonic decay, hence divergence).
/// Throws UndecidedError when the slope is near -1 and no stable limit exists.
inline CarlemanPart carleman(const MomentSequence &seq, int n_max, const CriteriaOptions &opt = {}) {
  if (n_max < 50)
    throw DomainError("carleman: n_max must be at least 50");
  CarlemanPart out;
  out.terms.reserve(n_max);
  for (int n = 1; n <= n_max; ++n)
    out.terms.emplace_back(n, std::exp(-log_moment(seq, n) / (2.0 * n)));

  std::vector<std::array<double, 2>> rows;
  std::vector<double> y;
  for (const auto &[n, a] : out.terms) {
    if (2 * n < n_max)
      continue;
    rows.push_back({1.0, std::log(double(n))});
    y.push_back(std::log(a));
  }
  out.fitted_decay_exponent = detail::least_squares<2>(rows, y)[1];
  const double slope = out.fitted_decay_exponent;

  if (slope < -1.0 - opt.slope_dead_zone) {
    out.verdict = C1Verdict::Convergent;
    out.note = "a_n decays faster than 1/n";
    return out;
  }
  if (slope > -1.0 + opt.slope_dead_zone) {
    out.verdict = C1Verdict::Divergent;
    out.note = "a_n decays slower than 1/n";
    return out;
  }
  const double near = detail::n_an_limit(out.terms, n_max / 4, n_max / 2);
  const double far = detail::n_an_limit(out.terms, n_max / 2, n_max);
  if (far > 0.0 && std::abs(far - near) <= opt.limit_stability * far) {
    out.verdict = C1Verdict::Divergent;
    out.limit_n_an = far;
    out.note = "logarithmic test: n a_n tends to a positive limit";
    return out;
  }
  throw UndecidedError("carleman: decay exponent " + std::to_string(slope) +
                       " is within the dead zone of -1 and n a_n has no stable limit (" + std::to_string(near) +
                       " vs " + std::to_string(far) + ")");
}

namespace detail {

// F(z) = -ln W(e^{2z}) ~ C e^{beta z} + (linear in z): second differences
// remove the linear part, their ratio gives the exponent.
struct KreinTail {
  double beta = std::numeric_limits<double>::quiet_NaN();
  double amplitude = std::numeric_limits<double>::quiet_NaN();  // C
};

inline KreinTail krein_tail_fit(const WeightFunction &w, double z_lo, double z_hi) {
  auto F = [&](double z) { return -w.log_evaluate(std::exp(2.0 * z)); };
  auto d2 = [&](double z) { return F(z + 1.0) - 2.0 * F(z) + F(z - 1.0); };
  const double z1 = z_lo + 1.0, z2 = z_hi - 1.0;
  const double a = d2(z1), b = d2(z2);
  KreinTail out;
  if (!(a > 0.0 && b > 0.0))
    return out;
  out.beta = std::log(b / a) / (z2 - z1);
  out.amplitude = b / (std::exp(out.beta * z2) * (2.0 * std::cosh(out.beta) - 2.0));
  return out;
}

// Integrand in u = ln x.
inline double krein_integrand(const WeightFunction &w, double u) {
  return -w.log_evaluate(std::exp(2.0 * u)) * std::exp(u) / (1.0 + std::exp(2.0 * u));
}

inline double krein_integral(const WeightFunction &w) {
  LineQuadratureOptions q;
  q.rel_tol = 1e-10;
  q.cutoff = 1e-16;
  return integrate_line([&](double u) { return krein_integrand(w, u); }, 0.0, q).value;
}

// For densities known only through contour quadrature, which loses all
// precision once x^2 is astronomically large: integrate up to x = e^{z_hi}
// and add the fitted tail C x^beta / x^2.
inline double krein_integral_truncated(const WeightFunction &w, const KreinTail &tail, double z_hi) {
  constexpr double u_lo = -50.0;  // integrand ~ |u| e^u there
  const double body = integrate_interval([&](double u) { return krein_integrand(w, u); }, u_lo, z_hi, 1e-9);
  return body + tail.amplitude * std::exp((tail.beta - 1.0) * z_hi) / (1.0 - tail.beta);
}

} // namespace detail

/// C2: the Krein integral. Closed-form densities carry an exact tail
/// exponent beta = 2p, which must agree with the numerical fit; densities
/// without a closed-form logarithm get the fit and the numeric integral as
/// diagnostics only, and the verdict stays Undecided.
inline KreinPart krein(const WeightFunction &w, const CriteriaOptions &opt = {}) {
  KreinPart out;
  const auto tail = detail::krein_tail_fit(w, opt.fit_z_lo, opt.fit_z_hi);
  out.fitted_exponent = tail.beta;

  if (!w.closed_form()) {
    out.growth_exponent = out.fitted_exponent;
    out.exact_exponent = false;
    out.verdict = C2Verdict::Undecided;
    out.note = "no closed form for ln W; tail exponent and integral are numerical estimates only";
    if (out.fitted_exponent < 1.0 - opt.beta_dead_zone) {
      try {
        out.integral_estimate = detail::krein_integral_truncated(w, tail, opt.fit_z_hi);
      } catch (const NumericError &e) {
        out.note += std::string("; integral estimate failed: ") + e.what();
      }
    }
    return out;
  }

  out.exact_exponent = true;
  out.growth_exponent = 2.0 * w.growth().p;
  if (!(std::abs(out.fitted_exponent - out.growth_exponent) <= opt.beta_dead_zone)) {
    out.verdict = C2Verdict::Undecided;
    out.note = "fitted tail exponent disagrees with the declared growth";
    return out;
  }
  if (out.growth_exponent >= 1.0) {
    out.verdict = C2Verdict::Infinite;
    out.integral_estimate = std::numeric_limits<double>::infinity();
    out.note = "-ln W(x^2) grows at least linearly";
    return out;
  }
  out.verdict = C2Verdict::Finite;
  out.integral_estimate = detail::krein_integral(w);
  out.note = "-ln W(x^2) grows sublinearly";
  return out;
}

/// C3: convexity of psi(y) = -ln W(e^y) on a grid; y' is the smallest grid
/// point after which every second difference is positive. Fires only when
/// the Carleman sum converges. Throws InconclusiveError when no such y'
/// exists within the grid.
inline ConverseCarlemanPart converse_carleman(const MomentSequence &seq, const WeightFunction &w,
                                              const CriteriaOptions &opt = {}) {
  const int n = static_cast<int>(std::floor((opt.y_hi - opt.y_lo) / opt.y_step + 1e-9)) + 1;
  std::vector<double> ys(n);
  for (int j = 0; j < n; ++j)
    ys[j] = opt.y_lo + j * opt.y_step;
  const auto psi = detail::parallel_map(ys, [&](double y) { return -w.log_evaluate(std::exp(y)); });

  const double h2 = opt.y_step * opt.y_step;
  int first = n - 1;  // index of y'
  double margin = std::numeric_limits<double>::infinity();
  for (int j = n - 2; j >= 1; --j) {
    const double d2 = (psi[j - 1] - 2.0 * psi[j] + psi[j + 1]) / h2;
    if (!(d2 > 0.0))
      break;
    margin = std::min(margin, d2);
    first = j;
  }
  if (n - 1 - first < opt.min_convex_points)
    throw InconclusiveError("converse_carleman: -ln W(e^y) is not convex on any tail of [" +
                            std::to_string(opt.y_lo) + ", " + std::to_string(opt.y_hi) + "]");

  ConverseCarlemanPart out;
  out.y_prime = ys[first];
  out.convexity_margin = margin;

  C1Verdict c1 = C1Verdict::Undecided;
  try {
    c1 = carleman(seq, opt.n_max, opt).verdict;
  } catch (const UndecidedError &) {
  }
  if (c1 == C1Verdict::Convergent) {
    out.verdict = C3Verdict::NonUnique;
    out.note = "convex beyond y' and the Carleman sum converges";
  } else {
    out.verdict = C3Verdict::Inconclusive;
    out.note = "convex beyond y', but the criterion needs a convergent Carleman sum";
  }
  return out;
}

/// All three criteria for a density that has first been checked against
/// the sequence. Throws RefusesError when it does not reproduce the
/// moments and ConsistencyError if the verdicts contradict each other.
inline CriterionReport full_report(const MomentSequence &seq, const WeightFunction &w,
                                   const CriteriaOptions &opt = {}) {
  CriterionReport rep;
  rep.sequence = describe(seq);
  rep.solution = w.name();

  std::vector<int> ns(std::max(opt.verify_moments, 1));
  for (std::size_t j = 0; j < ns.size(); ++j)
    ns[j] = static_cast<int>(j);
  try {
    rep.moment_checks = detail::parallel_map(ns, [&](int n) { return check_moment(w, seq, n); });
  } catch (const NumericError &e) {
    throw RefusesError("criteria: moment verification of " + w.name() + " failed: " + e.what());
  }
  for (const auto &m : rep.moment_checks)
    if (!m.passed(opt.verify_tol))
      throw RefusesError("criteria: " + w.name() + " does not reproduce moment n = " + std::to_string(m.n) +
                         " of " + rep.sequence + " (relative error " + std::to_string(m.rel_error) + ")");

  try {
    rep.c1 = carleman(seq, opt.n_max, opt);
  } catch (const UndecidedError &e) {
    rep.c1.verdict = C1Verdict::Undecided;
    rep.c1.note = e.what();
  }
  rep.c2 = krein(w, opt);
  try {
    rep.c3 = converse_carleman(seq, w, opt);
  } catch (const InconclusiveError &e) {
    rep.c3.verdict = C3Verdict::Inconclusive;
    rep.c3.note = e.what();
  }

  const bool unique = rep.c1.verdict == C1Verdict::Divergent;
  const bool non_unique = rep.c2.verdict == C2Verdict::Finite || rep.c3.verdict == C3Verdict::NonUnique;
  if (unique && non_unique)
    throw ConsistencyError("criteria: C1 proves uniqueness for " + rep.sequence +
                           " while C2/C3 report non-uniqueness");
  rep.overall = unique ? Overall::Unique : non_unique ? Overall::NonUnique : Overall::Undecided;
  return rep;
}

} // namespace stieltjes
