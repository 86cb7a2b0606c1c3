#pragma once

// Gamma-product moment sequences rho(n) = prod_j Gamma(a_j n + b_j), kept in
// log domain. The four toy models are
//   TM1: (2rn)!          TM2: [(rn)!]^2
//   TM3: [(rn)!]^3       TM4: (2rn)! [(rn)!]^2

#include <algorithm>
#include <charconv>
#include <cmath>
#include <complex>
#include <limits>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "stieltjes/errors.hpp"
#include "stieltjes/special_functions.hpp"

namespace stieltjes {

enum class SequenceKind { TM1, TM2, TM3, TM4, GammaProduct };

/// One factor Gamma(multiplier * n + offset).
struct GammaFactor {
  double multiplier = 1.0;
  double offset = 1.0;

  friend bool operator==(const GammaFactor &, const GammaFactor &) = default;
};

class MomentSequence {
public:
  static MomentSequence tm1(int r) { return {SequenceKind::TM1, r, {{2.0 * r, 1.0}}}; }
  static MomentSequence tm2(int r) { return {SequenceKind::TM2, r, {{double(r), 1.0}, {double(r), 1.0}}}; }
  static MomentSequence tm3(int r) {
    return {SequenceKind::TM3, r, {{double(r), 1.0}, {double(r), 1.0}, {double(r), 1.0}}};
  }
  static MomentSequence tm4(int r) {
    return {SequenceKind::TM4, r, {{2.0 * r, 1.0}, {double(r), 1.0}, {double(r), 1.0}}};
  }
  static MomentSequence gamma_product(std::vector<GammaFactor> factors) {
    if (factors.empty())
      throw DomainError("gamma product needs at least one factor");
    for (const auto &f : factors)
      if (!(f.multiplier > 0.0))
        throw DomainError("gamma product multipliers must be positive");
    return {SequenceKind::GammaProduct, 1, std::move(factors)};
  }

  SequenceKind kind() const { return kind_; }
  int r() const { return r_; }
  const std::vector<GammaFactor> &factors() const { return factors_; }

  /// Sum of the multipliers; the density decays like exp(-g x^{1/A}).
  double total_multiplier() const {
    double a = 0.0;
    for (const auto &f : factors_)
      a += f.multiplier;
    return a;
  }

  /// Rightmost pole of s -> rho(s - 1), i.e. the largest s with
  /// a_j (s - 1) + b_j = 0.
  double rightmost_pole() const {
    double s = -std::numeric_limits<double>::infinity();
    for (const auto &f : factors_)
      s = std::max(s, 1.0 - f.offset / f.multiplier);
    return s;
  }

  /// Number of factors whose first pole coincides with rightmost_pole().
  int pole_multiplicity() const {
    const double s0 = rightmost_pole();
    int m = 0;
    for (const auto &f : factors_)
      if (std::abs(1.0 - f.offset / f.multiplier - s0) < 1e-12)
        ++m;
    return m;
  }

  friend bool operator==(const MomentSequence &, const MomentSequence &) = default;

private:
  MomentSequence(SequenceKind kind, int r, std::vector<GammaFactor> factors)
      : kind_(kind), r_(r), factors_(std::move(factors)) {
    if (kind != SequenceKind::GammaProduct && r < 1)
      throw DomainError("toy model sequences need r >= 1");
  }

  SequenceKind kind_;
  int r_;
  std::vector<GammaFactor> factors_;
};

/// ln rho(n).
inline double log_moment(const MomentSequence &seq, int n) {
  if (n < 0)
    throw DomainError("log_moment: n must be nonnegative");
  double acc = 0.0;
  for (const auto &f : seq.factors())
    acc += ln_gamma(f.multiplier * n + f.offset);
  return acc;
}

/// ln rho(s - 1) continued to complex s.
inline Complex mellin_symbol(const MomentSequence &seq, Complex s) {
  Complex acc = 0.0;
  for (const auto &f : seq.factors())
    acc += ln_gamma(f.multiplier * (s - 1.0) + f.offset);
  return acc;
}

/// d/ds of ln rho(s - 1) on the real axis right of the poles.
inline double mellin_symbol_slope(const MomentSequence &seq, double s) {
  double acc = 0.0;
  for (const auto &f : seq.factors())
    acc += f.multiplier * digamma(f.multiplier * (s - 1.0) + f.offset);
  return acc;
}

/// Second derivative of ln rho(s - 1) on the real axis.
inline double mellin_symbol_curvature(const MomentSequence &seq, double s) {
  double acc = 0.0;
  for (const auto &f : seq.factors())
    acc += f.multiplier * f.multiplier * trigamma(f.multiplier * (s - 1.0) + f.offset);
  return acc;
}

inline std::string to_string(SequenceKind k) {
  switch (k) {
  case SequenceKind::TM1: return "tm1";
  case SequenceKind::TM2: return "tm2";
  case SequenceKind::TM3: return "tm3";
  case SequenceKind::TM4: return "tm4";
  case SequenceKind::GammaProduct: return "gamma";
  }
  return "unknown";
}

namespace detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
    s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
    s.remove_suffix(1);
  return s;
}

// "3", "1/2", "0.5", "-3/2"
inline double parse_number(std::string_view text, std::string_view context) {
  text = trim(text);
  if (text.empty())
    throw ParseError("empty number in '" + std::string(context) + "'");
  const auto slash = text.find('/');
  auto parse_plain = [&](std::string_view t) {
    double v = 0.0;
    const auto *end = t.data() + t.size();
    auto [ptr, ec] = std::from_chars(t.data(), end, v);
    if (ec != std::errc() || ptr != end)
      throw ParseError("bad number '" + std::string(t) + "' in '" + std::string(context) + "'");
    return v;
  };
  if (slash == std::string_view::npos)
    return parse_plain(text);
  const double den = parse_plain(trim(text.substr(slash + 1)));
  if (den == 0.0)
    throw ParseError("zero denominator in '" + std::string(context) + "'");
  return parse_plain(trim(text.substr(0, slash))) / den;
}

// "2n+1", "n", "1/2n-1/2", "3n"
inline GammaFactor parse_gamma_term(std::string_view term) {
  term = trim(term);
  const auto npos = term.find('n');
  if (npos == std::string_view::npos)
    throw ParseError("gamma term '" + std::string(term) + "' has no 'n'");
  GammaFactor f;
  const auto coef = trim(term.substr(0, npos));
  f.multiplier = coef.empty() ? 1.0 : parse_number(coef, term);
  auto rest = trim(term.substr(npos + 1));
  if (rest.empty()) {
    f.offset = 0.0;
  } else {
    const char sign = rest.front();
    if (sign != '+' && sign != '-')
      throw ParseError("gamma term '" + std::string(term) + "' must look like a n + b");
    rest.remove_prefix(1);
    f.offset = parse_number(rest, term);
    if (sign == '-')
      f.offset = -f.offset;
  }
  if (!(f.multiplier > 0.0))
    throw ParseError("gamma term '" + std::string(term) + "' needs a positive multiplier");
  return f;
}

} // namespace detail

/// Parses `tm1:r=2`, `tm2:r=3`, `tm3:r=4`, `tm4:r=2` and
/// `gamma:2n+1,n+1,n+1` (one Gamma(a n + b) per comma-separated term).
inline MomentSequence parse_sequence(std::string_view text) {
  text = detail::trim(text);
  const auto colon = text.find(':');
  if (colon == std::string_view::npos)
    throw ParseError("sequence descriptor '" + std::string(text) + "' lacks ':'");
  const auto head = detail::trim(text.substr(0, colon));
  const auto body = detail::trim(text.substr(colon + 1));

  if (head == "gamma") {
    std::vector<GammaFactor> factors;
    std::size_t start = 0;
    while (start <= body.size()) {
      auto comma = body.find(',', start);
      if (comma == std::string_view::npos)
        comma = body.size();
      factors.push_back(detail::parse_gamma_term(body.substr(start, comma - start)));
      start = comma + 1;
    }
    for (const auto &f : factors)
      if (f.offset <= 0.0 && f.offset == std::floor(f.offset))
        throw ParseError("gamma descriptor has a pole at n = 0");
    return MomentSequence::gamma_product(std::move(factors));
  }

  if (body.size() < 3 || body.substr(0, 2) != "r=")
    throw ParseError("toy model descriptor must be '<tm>:r=<int>', got '" + std::string(text) + "'");
  int r = 0;
  const auto digits = body.substr(2);
  auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), r);
  if (ec != std::errc() || ptr != digits.data() + digits.size() || r < 1)
    throw ParseError("r must be a positive integer in '" + std::string(text) + "'");

  if (head == "tm1") return MomentSequence::tm1(r);
  if (head == "tm2") return MomentSequence::tm2(r);
  if (head == "tm3") return MomentSequence::tm3(r);
  if (head == "tm4") return MomentSequence::tm4(r);
  throw ParseError("unknown sequence kind '" + std::string(head) + "'");
}

inline std::string describe(const MomentSequence &seq) {
  if (seq.kind() != SequenceKind::GammaProduct)
    return to_string(seq.kind()) + ":r=" + std::to_string(seq.r());
  std::ostringstream os;
  os << "gamma:";
  bool first = true;
  for (const auto &f : seq.factors()) {
    if (!first)
      os << ',';
    first = false;
    os << f.multiplier << 'n';
    if (f.offset != 0.0)
      os << (f.offset > 0 ? "+" : "-") << std::abs(f.offset);
  }
  return os.str();
}

} // namespace stieltjes
