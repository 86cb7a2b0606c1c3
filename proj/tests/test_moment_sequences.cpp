#include <gtest/gtest.h>

#include <cmath>
#include <cstdint>
#include <vector>

#include "stieltjes/moment_sequence.hpp"

using namespace stieltjes;

namespace {

// Exact nonnegative integers in base 1e9, enough for factorial products.
class BigUint {
public:
  explicit BigUint(std::uint32_t v = 1) : limbs_{v} {}

  BigUint &operator*=(std::uint32_t m) {
    std::uint64_t carry = 0;
    for (auto &l : limbs_) {
      const std::uint64_t p = std::uint64_t(l) * m + carry;
      l = static_cast<std::uint32_t>(p % kBase);
      carry = p / kBase;
    }
    while (carry) {
      limbs_.push_back(static_cast<std::uint32_t>(carry % kBase));
      carry /= kBase;
    }
    return *this;
  }

  BigUint &operator*=(const BigUint &o) {
    std::vector<std::uint64_t> acc(limbs_.size() + o.limbs_.size() + 1, 0);
    for (std::size_t i = 0; i < limbs_.size(); ++i) {
      std::uint64_t carry = 0;
      for (std::size_t j = 0; j < o.limbs_.size() || carry; ++j) {
        const std::uint64_t cur =
            acc[i + j] + carry + (j < o.limbs_.size() ? std::uint64_t(limbs_[i]) * o.limbs_[j] : 0);
        acc[i + j] = cur % kBase;
        carry = cur / kBase;
      }
    }
    while (acc.size() > 1 && acc.back() == 0)
      acc.pop_back();
    limbs_.assign(acc.begin(), acc.end());
    return *this;
  }

  /// Natural log from the three leading limbs.
  double log() const {
    double lead = 0.0;
    const std::size_t n = limbs_.size();
    const std::size_t take = std::min<std::size_t>(3, n);
    for (std::size_t i = 0; i < take; ++i)
      lead = lead * kBase + limbs_[n - 1 - i];
    return std::log(lead) + double(n - take) * std::log(double(kBase));
  }

private:
  static constexpr std::uint64_t kBase = 1000000000ULL;
  std::vector<std::uint32_t> limbs_;
};

BigUint factorial(int n) {
  BigUint f(1);
  for (int i = 2; i <= n; ++i)
    f *= static_cast<std::uint32_t>(i);
  return f;
}

// rho(n) exactly, for the four toy models.
BigUint exact_moment(SequenceKind kind, int r, int n) {
  const BigUint a = factorial(r * n);
  switch (kind) {
  case SequenceKind::TM1: return factorial(2 * r * n);
  case SequenceKind::TM2: {
    BigUint v = a;
    v *= a;
    return v;
  }
  case SequenceKind::TM3: {
    BigUint v = a;
    v *= a;
    v *= a;
    return v;
  }
  case SequenceKind::TM4: {
    BigUint v = factorial(2 * r * n);
    v *= a;
    v *= a;
    return v;
  }
  default: break;
  }
  return BigUint(0);
}

MomentSequence make(SequenceKind kind, int r) {
  switch (kind) {
  case SequenceKind::TM1: return MomentSequence::tm1(r);
  case SequenceKind::TM2: return MomentSequence::tm2(r);
  case SequenceKind::TM3: return MomentSequence::tm3(r);
  default: return MomentSequence::tm4(r);
  }
}

} // namespace

TEST(LogMoment, FactorialArithmetic) {
  EXPECT_NEAR(log_moment(MomentSequence::tm1(1), 2), std::log(24.0), 1e-14);
  EXPECT_NEAR(log_moment(MomentSequence::tm2(2), 3), 2.0 * std::log(720.0), 1e-13);
  for (auto seq : {MomentSequence::tm1(3), MomentSequence::tm2(2), MomentSequence::tm3(1), MomentSequence::tm4(2)})
    EXPECT_EQ(log_moment(seq, 0), 0.0);
}

TEST(LogMoment, MatchesExactBigIntegerProducts) {
  const double log_cap = 300.0 * std::log(10.0);
  for (auto kind : {SequenceKind::TM1, SequenceKind::TM2, SequenceKind::TM3, SequenceKind::TM4}) {
    for (int r = 1; r <= 5; ++r) {
      const auto seq = make(kind, r);
      for (int n = 1;; ++n) {
        const double lm = log_moment(seq, n);
        if (lm > log_cap)
          break;
        const double exact = exact_moment(kind, r, n).log();
        // relative error of rho itself is |exp(lm - exact) - 1|
        EXPECT_LT(std::abs(std::expm1(lm - exact)), 1e-12) << to_string(kind) << " r=" << r << " n=" << n;
      }
    }
  }
}

TEST(LogMoment, StrictlyIncreasing) {
  for (auto seq : {MomentSequence::tm1(1), MomentSequence::tm2(1), MomentSequence::tm3(2), MomentSequence::tm4(1)})
    for (int n = 1; n < 60; ++n)
      EXPECT_LT(log_moment(seq, n), log_moment(seq, n + 1));
}

TEST(MellinSymbol, ConsistentWithLogMoment) {
  for (auto seq : {MomentSequence::tm1(2), MomentSequence::tm2(3), MomentSequence::tm3(1), MomentSequence::tm4(2)})
    for (int n = 0; n <= 20; ++n) {
      const Complex v = mellin_symbol(seq, Complex(n + 1.0, 0.0));
      EXPECT_NEAR(v.real(), log_moment(seq, n), 1e-12 * std::max(1.0, log_moment(seq, n)));
      EXPECT_NEAR(v.imag(), 0.0, 1e-12);
    }
}

TEST(MellinSymbol, SpotValues) {
  EXPECT_NEAR(mellin_symbol(MomentSequence::tm2(1), Complex(1.0, 0.0)).real(), 0.0, 1e-15);
  EXPECT_NEAR(mellin_symbol(MomentSequence::tm1(2), Complex(1.5, 0.0)).real(), std::log(2.0), 1e-14);
  EXPECT_THROW(mellin_symbol(MomentSequence::tm1(1), Complex(0.5, 0.0)), PoleError);
}

TEST(MomentSequence, FactorStructure) {
  EXPECT_EQ(MomentSequence::tm1(2).factors(), (std::vector<GammaFactor>{{4, 1}}));
  EXPECT_EQ(MomentSequence::tm4(1).factors(), (std::vector<GammaFactor>{{2, 1}, {1, 1}, {1, 1}}));
  EXPECT_DOUBLE_EQ(MomentSequence::tm4(2).total_multiplier(), 8.0);
  EXPECT_DOUBLE_EQ(MomentSequence::tm1(1).rightmost_pole(), 0.5);
  EXPECT_DOUBLE_EQ(MomentSequence::tm2(2).rightmost_pole(), 0.5);
  EXPECT_EQ(MomentSequence::tm3(2).pole_multiplicity(), 3);
  EXPECT_THROW(MomentSequence::tm1(0), DomainError);
}

TEST(ParseSequence, ToyModelsAndGammaProducts) {
  EXPECT_EQ(parse_sequence("tm1:r=2"), MomentSequence::tm1(2));
  EXPECT_EQ(parse_sequence(" tm4:r=1 "), MomentSequence::tm4(1));
  const auto g = parse_sequence("gamma:2n+1,n+1,n+1");
  EXPECT_EQ(g.kind(), SequenceKind::GammaProduct);
  for (int n = 0; n < 10; ++n)
    EXPECT_NEAR(log_moment(g, n), log_moment(MomentSequence::tm4(1), n), 1e-12);
  const auto h = parse_sequence("gamma:0.5n+0.5");
  EXPECT_NEAR(log_moment(h, 1), 0.0, 1e-15);
  EXPECT_EQ(describe(MomentSequence::tm3(4)), "tm3:r=4");
  EXPECT_EQ(parse_sequence(describe(g)), g);
}

TEST(ParseSequence, Rejects) {
  for (const char *bad : {"tm1", "tm5:r=2", "tm1:r=0", "tm1:r=x", "tm2:q=3", "gamma:", "gamma:n-1", "gamma:0n+1"})
    EXPECT_ANY_THROW(parse_sequence(bad)) << bad;
  EXPECT_THROW(parse_sequence("tm1:r=-2"), ParseError);
}
