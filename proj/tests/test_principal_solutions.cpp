#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "stieltjes/principal_solutions.hpp"

using namespace stieltjes;

namespace {
double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }
} // namespace

TEST(W1, ClosedForm) {
  // q = 2: W1(x) = exp(-sqrt x) / (2 sqrt x) solves (2n)!
  for (double x : {1e-3, 1.0, 50.0})
    EXPECT_LT(rel(w1(2.0, x), 0.5 * std::exp(-std::sqrt(x)) / std::sqrt(x)), 1e-14) << x;
  EXPECT_NEAR(log_w1(4.0, 1e8), -100.0 - std::log(4.0) - 0.75 * std::log(1e8), 1e-10);
  EXPECT_THROW(w1(2.0, 0.0), DomainError);
}

TEST(W2, ClosedForm) {
  for (double x : {1e-4, 0.3, 2.0, 40.0})
    EXPECT_LT(rel(w2(1, x), 2.0 * bessel_k0(2.0 * std::sqrt(x))), 1e-13) << x;
  EXPECT_NEAR(log_w2(3, 1e12), std::log(w2(3, 1e12)), 1e-12);
  EXPECT_TRUE(std::isfinite(log_w2(1, 1e300)));
}

TEST(W3, AgainstMeijerG) {
  EXPECT_LT(rel(w3(1, 0.01), 6.3841973834420734), 1e-10);
  EXPECT_LT(rel(w3(1, 1.0), 0.16404160674837607), 1e-12);
  EXPECT_LT(rel(w3(1, 10.0), 0.0025030566951819922), 1e-12);
}

TEST(W3, LogFormFarInTheTail) {
  const double a = log_w3(1, 1e6), b = log_w3(1, 1e9);
  EXPECT_TRUE(std::isfinite(a));
  EXPECT_LT(b, a);
  // log W3 ~ -3 x^{1/3}
  EXPECT_NEAR(b / (-3.0 * std::cbrt(1e9)), 1.0, 0.01);
}

TEST(W4, AgainstMeijerG) {
  EXPECT_LT(rel(w4(1, 0.1), 1.2972663675440976), 1e-10);
  EXPECT_LT(rel(w4(1, 1.0), 0.12293692982559143), 1e-12);
  EXPECT_LT(rel(w4(1, 10.0), 0.0044076189007667027), 1e-12);
}

TEST(W4, ContourAgreesWithConvolution) {
  for (int r : {1, 2})
    for (double x : {0.05, 0.7, 3.0, 25.0})
      EXPECT_LT(rel(w4(r, x), w4_by_convolution(r, x)), 1e-7) << r << " " << x;
}

TEST(W4, SmallArgumentsStayPositive) {
  for (double x : {1e-6, 1e-12, 1e-30})
    EXPECT_TRUE(std::isfinite(log_w4(1, x))) << x;
  EXPECT_GT(log_w4(1, 1e-12), log_w4(1, 1e-6));
}

TEST(PrincipalSolution, Dispatch) {
  EXPECT_EQ(principal_solution(MomentSequence::tm1(2)).representation(), Representation::ClosedForm);
  EXPECT_EQ(principal_solution(MomentSequence::tm2(1)).representation(), Representation::ClosedForm);
  EXPECT_EQ(principal_solution(MomentSequence::tm3(1)).representation(), Representation::MellinBarnes);
  EXPECT_EQ(principal_solution(MomentSequence::tm4(1)).representation(), Representation::MellinBarnes);
  const auto w = principal_solution(MomentSequence::tm2(2));
  EXPECT_NEAR(w.evaluate(2.0), w2(2, 2.0), 1e-15);
  const auto g = principal_solution(parse_sequence("gamma:n+1,n+1,n+1"));
  EXPECT_LT(rel(g.evaluate(1.0), w3(1, 1.0)), 1e-12);
}

TEST(PrincipalSolution, EndpointLaws) {
  const auto seq = MomentSequence::tm4(2);
  const auto growth = principal_growth(seq);
  EXPECT_NEAR(growth.p, 1.0 / 8.0, 1e-15);
  EXPECT_DOUBLE_EQ(principal_alpha0(MomentSequence::tm1(1)), -0.5);
}
