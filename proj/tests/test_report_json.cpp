#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "report_json.hpp"

using namespace stieltjes;
using stieltjes::io::json;

namespace {

CriterionReport sample_report() {
  const auto seq = MomentSequence::tm1(1);
  CriteriaOptions opt;
  opt.n_max = 200;
  return full_report(seq, principal_solution(seq), opt);
}

} // namespace

TEST(ReportJson, CriterionReportRoundTrip) {
  for (const char *name : {"tm1:r=1", "tm2:r=2"}) {
    const auto seq = parse_sequence(name);
    CriteriaOptions opt;
    opt.n_max = 200;
    const auto rep = full_report(seq, principal_solution(seq), opt);
    const json written = io::to_json(rep);
    const auto back = io::criterion_report_from_json(json::parse(written.dump()));

    EXPECT_EQ(io::to_json(back), written) << name;
    EXPECT_EQ(back.sequence, rep.sequence);
    EXPECT_EQ(back.overall, rep.overall);
    EXPECT_EQ(back.c1.verdict, rep.c1.verdict);
    EXPECT_EQ(back.c1.terms, rep.c1.terms);
    EXPECT_EQ(back.c1.limit_n_an, rep.c1.limit_n_an);
    EXPECT_EQ(back.c2.verdict, rep.c2.verdict);
    EXPECT_EQ(back.c3.verdict, rep.c3.verdict);
    ASSERT_EQ(back.moment_checks.size(), rep.moment_checks.size());
    for (std::size_t i = 0; i < rep.moment_checks.size(); ++i) {
      EXPECT_EQ(back.moment_checks[i].log_integral, rep.moment_checks[i].log_integral);
      EXPECT_EQ(back.moment_checks[i].nodes_used, rep.moment_checks[i].nodes_used);
    }
  }
}

TEST(ReportJson, NonFiniteNumbersSurvive) {
  auto rep = sample_report();
  ASSERT_TRUE(std::isinf(rep.c2.integral_estimate));
  rep.c3.y_prime = std::numeric_limits<double>::quiet_NaN();
  const auto back = io::criterion_report_from_json(json::parse(io::to_json(rep).dump()));
  EXPECT_TRUE(std::isinf(back.c2.integral_estimate) && back.c2.integral_estimate > 0);
  EXPECT_TRUE(std::isnan(back.c3.y_prime));
}

TEST(ReportJson, SchemaFields) {
  const json j = io::to_json(sample_report());
  EXPECT_EQ(j.at("schema_version"), io::schema_version);
  EXPECT_EQ(j.at("kind"), "criterion_report");
  EXPECT_EQ(j.at("overall"), "Unique");
  EXPECT_TRUE(j.at("c1").at("terms").is_array());
  EXPECT_EQ(j.at("c1").at("terms").at(0).size(), 2u);

  const json g = io::to_json(find_gamma_max(3, 1), 3, 1);
  EXPECT_EQ(g.at("kind"), "gamma_bound");
  EXPECT_GT(g.at("gamma_max").get<double>(), 0.0);
}

TEST(ReportJson, RejectsBadDocuments) {
  json j = io::to_json(sample_report());
  j["schema_version"] = 99;
  EXPECT_THROW(io::criterion_report_from_json(j), ParseError);
  j = io::to_json(sample_report());
  j["overall"] = "Maybe";
  EXPECT_THROW(io::criterion_report_from_json(j), ParseError);
  j = io::to_json(sample_report());
  j["c2"]["integral_estimate"] = "lots";
  EXPECT_THROW(io::criterion_report_from_json(j), ParseError);
}
