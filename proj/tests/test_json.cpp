#include "chamberwalk/json_io.hpp"
#include "chamberwalk/verify.hpp"

#include <gtest/gtest.h>

#include <sstream>

using namespace chamberwalk;

TEST(Json, SpecRoundTrip) {
  const CompositeSpec spec(AtomicKind::Diagonal, 3, {Rational(1, 3), 0, 2});
  const auto j = to_json(spec);
  EXPECT_EQ(j.dump(), R"({"k":3,"kind":"diagonal","weights":["1/3","0","2"]})");
  EXPECT_EQ(spec_from_json(j), spec);
  EXPECT_EQ(spec_from_json(nlohmann::json::parse(R"({"kind":"axis","k":2,"weights":[0,"1",1]})")),
            CompositeSpec(AtomicKind::Axis, 2, {0, 1, 1}));
  EXPECT_THROW(spec_from_json(nlohmann::json::parse(R"({"kind":"axis","weights":[0,1]})")), DomainError);
  EXPECT_THROW(spec_from_json(nlohmann::json::parse(R"({"kind":"axis","k":-1,"weights":[0,1]})")), DomainError);
}

TEST(Json, ExactValuesAreStrings) {
  const CompositeSpec spec(AtomicKind::Axis, 1, {1, 1, 1});
  const auto report = compare_series(spec, ChamberPoint({1}), ChamberPoint({1}), {10, 20, 30, 40});
  const auto j = to_json(report);
  ASSERT_EQ(j["rows"].size(), report.rows.size());
  for (std::size_t i = 0; i < report.rows.size(); ++i) {
    ASSERT_TRUE(j["rows"][i]["exact"].is_string());
    EXPECT_EQ(parse_rational(j["rows"][i]["exact"].get<std::string>()), report.rows[i].exact);
  }
}

TEST(Json, BigCountsRoundTrip) {
  const Rational big = pow(Rational(7, 3), 200);
  EXPECT_EQ(parse_rational(to_string(big)), big);
}

TEST(Json, EstimateOmitsValueWhenUnsupportedOrHuge) {
  AsymptoticEstimate e;
  EXPECT_FALSE(to_json(e).contains("log_value"));
  e.supported = true;
  e.log_value = 1000.0;
  const auto j = to_json(e);
  EXPECT_TRUE(j.contains("log10_value"));
  EXPECT_FALSE(j.contains("value"));
}

TEST(Csv, QuotedCounts) {
  const CompositeSpec spec(AtomicKind::Diagonal, 1, {0, 1});
  const auto report = compare_series(spec, ChamberPoint({1}), ChamberPoint({1}), {16, 32, 48});
  std::ostringstream os;
  write_csv(os, report);
  const std::string text = os.str();
  EXPECT_EQ(text.rfind("n,exact,exact_log,asym_log,ratio,residual\n", 0), 0u);
  EXPECT_NE(text.find("16,\"1430\","), std::string::npos);
  EXPECT_EQ(csv_quote("a\"b"), "\"a\"\"b\"");
}

TEST(Suites, DeterministicForSeed) {
  EXPECT_EQ(to_json(suite_det(9)).dump(), to_json(suite_det(9)).dump());
  EXPECT_TRUE(suite_det(9).pass());
  EXPECT_TRUE(suite_schur(9).pass());
  EXPECT_TRUE(suite_signs(9).pass());
  EXPECT_THROW(run_suite("nope", 1), DomainError);
}
