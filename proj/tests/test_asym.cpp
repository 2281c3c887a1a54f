#include "chamberwalk/asym.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

using namespace chamberwalk;

namespace {

CompositeSpec lock_step(std::size_t k) { return CompositeSpec(AtomicKind::Diagonal, k, {0, 1}); }
CompositeSpec tangled(std::size_t k) { return CompositeSpec(AtomicKind::Axis, k, {1, 1, 1}); }
ChamberPoint pt(Coords c) { return ChamberPoint(std::move(c)); }

ConvergenceReport synthetic(double c, double power) {
  ConvergenceReport r;
  for (std::size_t n : {10u, 20u, 40u, 80u, 160u}) {
    ConvergenceRow row;
    row.n = n;
    row.residual = c * std::pow(static_cast<double>(n), power);
    r.rows.push_back(row);
  }
  return r;
}

}  // namespace

TEST(Support, ParityRules) {
  EXPECT_FALSE(support_positive(lock_step(1), pt({1}), pt({1}), 3));
  EXPECT_TRUE(support_positive(lock_step(1), pt({1}), pt({1}), 4));
  EXPECT_TRUE(support_positive(tangled(2), pt({1, 2}), pt({1, 2}), 5));
  const CompositeSpec turns(AtomicKind::Axis, 2, {0, 1});
  EXPECT_TRUE(support_positive(turns, pt({1, 2}), pt({1, 3}), 1));
  EXPECT_FALSE(support_positive(turns, pt({1, 2}), pt({1, 3}), 2));
}

TEST(AsymFixed, LockStepSixteen) {
  const auto est = asym_fixed(lock_step(1), pt({1}), pt({1}), 16);
  ASSERT_TRUE(est.supported);
  const double expected = std::pow(2.0, 17) * std::sqrt(2.0 / std::numbers::pi) * std::pow(16.0, -1.5);
  EXPECT_NEAR(std::exp(est.log_value), expected, 1e-9 * expected);
  EXPECT_NEAR(std::exp(est.log_value), 1634.0676, 1e-3);
  EXPECT_EQ(est.n_power, Rational(-3, 2));
  EXPECT_NEAR(1430.0 / std::exp(est.log_value), 0.875, 1e-3);
}

TEST(AsymFixed, UnsupportedLength) {
  const auto est = asym_fixed(lock_step(1), pt({1}), pt({1}), 15);
  EXPECT_FALSE(est.supported);
  EXPECT_TRUE(std::isnan(est.log_value));
}

TEST(AsymFixed, Errors) {
  EXPECT_THROW(asym_fixed(lock_step(1), pt({1}), pt({1}), 0), DomainError);
  EXPECT_THROW(asym_free(lock_step(1), pt({1}), 0), DomainError);
  EXPECT_THROW(asym_fixed(lock_step(2), pt({1, 2}), pt({1, 3}), 4), DomainError);
}

TEST(AsymFixed, SymmetricInEndpoints) {
  const CompositeSpec spec = tangled(3);
  const auto a = asym_fixed(spec, pt({1, 2, 5}), pt({2, 3, 4}), 77);
  const auto b = asym_fixed(spec, pt({2, 3, 4}), pt({1, 2, 5}), 77);
  EXPECT_DOUBLE_EQ(a.log_value, b.log_value);
}

TEST(AsymFixed, CorrectionIsOptIn) {
  const auto off = asym_fixed(tangled(2), pt({1, 2}), pt({1, 2}), 50);
  const auto on = asym_fixed(tangled(2), pt({1, 2}), pt({1, 2}), 50, true);
  EXPECT_FALSE(off.correction_applied);
  EXPECT_TRUE(on.correction_applied);
  EXPECT_NEAR(on.log_value - off.log_value, std::log1p(1.0 / (50.0 * 6.0 / 7.0)), 1e-12);
}

TEST(AsymFree, LockStepMatchesCentralBinomial) {
  for (std::size_t n : {10u, 101u, 1000u}) {
    const auto est = asym_free(lock_step(1), pt({1}), n);
    const double nd = static_cast<double>(n);
    EXPECT_NEAR(est.log_value, nd * std::log(2.0) + 0.5 * std::log(2.0 / (std::numbers::pi * nd)), 1e-9);
    EXPECT_EQ(est.n_power, Rational(-1, 2));
  }
}

TEST(Fit, SyntheticSlopes) {
  EXPECT_NEAR(fit_decay(synthetic(0.3, -1.0)), -1.0, 1e-12);
  EXPECT_NEAR(fit_decay(synthetic(-2.0, -5.0 / 3.0)), -5.0 / 3.0, 1e-12);
  ConvergenceReport two = synthetic(1, -1);
  two.rows.resize(2);
  EXPECT_THROW(fit_decay(two), DiagnosticError);
}

TEST(Fit, SecondOrderCoefficient) {
  ConvergenceReport r;
  for (std::size_t n : {64u, 128u, 256u, 512u}) {
    ConvergenceRow row;
    row.n = n;
    row.residual = -2.25 / static_cast<double>(n) + 3.0 / (static_cast<double>(n) * static_cast<double>(n));
    r.rows.push_back(row);
  }
  EXPECT_NEAR(second_order_coefficient(r, 64), -2.25, 1e-12);
}

TEST(Compare, LockStepResidualsHalve) {
  const auto report = compare_series(lock_step(1), pt({1}), pt({1}), {16, 32, 64, 128});
  ASSERT_EQ(report.rows.size(), 4u);
  for (std::size_t i = 0; i < report.rows.size(); ++i) {
    EXPECT_LT(report.rows[i].residual, 0);
    if (i > 0) EXPECT_NEAR(report.rows[i - 1].residual / report.rows[i].residual, 2.0, 0.25);
  }
  EXPECT_EQ(report.rows[0].exact, 1430);
  EXPECT_NEAR(report.fitted_slope, -1.0, 0.3);
}

TEST(Compare, FiltersUnsupportedAndNeedsThreePoints) {
  EXPECT_THROW(compare_series(lock_step(1), pt({1}), pt({1}), {15, 16, 17, 18}), DiagnosticError);
  const auto r = compare_series(lock_step(1), pt({1}), pt({1}), {15, 16, 17, 18, 19, 20});
  EXPECT_EQ(r.rows.size(), 3u);
}

TEST(Compare, FreeEndpoint) {
  const auto report = compare_series(lock_step(1), pt({1}), std::nullopt, {16, 32, 64, 128, 256});
  EXPECT_NEAR(report.fitted_slope, -1.0, 0.2);
  for (const auto& row : report.rows) EXPECT_NEAR(row.residual * static_cast<double>(row.n), -0.25, 0.05);
}
