#include "chamberwalk/detlab.hpp"
#include "chamberwalk/presets.hpp"
#include "brute_force.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace chamberwalk;

namespace {

Rational residual_of(const IdentityReport& r) { return std::get<Rational>(r.residual); }
double float_residual(const IdentityReport& r) { return std::get<double>(r.residual); }

}  // namespace

TEST(DetExact, Examples) {
  EXPECT_EQ(det_exact(ExactMatrix({{1, 2}, {3, 4}})), -2);
  EXPECT_EQ(det_exact(ExactMatrix({{1, 1, 1}, {1, 2, 3}, {1, 4, 9}})), 2);
  EXPECT_EQ(det_exact(ExactMatrix({{1, 1}, {1, 1}})), 0);
  EXPECT_EQ(det_exact(ExactMatrix({{0, 1}, {1, 0}})), -1);
  EXPECT_THROW(ExactMatrix({{1, 2}, {3}}), DomainError);
}

TEST(DetExact, MatchesCofactorExpansion) {
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<long> num(-7, 7), den(1, 5);
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t k = 1 + static_cast<std::size_t>(trial % 4);
    std::vector<std::vector<Rational>> rows(k, std::vector<Rational>(k));
    for (auto& row : rows)
      for (auto& x : row) x = trial % 5 == 0 ? Rational(num(rng)) : ratio(num(rng), den(rng));
    EXPECT_EQ(det_exact(ExactMatrix(rows)), brute::cofactor_det(rows));
  }
}

TEST(TypeCDet, Examples) {
  auto r = check_typeC_det_identity({2}, false);
  EXPECT_TRUE(r.pass);
  EXPECT_EQ(r.details["lhs"], "3/2");
  r = check_typeC_det_identity({2, 3}, false);
  EXPECT_TRUE(r.pass);
  EXPECT_EQ(r.details["lhs"], "10/3");
  EXPECT_EQ(residual_of(r), 0);
  r = check_typeC_det_identity({2}, true);
  EXPECT_TRUE(r.pass);
  EXPECT_EQ(r.details["rhs"], "3/2");
}

TEST(TypeCDet, DegenerateIsTrivialPass) {
  const auto r = check_typeC_det_identity({2, 2}, false);
  EXPECT_TRUE(r.pass);
  EXPECT_FALSE(r.note.empty());
  EXPECT_TRUE(check_typeC_det_identity({3, -3}, true).pass);
  EXPECT_THROW(check_typeC_det_identity({0, 2}, false), DomainError);
}

TEST(Schur, Examples) {
  auto r = schur_orthogonal_identity_check({2}, 1);
  EXPECT_TRUE(r.pass);
  EXPECT_EQ(r.details["lhs"], "21");
  r = schur_orthogonal_identity_check({2, 3}, 0);
  EXPECT_TRUE(r.pass);
  EXPECT_EQ(r.details["lhs"], "1");
  EXPECT_TRUE(schur_orthogonal_identity_check({2, 3}, 1).pass);
  EXPECT_THROW(schur_orthogonal_identity_check({2, -2}, 1), DomainError);
  EXPECT_THROW(schur_orthogonal_identity_check({2, Rational(1, 2)}, 1), DomainError);
}

TEST(Quotient, Examples) {
  auto r = quotient_identity_check({2});
  EXPECT_TRUE(r.pass);
  EXPECT_EQ(r.details["lhs"], "2/3");
  EXPECT_TRUE(quotient_identity_check({2, 3}).pass);
  EXPECT_TRUE(quotient_identity_check({Rational(2, 3), Rational(-5, 4), 7}).pass);
  EXPECT_THROW(quotient_identity_check({1, 2}), DomainError);
  EXPECT_THROW(quotient_identity_check({2, Rational(1, 2)}), DomainError);
}

TEST(MixedVandermonde, Examples) {
  EXPECT_EQ(mixed_vandermonde_det({1, 2, 3}, 0), 2);
  EXPECT_EQ(mixed_vandermonde_det({1, 2}, 1), -2);
  EXPECT_THROW(mixed_vandermonde_det({2, 1}, 0), DomainError);
  EXPECT_THROW(mixed_vandermonde_det({1, 2}, 3), DomainError);
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<long> step(1, 9);
  for (std::size_t k = 1; k <= 4; ++k) {
    std::vector<Rational> u;
    Rational x = 0;
    for (std::size_t j = 0; j < k; ++j) u.push_back(x += ratio(step(rng), 3));
    EXPECT_TRUE(mixed_vandermonde_check(u, k).pass);
  }
}

TEST(Dsin, Examples) {
  const auto r = dsin_leading_ratio({1}, {1.0}, 0.1);
  EXPECT_NEAR(r.details["ratio"].get<double>(), std::sin(0.1) / 0.1, 1e-15);
  EXPECT_NEAR(float_residual(r), -1.66583e-3, 1e-8);
  EXPECT_EQ(*r.sign, 1);
  const auto a = dsin_leading_ratio({1, 2}, {1.0, 2.0}, 0.1);
  const auto b = dsin_leading_ratio({1, 2}, {1.0, 2.0}, 0.05);
  EXPECT_NEAR(1.0 / halving_factor(a, b), 0.25, 0.02);
  EXPECT_THROW(dsin_leading_ratio({1, 2}, {1.0, -1.0}, 0.1), DomainError);
  EXPECT_THROW(dsin_leading_ratio({1}, {1.0}, 0.5), DomainError);
}

TEST(Dsin, SignMatchesProofNormalization) {
  for (std::size_t k = 1; k <= 4; ++k) {
    std::vector<long> u;
    std::vector<double> dir;
    for (std::size_t j = 1; j <= k; ++j) {
      u.push_back(static_cast<long>(2 * j - 1));
      dir.push_back(0.5 + static_cast<double>(j));
    }
    EXPECT_EQ(*dsin_leading_ratio(u, dir, 0.01).sign, 1) << "k=" << k;
  }
}

TEST(GaussianKernel, Examples) {
  EXPECT_NEAR(std::get<double>(gaussian_kernel_det_ratio(1, 0.01).residual), 0.0, 1e-3);
  // The kernel is 2 e^{-x^2-y^2} sinh(2xy), so the ratio carries the factor
  // e^{-sum(x_j^2 + y_j^2)} = e^{-0.025} at k=2, eps=0.05; the sinh series
  // adds a smaller positive correction.
  const auto r = gaussian_kernel_det_ratio(2, 0.05);
  EXPECT_NEAR(float_residual(r), std::expm1(-0.025), 1e-3);
  EXPECT_GT(float_residual(r), std::expm1(-0.025));
  for (std::size_t k = 1; k <= 3; ++k) {
    const double f = halving_factor(gaussian_kernel_det_ratio(k, 0.05), gaussian_kernel_det_ratio(k, 0.025));
    EXPECT_GE(f, 3.0);
    EXPECT_LE(f, 5.0);
  }
}

TEST(GaussianKernel, DoublePrecisionLosesK3) {
  // In double the k=3 determinant at eps=0.0125 is dominated by rounding.
  const double hp = float_residual(gaussian_kernel_det_ratio(3, 0.0125));
  const double dp = float_residual(gaussian_kernel_det_ratio<double>(3, 0.0125));
  EXPECT_NEAR(hp, -4.365e-3, 1e-5);
  EXPECT_GT(std::fabs(dp - hp), 1.0);
}

TEST(SignIdentity, LatticePoints) {
  const auto r = sign_identity_check({1, 3}, {-1, 1}, {0.2, -0.3});
  EXPECT_TRUE(r.pass);
  EXPECT_EQ(*r.sign, -1);
  // mixed parities break the row factorization for a partial flip
  EXPECT_FALSE(sign_identity_check({1, 2}, {-1, 1}, {0.2, -0.3}).pass);
  EXPECT_TRUE(sign_identity_check({1, 2}, {-1, -1}, {0.2, -0.3}).pass);
}

TEST(Selberg, ClosedForms) {
  EXPECT_NEAR(selberg_closed_form(1, SelbergWeight::Laguerre), std::sqrt(std::numbers::pi) / 2, 1e-15);
  EXPECT_NEAR(selberg_closed_form(1, SelbergWeight::Hermite), std::sqrt(2 * std::numbers::pi), 1e-15);
  EXPECT_NEAR(selberg_closed_form(2, SelbergWeight::Laguerre), 3 * std::numbers::pi / 8, 1e-14);
  EXPECT_NEAR(selberg_closed_form(2, SelbergWeight::Hermite), 4 * std::numbers::pi, 1e-13);
}

TEST(Selberg, MonteCarloLaguerreIsFullSpaceIntegral) {
  // Sampling iid Exp(1) coordinates integrates over all of [0, inf)^k, which
  // is k! times the ordered-region value pi^{k/2} 2^{-k^2} prod (2j-1)!.
  const auto r = selberg_mc_check(2, SelbergWeight::Laguerre, SelbergQuantity::One, 1'000'000, 7);
  const double estimate = r.details["estimate"].get<double>();
  const double se = r.details["standard_error"].get<double>();
  EXPECT_NEAR(estimate, 2 * selberg_closed_form(2, SelbergWeight::Laguerre), 3 * se);
  EXPECT_NEAR(estimate, 3 * std::numbers::pi / 4, 3 * se);
}

TEST(Selberg, MonteCarloOtherTargets) {
  EXPECT_TRUE(selberg_mc_check(1, SelbergWeight::Laguerre, SelbergQuantity::One, 200'000, 1).pass);
  EXPECT_TRUE(selberg_mc_check(2, SelbergWeight::Laguerre, SelbergQuantity::Aomoto, 200'000, 1).pass);
  EXPECT_TRUE(selberg_mc_check(2, SelbergWeight::Hermite, SelbergQuantity::One, 200'000, 1).pass);
  EXPECT_TRUE(selberg_mc_check(2, SelbergWeight::Hermite, SelbergQuantity::Aomoto, 200'000, 1).pass);
}

TEST(Selberg, Determinism) {
  const auto a = selberg_mc_check(2, SelbergWeight::Hermite, SelbergQuantity::Aomoto, 100'000, 42);
  const auto b = selberg_mc_check(2, SelbergWeight::Hermite, SelbergQuantity::Aomoto, 100'000, 42);
  EXPECT_EQ(to_json(a).dump(), to_json(b).dump());
  EXPECT_THROW(selberg_mc_check(4, SelbergWeight::Hermite, SelbergQuantity::One, 100'000, 1), DomainError);
  EXPECT_THROW(selberg_mc_check(2, SelbergWeight::Hermite, SelbergQuantity::One, 1000, 1), DomainError);
}

TEST(IdentityReport, Json) {
  const auto j = to_json(check_typeC_det_identity({2, 3}, false));
  EXPECT_EQ(j["identity"], "typeC_det");
  EXPECT_EQ(j["residual"], "0");
  EXPECT_EQ(j["pass"], true);
  EXPECT_FALSE(j.contains("sign"));
  const auto f = to_json(dsin_leading_ratio({1}, {1.0}, 0.1));
  EXPECT_TRUE(f["residual"].is_number_float());
  EXPECT_EQ(f["sign"], 1);
}
