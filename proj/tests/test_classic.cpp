#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "copent/classic.hpp"
#include "copent/error.hpp"
#include "oracles.hpp"

using namespace copent;

using V = std::vector<double>;

TEST(Pearson, HandExamples) {
  EXPECT_EQ(pearson_r(V{1, 2, 3}, V{2, 4, 6}).value, 1.0);
  EXPECT_EQ(pearson_r(V{1, 2, 3}, V{3, 2, 1}).value, -1.0);
  EXPECT_EQ(pearson_r(V{1, 2, 3}, V{1, 0, 1}).value, 0.0);
}

TEST(Pearson, Errors) {
  EXPECT_THROW(pearson_r(V{1, 2, 3}, V{1, 2}), Error);
  EXPECT_THROW(pearson_r(V{1, 1, 1}, V{1, 2, 3}), Error);
  EXPECT_THROW(pearson_r(V{1}, V{1}), Error);
}

TEST(Spearman, HandExamples) {
  EXPECT_DOUBLE_EQ(spearman_rho(V{1, 2, 3}, V{1, 3, 2}).value, 0.5);
  EXPECT_EQ(spearman_rho(V{1, 2, 3, 4}, V{4, 3, 2, 1}).value, -1.0);
  EXPECT_EQ(spearman_rho(V{0.1, 2, 3, 9}, V{std::exp(0.1), std::exp(2), std::exp(3), std::exp(9)}).value, 1.0);
  EXPECT_THROW(spearman_rho(V{2, 2}, V{1, 2}), Error);
}

TEST(Kendall, HandExamples) {
  EXPECT_DOUBLE_EQ(kendall_tau(V{1, 2, 3}, V{1, 3, 2}).value, 1.0 / 3.0);
  EXPECT_EQ(kendall_tau(V{4, 1, 7, 2}, V{4, 1, 7, 2}).value, 1.0);
  EXPECT_EQ(kendall_tau(V{1, 1, 2, 2}, V{1, 2, 1, 2}).value, 0.0);
  EXPECT_THROW(kendall_tau(V{3, 3, 3}, V{1, 2, 3}), Error);
  EXPECT_THROW(kendall_tau(V{1, 2}, V{1, 2, 3}), Error);
}

TEST(Kendall, MergeSortMatchesPairEnumeration) {
  std::mt19937_64 gen(31);
  std::uniform_int_distribution<std::size_t> len(2, 200);
  std::uniform_int_distribution<int> levels(2, 30);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = len(gen);
    std::uniform_int_distribution<int> vx(0, levels(gen)), vy(0, levels(gen));
    V x(n), y(n);
    for (std::size_t i = 0; i < n; ++i) {
      x[i] = vx(gen);
      y[i] = trial % 3 == 0 ? x[i] + vy(gen) : vy(gen);
    }
    const auto fast = kendall_counts(x, y);
    const auto slow = oracle::kendall_enumerate(x, y);
    ASSERT_EQ(fast.score, slow.concordant - slow.discordant);
    ASSERT_EQ(fast.x_ties, slow.x_ties);
    ASSERT_EQ(fast.y_ties, slow.y_ties);
    if (slow.x_ties == slow.pairs || slow.y_ties == slow.pairs) continue;
    const double expected = (slow.concordant - slow.discordant) /
                            std::sqrt(static_cast<double>(slow.pairs - slow.x_ties) *
                                      static_cast<double>(slow.pairs - slow.y_ties));
    ASSERT_EQ(kendall_tau(x, y).value, expected);
  }
}

TEST(Properties, RankMeasuresInvariantUnderIncreasingMaps) {
  std::mt19937_64 gen(32);
  std::normal_distribution<double> z;
  for (int trial = 0; trial < 50; ++trial) {
    V x(80), y(80), gx(80), gy(80);
    for (std::size_t i = 0; i < x.size(); ++i) {
      x[i] = z(gen);
      y[i] = x[i] + z(gen);
      gx[i] = x[i] * x[i] * x[i];
      gy[i] = std::exp(y[i]);
    }
    EXPECT_EQ(spearman_rho(x, y).value, spearman_rho(gx, gy).value);
    EXPECT_EQ(kendall_tau(x, y).value, kendall_tau(gx, gy).value);
  }
}

TEST(Properties, SymmetryAndNegation) {
  std::mt19937_64 gen(33);
  std::normal_distribution<double> z;
  for (int trial = 0; trial < 50; ++trial) {
    V x(60), y(60), ny(60);
    for (std::size_t i = 0; i < x.size(); ++i) {
      x[i] = z(gen);
      y[i] = 0.5 * x[i] + z(gen);
      ny[i] = -y[i];
    }
    for (Measure m : {Measure::pearson, Measure::spearman, Measure::kendall}) {
      EXPECT_NEAR(pair_statistic(m, x, y).value, pair_statistic(m, y, x).value, 1e-12);
      EXPECT_NEAR(pair_statistic(m, x, ny).value, -pair_statistic(m, x, y).value, 1e-12);
    }
  }
}

TEST(Properties, TwoDistinctPointsGiveUnitMagnitude) {
  for (Measure m : {Measure::pearson, Measure::spearman, Measure::kendall}) {
    EXPECT_EQ(pair_statistic(m, V{1, 2}, V{5, 9}).value, 1.0);
    EXPECT_EQ(pair_statistic(m, V{1, 2}, V{9, 5}).value, -1.0);
  }
}

// The rank estimators converge to the copula-integral definitions: check on
// the FGM copula, whose integrals are also evaluated by midpoint quadrature.
TEST(CopulaIntegrals, RankMeasuresConvergeToIntegralForms) {
  const double theta = 0.8;
  auto [rho_int, tau_int] = oracle::copula_integrals(
      [&](double u, double v) { return oracle::fgm_cdf(u, v, theta); },
      [&](double u, double v) { return oracle::fgm_density(u, v, theta); }, 40);
  EXPECT_NEAR(rho_int, theta / 3, 1e-3);
  EXPECT_NEAR(tau_int, 2 * theta / 9, 1e-3);

  std::mt19937_64 gen(34);
  const std::size_t n = 20000;
  V u(n), v(n);
  for (std::size_t i = 0; i < n; ++i) std::tie(u[i], v[i]) = oracle::fgm_sample(gen, theta);
  EXPECT_NEAR(spearman_rho(u, v).value, rho_int, 0.02);
  EXPECT_NEAR(kendall_tau(u, v).value, tau_int, 0.02);
}

TEST(Measure, ParseAndPrint) {
  for (Measure m : {Measure::pearson, Measure::spearman, Measure::kendall, Measure::ce})
    EXPECT_EQ(parse_measure(to_string(m)), m);
  EXPECT_THROW(parse_measure("mic"), Error);
}
