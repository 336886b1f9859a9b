#include <gtest/gtest.h>

#include <cmath>

#include "copent/classic.hpp"
#include "copent/error.hpp"
#include "copent/rng.hpp"
#include "copent/synth.hpp"

using namespace copent;
using namespace copent::synth;

TEST(SplitMix64, ReferenceSequence) {
  // First outputs for seed 0 from the reference C implementation.
  SplitMix64 rng(0);
  EXPECT_EQ(rng.next(), 0xE220A8397B1DCDAFull);
  EXPECT_EQ(rng.next(), 0x6E789E6AA1B965F4ull);
  EXPECT_EQ(rng.next(), 0x06C45D188009454Full);
}

TEST(NormalQuantile, KnownPoints) {
  EXPECT_NEAR(normal_quantile(0.5), 0.0, 1e-12);
  EXPECT_NEAR(normal_quantile(0.975), 1.959963984540054, 1e-8);
  EXPECT_NEAR(normal_quantile(0.01), -2.326347874040841, 1e-8);
  EXPECT_NEAR(normal_quantile(1e-10), -6.361340902404056, 1e-7);
  EXPECT_THROW(normal_quantile(0.0), Error);
}

TEST(Generate, FixedSeedIsBitIdentical) {
  const SynthSpec spec{Blocks{{3, 2}, 0.7, 0.1}, 500, 99};
  EXPECT_TRUE(generate(spec) == generate(spec));
  const auto a = generate(spec), b = generate({Blocks{{3, 2}, 0.7, 0.1}, 500, 100});
  EXPECT_NE(a.column(0).values, b.column(0).values);
}

TEST(Generate, IndependentPairHasSmallCorrelation) {
  for (std::size_t n : {100u, 1000u, 10000u}) {
    const auto ds = generate({GaussianPair{0.0}, n, 3});
    EXPECT_LT(std::abs(pearson_r(ds.column(0).values, ds.column(1).values).value), 3.0 / std::sqrt(n));
  }
}

TEST(Generate, PairCorrelationConverges) {
  for (double rho : {-0.5, 0.3, 0.9}) {
    const auto ds = generate({GaussianPair{rho}, 50000, 4});
    EXPECT_NEAR(pearson_r(ds.column(0).values, ds.column(1).values).value, rho, 0.02);
  }
}

TEST(Generate, BlocksLayout) {
  const auto ds = generate({Blocks{{3, 3}, 0.9, 0.0}, 20000, 5});
  ASSERT_EQ(ds.n_cols(), 6u);
  EXPECT_EQ(ds.column(0).name, "G1_1");
  EXPECT_EQ(ds.column(5).name, "G2_3");
  auto r = [&](std::size_t i, std::size_t j) { return pearson_r(ds.column(i).values, ds.column(j).values).value; };
  EXPECT_NEAR(r(0, 2), 0.9, 0.02);
  EXPECT_NEAR(r(3, 4), 0.9, 0.02);
  EXPECT_NEAR(r(0, 3), 0.0, 0.03);
  const Matrix c = block_correlation({3, 3}, 0.9, 0.0);
  EXPECT_EQ(c(0, 1), 0.9);
  EXPECT_EQ(c(2, 3), 0.0);
  EXPECT_EQ(c(4, 4), 1.0);
}

TEST(Generate, NonlinearBlocksHideFromPearson) {
  const auto ds = generate({NonlinearBlocks{{3}, 0.1}, 20000, 6});
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = i + 1; j < 3; ++j)
      EXPECT_LT(std::abs(pearson_r(ds.column(i).values, ds.column(j).values).value), 0.05);
}

TEST(Generate, FunctionalKinds) {
  const auto cube = generate({Functional{Transform::cube, 0.0}, 100, 1});
  for (std::size_t r = 0; r < 100; ++r) {
    const double x = cube.column(0).values[r];
    EXPECT_EQ(cube.column(1).values[r], x * x * x);
  }
  const auto sine = generate({Functional{Transform::sin, 0.0}, 100, 1});
  for (double x : sine.column(0).values) {
    EXPECT_GE(x, -M_PI);
    EXPECT_LE(x, M_PI);
  }
  EXPECT_THROW(parse_transform("tan"), Error);
}

TEST(Generate, RejectsInvalidSpecs) {
  Matrix bad(2, 2, 1.5);
  bad(0, 0) = bad(1, 1) = 1.0;
  EXPECT_THROW(generate({GaussianMatrix{bad}, 10, 1}), Error);
  EXPECT_THROW(generate({GaussianPair{1.0}, 10, 1}), Error);
  EXPECT_THROW(generate({Blocks{{3, 1}, 0.5, 0.0}, 10, 1}), Error);
  // Negative between-group correlation across three groups is not PSD.
  EXPECT_THROW(generate({Blocks{{2, 2, 2}, 0.0, -0.9}, 10, 1}), Error);
}

TEST(Generate, SemiDefiniteCorrelationIsAccepted) {
  Matrix c(2, 2, 1.0);  // perfectly correlated, rank one
  const auto ds = generate({GaussianMatrix{c}, 50, 2});
  EXPECT_EQ(ds.column(0).values, ds.column(1).values);
}

TEST(ParseSpec, JsonForms) {
  const auto s = parse_spec(R"({"kind":"blocks","group_sizes":[4,2],"within_rho":0.8,"n_rows":30,"seed":5})");
  EXPECT_EQ(s.n_rows, 30u);
  EXPECT_EQ(s.seed, 5u);
  ASSERT_TRUE(std::holds_alternative<Blocks>(s.kind));
  EXPECT_EQ(std::get<Blocks>(s.kind).group_sizes, (std::vector<std::size_t>{4, 2}));
  EXPECT_EQ(generate(s).n_cols(), 6u);
  EXPECT_TRUE(std::holds_alternative<GaussianMatrix>(
      parse_spec(R"({"kind":"gaussian_matrix","correlation":[[1,0.2],[0.2,1]]})").kind));
  EXPECT_THROW(parse_spec(R"({"kind":"clayton"})"), Error);
  EXPECT_THROW(parse_spec("not json"), Error);
}
