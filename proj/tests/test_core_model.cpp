#include <gtest/gtest.h>

#include <algorithm>

#include "mhlog/core_model.hpp"
#include "mhlog/rng.hpp"

using namespace mhlog;

TEST(ValidateParams, DefaultsPassWithoutWarnings) {
  const auto v = validate_params(SimParams{}, CostParams{});
  EXPECT_TRUE(v.warnings.empty());
  EXPECT_DOUBLE_EQ(v.sim.lambda_f, 0.001);
  EXPECT_DOUBLE_EQ(v.sim.lambda_w, 0.5);
  EXPECT_DOUBLE_EQ(v.sim.mu, 0.01);
  EXPECT_DOUBLE_EQ(v.sim.T_c, 100.0);
}

TEST(ValidateParams, ZeroMuIsNamed) {
  SimParams sp;
  sp.mu = 0.0;
  try {
    validate_params(sp, CostParams{});
    FAIL() << "expected ValidationError";
  } catch (const ValidationError& e) {
    ASSERT_EQ(e.violations().size(), 1u);
    EXPECT_EQ(e.violations()[0], "mu must be > 0");
  }
}

TEST(ValidateParams, FailureRateAboveMobilityWarns) {
  SimParams sp;
  sp.lambda_f = 0.02;
  sp.mu = 0.01;
  const auto v = validate_params(sp, CostParams{});
  ASSERT_EQ(v.warnings.size(), 1u);
  EXPECT_EQ(v.warnings[0], "single-failure assumption stressed");
}

TEST(ValidateParams, CollectsEveryViolation) {
  SimParams sp;
  sp.lambda_w = -1;
  sp.T_c = 0;
  sp.cache_capacity = 0;
  CostParams cp;
  cp.C_1 = -2;
  try {
    validate_params(sp, cp);
    FAIL();
  } catch (const ValidationError& e) {
    EXPECT_GE(e.violations().size(), 4u);
  }
}

TEST(ValidateParams, TotalOverRandomInputs) {
  SplitMix64 rng(7);
  for (int i = 0; i < 2000; ++i) {
    SimParams sp;
    CostParams cp;
    auto pick = [&] { return (rng.uniform01() - 0.3) * 10.0; };
    sp.lambda_f = pick();
    sp.lambda_w = pick();
    sp.mu = pick();
    sp.T_c = pick();
    cp.C_1 = pick();
    cp.C_c = pick();
    cp.r = pick();
    sp.cache_capacity = static_cast<std::uint32_t>(rng.below(3));
    try {
      validate_params(sp, cp);
    } catch (const ValidationError& e) {
      EXPECT_FALSE(e.violations().empty());
    }
  }
}

TEST(DeriveQuantities, HandEvaluatedCases) {
  SimParams sp;
  sp.lambda_w = 0.05;
  sp.T_c = 100;
  auto d = derive_quantities(sp, 10000);
  EXPECT_DOUBLE_EQ(d.k_expected, 5.0);
  EXPECT_DOUBLE_EQ(d.eta, 2.0);
  EXPECT_DOUBLE_EQ(d.N_c, 100.0);
  EXPECT_DOUBLE_EQ(d.N_l, 500.0);

  sp.lambda_w = 0.2;
  d = derive_quantities(sp, 1000);
  EXPECT_DOUBLE_EQ(d.k_expected, 20.0);
  EXPECT_DOUBLE_EQ(d.eta, 9.5);
  EXPECT_DOUBLE_EQ(d.N_c, 10.0);
  EXPECT_DOUBLE_EQ(d.N_l, 200.0);
}

TEST(DeriveQuantities, EtaClampsAtOneWriteAndBelow) {
  SimParams sp;
  sp.T_c = 100;
  sp.lambda_w = 0.01;
  EXPECT_DOUBLE_EQ(derive_quantities(sp, 100).eta, 0.0);
  sp.lambda_w = 0.001;
  EXPECT_DOUBLE_EQ(derive_quantities(sp, 100).eta, 0.0);
}

TEST(DeriveQuantities, EtaMonotoneInWriteRate) {
  SimParams sp;
  double prev = -1.0;
  for (double lw = 0.001; lw < 2.0; lw *= 1.3) {
    sp.lambda_w = lw;
    const double eta = derive_quantities(sp, 1000).eta;
    EXPECT_GE(eta, prev);
    prev = eta;
  }
}

TEST(Exponential, InverseTransformPoints) {
  EXPECT_DOUBLE_EQ(exponential_from_uniform(2.0, 1.0), 0.0);
  EXPECT_NEAR(exponential_from_uniform(1.0, std::exp(-1.0)), 1.0, 1e-15);
  EXPECT_THROW(exponential_from_uniform(0.0, 0.5), std::invalid_argument);
  SplitMix64 rng(1);
  EXPECT_THROW(sample_exponential(-1.0, rng), std::invalid_argument);
}

TEST(Exponential, SampleMeanMatchesRate) {
  SplitMix64 rng(99);
  double sum = 0.0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) sum += sample_exponential(0.01, rng);
  EXPECT_NEAR(sum / n, 100.0, 2.0);
}

TEST(SplitMix64, UniformInHalfOpenUnitInterval) {
  SplitMix64 rng(0);
  for (int i = 0; i < 10000; ++i) {
    const double u = rng.uniform01();
    ASSERT_GT(u, 0.0);
    ASSERT_LE(u, 1.0);
  }
}

TEST(SplitMix64, ReferenceOutputs) {
  // First outputs of splitmix64 seeded with 0.
  SplitMix64 rng(0);
  EXPECT_EQ(rng(), 0xE220A8397B1DCDAFULL);
  EXPECT_EQ(rng(), 0x6E789E6AA1B965F4ULL);
  EXPECT_EQ(rng(), 0x06C45D188009454FULL);
}

TEST(SplitSeed, DistinctPerReplication) {
  std::vector<std::uint64_t> seeds;
  for (std::uint64_t i = 0; i < 100; ++i) seeds.push_back(split_seed(12345, i));
  std::sort(seeds.begin(), seeds.end());
  EXPECT_EQ(std::adjacent_find(seeds.begin(), seeds.end()), seeds.end());
  EXPECT_EQ(split_seed(12345, 0), 12345ULL ^ kSeedSplitMultiplier);
}
