#include <gtest/gtest.h>

#include <cmath>

#include "mhlog/analytic.hpp"
#include "mhlog/rng.hpp"

using namespace mhlog;
using namespace mhlog::analytic;

namespace {

void expect_rel(double got, double want, double tol = 1e-12) {
  if (want == 0.0)
    EXPECT_NEAR(got, 0.0, tol);
  else
    EXPECT_LE(std::abs(got - want) / std::abs(want), tol) << got << " vs " << want;
}

CostParams base_cost() {
  CostParams cp;
  cp.r = 0.1;
  cp.alpha = cp.rho = 1.0;
  cp.C_c = 5;
  cp.C_1 = 1;
  cp.C_m = 0.5;
  return cp;
}

}  // namespace

TEST(MarkovProbs, HandValues) {
  auto p = markov_probs(1, 3);
  expect_rel(p.p01, 0.75);
  expect_rel(p.p02, 0.25);
  p = markov_probs(0, 0.5);
  EXPECT_EQ(p.p01, 1.0);
  EXPECT_EQ(p.p02, 0.0);
  p = markov_probs(0.2, 0.2);
  expect_rel(p.p01, 0.5);
  expect_rel(p.p02, 0.5);
  expect_rel(markov_probs(0.001, 0.01).p02, 1.0 / 11.0);
  EXPECT_THROW(markov_probs(0, 0), std::invalid_argument);
}

TEST(MarkovProbs, SumToOneOverRandomInputs) {
  SplitMix64 rng(2024);
  for (int i = 0; i < 10000; ++i) {
    const double lf = rng.uniform01() * 10.0;
    const double mu = rng.uniform01() * 10.0;
    const auto p = markov_probs(lf, mu);
    ASSERT_NEAR(p.p01 + p.p02, 1.0, 1e-12);
    ASSERT_GE(p.p02, 0.0);
    ASSERT_LE(p.p02, 1.0);
  }
}

TEST(AvgHandoffCost, HandValues) {
  auto cp = base_cost();
  expect_rel(avg_handoff_cost(0, cp), 5.5);
  expect_rel(avg_handoff_cost(2, cp), 7.5);
  cp.C_1 = 2;
  expect_rel(avg_handoff_cost(9.5, cp), 24.5);
}

TEST(TotalHandoffCost, HandValue) {
  expect_rel(total_handoff_cost(5, 2, base_cost()), 9.1);
}

TEST(TotalHandoffCost, ZeroWiredTimeDropsFirstTerm) {
  auto cp = base_cost();
  cp.r = 0;
  for (double ra : {0.5, 1.0, 3.0}) {
    cp.alpha = ra;
    cp.rho = 2.0;
    expect_rel(total_handoff_cost(1, 0, cp), cp.rho * cp.alpha * 1.5 + 5.5);
  }
}

TEST(TotalHandoffCost, DoublingEntryCostAddsEtaPlusRhoAlpha) {
  auto cp = base_cost();
  const double a = total_handoff_cost(5, 2, cp);
  cp.C_1 *= 2;
  expect_rel(total_handoff_cost(5, 2, cp) - a, 2.0 + cp.rho * cp.alpha);
}

TEST(TotalHandoffCost, RejectsSubUnitK) {
  EXPECT_THROW(total_handoff_cost(0.5, 0, base_cost()), std::invalid_argument);
}

TEST(RecoveryCost, HandValues) {
  auto cp = base_cost();
  expect_rel(recovery_cost(2, cp), 0.75);
  expect_rel(recovery_cost(0, cp), cp.r * (cp.C_c + cp.C_m));
  cp.r = 0;
  EXPECT_EQ(recovery_cost(2, cp), 0.0);
}

TEST(CostFormulas, LinearInEachConstant) {
  // Finite difference in one constant at a time: second difference vanishes.
  SplitMix64 rng(5);
  for (int i = 0; i < 200; ++i) {
    CostParams cp = base_cost();
    cp.r = rng.uniform01();
    cp.alpha = rng.uniform01() * 2;
    cp.rho = rng.uniform01() * 2;
    const double eta = rng.uniform01() * 20;
    const double k = 1 + rng.uniform01() * 40;
    for (double CostParams::*m : {&CostParams::C_1, &CostParams::C_c, &CostParams::C_m}) {
      auto at = [&](double v, bool rec) {
        CostParams c = cp;
        c.*m = v;
        return rec ? recovery_cost(eta, c) : total_handoff_cost(k, eta, c);
      };
      for (bool rec : {false, true}) {
        const double d1 = at(2.0, rec) - at(1.0, rec);
        const double d2 = at(3.0, rec) - at(2.0, rec);
        ASSERT_NEAR(d1, d2, 1e-9);
      }
    }
  }
}

TEST(TotalCost, HandValues) {
  expect_rel(total_cost(0.5, 0.5, 9.1, 0.75), 4.925);
  expect_rel(total_cost(1, 0, 3.3, 7.7), 3.3);
  expect_rel(total_cost(0, 1, 3.3, 7.7), 7.7);
  EXPECT_THROW(total_cost(0.5, 0.6, 1, 1), std::invalid_argument);
}

TEST(LogTransferOps, HandValues) {
  EXPECT_EQ(log_transfer_ops(500, 0.001, 0.01), 0.0);
  expect_rel(log_transfer_ops(2000, 0.001, 0.01), 30.0);
  // Alternate bound: N = floor(T_c * mu) = 5, prefactor mu / lambda_f = 50.
  expect_rel(log_transfer_ops(100, 0.001, 0.05, true), 750.0);
  // N = 5 with prefactor 10.
  expect_rel(log_transfer_ops(500, 0.001, 0.01, true), 150.0);
}

TEST(CProp, HandValues) {
  CostParams cp = base_cost();
  cp.T_load_ckpt = 10;
  cp.T_load_log = 1;
  expect_rel(c_prop(2000, 0.001, 0.01, cp), 2.5);
  // No transfer operations: r * T only.
  expect_rel(c_prop(500, 0.001, 0.01, cp), cp.r * cp.T_load_ckpt);
}

TEST(CProp, DoublingLogLoadDoublesSecondTermOnly) {
  CostParams cp = base_cost();
  const double first = cp.r * cp.T_load_ckpt;
  const double a = c_prop(2000, 0.001, 0.01, cp) - first;
  cp.T_load_log *= 2;
  const double b = c_prop(2000, 0.001, 0.01, cp) - first;
  expect_rel(b, 2 * a);
}

TEST(CLazy, ReducesToCp) {
  CostParams cp;
  cp.C_p = 3;
  expect_rel(c_lazy(123, 0.004, cp), 3.0);
  cp.C_p = 0;
  EXPECT_EQ(c_lazy(10, 0.1, cp), 0.0);
  cp.C_p = 7;
  expect_rel(c_lazy(50, 0.002, cp), 7.0);
}

TEST(CLazy, EqualsCpOverRandomInputs) {
  SplitMix64 rng(11);
  for (int i = 0; i < 10000; ++i) {
    CostParams cp;
    cp.C_p = rng.uniform01() * 100;
    const double Tc = 1e-3 + rng.uniform01() * 1e4;
    const double lf = 1e-6 + rng.uniform01();
    ASSERT_LE(std::abs(c_lazy(Tc, lf, cp) - cp.C_p), 1e-12 * std::max(1.0, cp.C_p));
  }
}

TEST(Frcr, HandValues) {
  EXPECT_EQ(*frcr(0.7, 0.7, 2, 1), 0.0);
  expect_rel(*frcr(0.9, 0.6, 2.5, 1.5), 0.3);
  EXPECT_FALSE(frcr(0.9, 0.6, 2, 2).has_value());
}

TEST(Evaluate, DefaultsConsistent) {
  const auto r = evaluate(SimParams{}, CostParams{});
  expect_rel(r.k, 50.0);
  expect_rel(r.eta, 24.5);
  expect_rel(r.p02, 1.0 / 11.0);
  expect_rel(r.c_t, r.p01 * r.c01 + r.p02 * r.c_r);
  expect_rel(r.c_lazy, 3.0);
  EXPECT_GE(r.c_prop, 0.0);
}

TEST(SingleFragmentRetrieval, DefaultsGiveFourteen) {
  expect_rel(single_fragment_retrieval_time(SimParams{}, CostParams{}), 14.0);
}
