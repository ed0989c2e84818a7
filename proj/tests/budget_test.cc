#include "sqz/budget.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "sqz/gaussian.hpp"
#include "test_support.hpp"

using namespace sqz;
using sqz::testing::uniform;

namespace {

EfficiencyBudget rounded_budget() {
  EfficiencyBudget b;
  b.fresnel = 0.86;
  b.filter = 0.99;
  b.photodiode = 0.88;
  b.electronics = 0.95;
  return b;
}

EfficiencyBudget unrounded_budget() {
  EfficiencyBudget b;
  b.fresnel = 0.85777;
  b.filter = 0.99;
  b.photodiode = 0.88;
  b.electronics = 0.94752;
  return b;
}

}  // namespace

TEST(Fresnel, IndexMatchedIsLossless) { EXPECT_DOUBLE_EQ(fresnel_efficiency(1.5, 1.5), 1.0); }

TEST(Fresnel, LithiumNiobateToAir) {
  const double expected = 1.0 - std::pow(1.211 / 3.211, 2);
  EXPECT_NEAR(fresnel_efficiency(1.0, 2.211), expected, 1e-15);
  EXPECT_NEAR(fresnel_efficiency(1.0, 2.211), 0.85777, 1e-5);
}

TEST(Fresnel, Symmetric) {
  EXPECT_DOUBLE_EQ(fresnel_efficiency(1.0, 2.211), fresnel_efficiency(2.211, 1.0));
  EXPECT_DOUBLE_EQ(fresnel_efficiency(1.33, 3.5), fresnel_efficiency(3.5, 1.33));
}

TEST(Fresnel, RejectsNonPositiveIndex) {
  EXPECT_THROW(fresnel_efficiency(0.0, 2.0), std::invalid_argument);
  EXPECT_THROW(fresnel_efficiency(1.0, -2.0), std::invalid_argument);
}

TEST(Electronic, ClearanceOf12p8dB) {
  EXPECT_NEAR(electronic_efficiency(12.8), 0.94752, 1e-5);
  EXPECT_NEAR(electronic_efficiency(12.8), 0.95, 5e-3);
}

TEST(Electronic, Limits) {
  EXPECT_GE(electronic_efficiency(100.0), 0.9999);
  EXPECT_NEAR(electronic_efficiency(10.0 * std::log10(2.0)), 0.5, 1e-15);
  EXPECT_NEAR(electronic_efficiency(3.0103), 0.5, 1e-5);
  EXPECT_THROW(electronic_efficiency(0.0), std::invalid_argument);
  EXPECT_THROW(electronic_efficiency(-3.0), std::invalid_argument);
}

TEST(TotalEfficiency, RoundedFactors) {
  EXPECT_NEAR(total_efficiency(rounded_budget()), 0.86 * 0.99 * 0.88 * 0.95, 1e-15);
  EXPECT_NEAR(total_efficiency(rounded_budget()), 0.71177, 1e-5);
  EXPECT_NEAR(total_efficiency(rounded_budget()), 0.71, 5e-3);
}

TEST(TotalEfficiency, UnroundedFactors) {
  EXPECT_NEAR(total_efficiency(unrounded_budget()), 0.70807, 1e-5);
  // Rounding every factor to two decimals recovers the quoted chain.
  EXPECT_NEAR(unrounded_budget().total_rounded(), 0.71177, 1e-5);
}

TEST(TotalEfficiency, AllOnes) { EXPECT_EQ(total_efficiency(EfficiencyBudget{}), 1.0); }

TEST(TotalEfficiency, InvalidFactorRejected) {
  auto b = rounded_budget();
  b.filter = 1.2;
  EXPECT_THROW(total_efficiency(b), std::invalid_argument);
}

TEST(TotalEfficiency, ReorderingInvariant) {
  std::mt19937_64 rng(1);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> values(6);
    for (double& v : values) v = uniform(rng, 0.0, 1.0);
    std::sort(values.begin(), values.end());
    double reference = -1.0;
    do {
      EfficiencyBudget b;
      b.fresnel = values[0];
      b.filter = values[1];
      b.photodiode = values[2];
      b.electronics = values[3];
      b.extra = {{"a", values[4]}, {"b", values[5]}};
      if (reference < 0.0) reference = total_efficiency(b);
      EXPECT_EQ(total_efficiency(b), reference);
    } while (std::next_permutation(values.begin(), values.end()));
  }
}

TEST(InferGenerated, MeasuredSqueezing) {
  EXPECT_NEAR(infer_generated(-2.00, 0.71), -3.185, 1e-3);
  EXPECT_NEAR(infer_generated(-2.00, 0.71), -3.2, 0.05);
}

TEST(InferGenerated, MeasuredAntisqueezing) {
  EXPECT_NEAR(infer_generated(2.80, 0.71), 3.570, 1e-3);
  EXPECT_NEAR(infer_generated(2.80, 0.71), 3.6, 0.05);
}

TEST(InferGenerated, VacuumIsFixedPoint) {
  for (double eta : {0.05, 0.3, 0.71, 1.0}) EXPECT_NEAR(infer_generated(0.0, eta), 0.0, 1e-12);
}

TEST(InferGenerated, InfeasibleBelowLossFloor) {
  // 10^-0.6 = 0.2512 <= 1 - 0.2
  EXPECT_THROW(infer_generated(-6.0, 0.2), InfeasibleMeasurement);
  EXPECT_THROW(infer_generated(-2.0, 0.0), std::invalid_argument);
  EXPECT_THROW(infer_generated(-2.0, 1.5), std::invalid_argument);
}

TEST(InferGenerated, FeasibilityBoundaryIsExact) {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 1000; ++trial) {
    const double eta = uniform(rng, 0.05, 1.0);
    const double v_db = uniform(rng, -15.0, 5.0);
    const bool feasible = from_db(v_db) > 1.0 - eta;
    if (feasible) {
      EXPECT_NO_THROW(infer_generated(v_db, eta));
    } else {
      EXPECT_THROW(infer_generated(v_db, eta), InfeasibleMeasurement);
    }
  }
}

TEST(Properties, InferInvertsForwardLoss) {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 2000; ++trial) {
    const double eta = uniform(rng, 0.05, 1.0);
    const double v = uniform(rng, 0.05, 20.0);
    const double measured = apply_loss_db(to_db(v), eta);
    EXPECT_NEAR(infer_generated(measured, eta), to_db(v), 1e-12) << "eta=" << eta << " v=" << v;
  }
}

TEST(Properties, LossKeepsPhysicalPairsPhysical) {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 1000; ++trial) {
    const double eta = uniform(rng, 0.0, 1.0);
    const double sq = uniform(rng, -10.0, 0.0);
    const double asq = -sq + uniform(rng, 0.0, 5.0);
    const double msq = apply_loss_db(sq, eta), masq = apply_loss_db(asq, eta);
    EXPECT_GE(purity_product(msq, masq), 1.0 - 1e-12);
    if (eta > 0.05) {
      EXPECT_NEAR(infer_generated(msq, eta), sq, 1e-8);
      EXPECT_NEAR(infer_generated(masq, eta), asq, 1e-8);
    }
  }
}

TEST(PurityProduct, Values) {
  EXPECT_DOUBLE_EQ(purity_product(-3.3, 3.3), 1.0);
  EXPECT_NEAR(purity_product(-2.00, 2.80), 1.2023, 1e-4);
  EXPECT_NEAR(purity_product(infer_generated(-2.0, 0.71), infer_generated(2.8, 0.71)), 1.0927, 1e-4);
  EXPECT_NEAR(purity_product(-3.185, 3.570), 1.0927, 2e-4);
}

TEST(PumpToR, Values) {
  EXPECT_EQ(pump_to_r(0.0, 0.1), 0.0);
  EXPECT_NEAR(0.36687 / std::sqrt(40.0), 0.058007, 1e-6);
  EXPECT_NEAR(pump_to_r(40.0, 0.058014), 0.36691, 1e-5);
  EXPECT_NEAR(pump_to_r(500.0, 0.058014), 0.058014 * std::sqrt(500.0), 1e-15);
  EXPECT_NEAR(pump_to_r(500.0, 0.058014), 1.29710, 2e-4);
  EXPECT_THROW(pump_to_r(-1.0, 0.1), std::invalid_argument);
  EXPECT_THROW(pump_to_r(1.0, -0.1), std::invalid_argument);
}

TEST(Extrapolate, Values) {
  EXPECT_NEAR(extrapolate_squeezing(0.058014, 500.0, 1.0), -11.27, 5e-3);
  EXPECT_NEAR(extrapolate_squeezing(0.058014, 500.0, 0.95), -9.17, 5e-3);
  EXPECT_EQ(extrapolate_squeezing(0.3, 0.0, 0.8), 0.0);
  EXPECT_THROW(extrapolate_squeezing(0.1, 10.0, 1.1), std::invalid_argument);
}

TEST(Properties, ExtrapolationMonotoneAndBounded) {
  double previous = 1.0;
  for (double pump = 0.0; pump <= 2000.0; pump += 10.0) {
    const double db = extrapolate_squeezing(0.058014, pump, 1.0);
    EXPECT_LT(db, previous);
    previous = db;
  }
  for (double eta : {0.5, 0.9, 0.99}) {
    for (double pump : {10.0, 500.0, 5000.0, 1e5}) {
      EXPECT_GT(extrapolate_squeezing(0.058014, pump, eta), to_db(1.0 - eta));
    }
  }
}

TEST(BuildReport, ReferenceInputs) {
  const auto report = build_report({-2.00, 2.80, 0.05}, EfficiencyBudget::overall(0.71));
  EXPECT_NEAR(report.inferred_sq_db, -3.185, 1e-3);
  ASSERT_TRUE(report.inferred_asq_db);
  EXPECT_NEAR(*report.inferred_asq_db, 3.570, 1e-3);
  EXPECT_NEAR(*report.purity_product, 1.0927, 1e-4);
  EXPECT_NEAR(*report.purity_product_db, to_db(*report.purity_product), 1e-15);
  EXPECT_FALSE(report.avoidable_loss_sq_db);
  // Forward loss reproduces the raw values.
  EXPECT_NEAR(apply_loss_db(report.inferred_sq_db, report.eta_total), -2.00, 1e-9);
  EXPECT_NEAR(apply_loss_db(*report.inferred_asq_db, report.eta_total), 2.80, 1e-9);
}

TEST(BuildReport, FirstOrderUncertainty) {
  const auto report = build_report({-2.00, 2.80, 0.05}, EfficiencyBudget::overall(0.71));
  // Finite-difference oracle of the inversion.
  const double h = 1e-6;
  const double slope = (infer_generated(-2.0 + h, 0.71) - infer_generated(-2.0 - h, 0.71)) / (2 * h);
  EXPECT_NEAR(report.inferred_sq_unc_db, slope * 0.05, 1e-7);
  const double slope_a = (infer_generated(2.8 + h, 0.71) - infer_generated(2.8 - h, 0.71)) / (2 * h);
  EXPECT_NEAR(*report.inferred_asq_unc_db, slope_a * 0.05, 1e-7);
}

TEST(BuildReport, UnitEfficiencyEchoesRaw) {
  const auto report = build_report({-2.00, 2.80, 0.05}, EfficiencyBudget{});
  EXPECT_NEAR(report.inferred_sq_db, -2.00, 1e-12);
  EXPECT_NEAR(*report.inferred_asq_db, 2.80, 1e-12);
  EXPECT_NEAR(report.inferred_sq_unc_db, 0.05, 1e-12);
}

TEST(BuildReport, AvoidableLossProjection) {
  const auto report = build_report({-2.00, 2.80, 0.05}, rounded_budget());
  ASSERT_TRUE(report.avoidable_loss_sq_db);
  // fresnel -> 1, pd * e -> 0.99, filter stays 0.99.
  const double v_gen = from_db(report.inferred_sq_db);
  const double eta = 0.99 * 0.99;
  EXPECT_NEAR(*report.avoidable_loss_sq_db, to_db(eta * v_gen + 1 - eta), 1e-12);
  EXPECT_NEAR(*report.avoidable_loss_sq_db, -3.09, 0.01);
}

TEST(BuildReport, InfeasibleRawValues) {
  EXPECT_THROW(build_report({-6.0, std::nullopt, 0.0}, EfficiencyBudget::overall(0.2)),
               InfeasibleMeasurement);
}

TEST(ReportJson, FixedFieldNames) {
  const auto j = to_json(build_report({-2.00, 2.80, 0.05}, rounded_budget()));
  for (const char* key : {"raw_sq_db", "raw_asq_db", "eta_total", "inferred_sq_db",
                          "inferred_asq_db", "purity_product", "budget"}) {
    EXPECT_TRUE(j.contains(key)) << key;
  }
  EXPECT_DOUBLE_EQ(j["budget"]["fresnel"].get<double>(), 0.86);
  EXPECT_DOUBLE_EQ(j["budget"]["electronics"].get<double>(), 0.95);
  const auto without_asq = to_json(build_report({-1.0, std::nullopt, 0.0}, EfficiencyBudget{}));
  EXPECT_TRUE(without_asq["raw_asq_db"].is_null());
  EXPECT_TRUE(without_asq["purity_product"].is_null());
}
