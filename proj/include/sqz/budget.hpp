#pragma once

// Detection-chain efficiency budget and the inverse analysis built on it:
// loss-corrected squeezing, minimum-uncertainty check, pump-power scaling.

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

namespace sqz {

/// A measured variance is at or below the vacuum floor 1 - eta, which no
/// physical state can produce through a loss of eta.
class InfeasibleMeasurement : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

struct BudgetFactor {
  std::string name;
  double value = 1.0;

  bool operator==(const BudgetFactor&) const = default;
};

struct EfficiencyBudget {
  double fresnel = 1.0;
  double filter = 1.0;
  double photodiode = 1.0;
  double electronics = 1.0;
  double coupler = 1.0;
  double visibility = 1.0;
  double propagation = 1.0;
  // Any further named losses (e.g. unlabeled netlist losses, or a single
  // "overall" factor when only the product is known).
  std::vector<BudgetFactor> extra;

  /// Budget that only knows the total product.
  static EfficiencyBudget overall(double eta);

  /// Throws std::invalid_argument if any factor is outside [0, 1].
  void validate() const;
  std::vector<BudgetFactor> factors() const;
  double total() const;
  /// Product of the factors after rounding each to two decimals.
  double total_rounded() const;
  /// False when the budget carries only an "overall" factor.
  bool factorized() const;
};

/// 1 - ((n1 - n2) / (n1 + n2))^2 at normal incidence.
double fresnel_efficiency(double n1, double n2);

/// (S - 1) / S with S = 10^(snr_db / 10).
double electronic_efficiency(double snr_db);

double total_efficiency(const EfficiencyBudget& budget);

/// dB variance after a pure loss of `eta`.
double apply_loss_db(double v_db, double eta);

/// Undoes a pure loss: V_gen = (V_meas - (1 - eta)) / eta, in dB.
/// Throws InfeasibleMeasurement when V_meas <= 1 - eta.
double infer_generated(double v_meas_db, double eta);

/// 10^(sq/10) * 10^(asq/10); equals 1 for a minimum-uncertainty state.
double purity_product(double sq_db, double asq_db);

/// Single-pass parametric gain: r = gain * sqrt(pump_mw).
double pump_to_r(double pump_mw, double gain);

/// 10 log10(eta_eff e^{-2r} + 1 - eta_eff) with r = pump_to_r(pump_mw, gain).
double extrapolate_squeezing(double gain, double pump_mw, double eta_eff);

/// pd * electronics efficiency assumed by the improved-detection projection.
inline constexpr double kImprovedDetection = 0.99;

struct RawMeasurement {
  double sq_db = 0.0;
  std::optional<double> asq_db;
  double unc_db = 0.0;
};

struct SqueezingReport {
  double raw_sq_db = 0.0;
  std::optional<double> raw_asq_db;
  double raw_unc_db = 0.0;
  double eta_total = 1.0;
  double eta_total_rounded = 1.0;
  double inferred_sq_db = 0.0;
  double inferred_sq_unc_db = 0.0;
  std::optional<double> inferred_asq_db;
  std::optional<double> inferred_asq_unc_db;
  std::optional<double> purity_product;
  std::optional<double> purity_product_db;
  // Squeezing that would be measured with an anti-reflection-coated facet
  // (fresnel -> 1) and improved detection (pd * electronics -> 0.99).
  std::optional<double> avoidable_loss_sq_db;
  std::vector<BudgetFactor> budget;
};

/// Uncertainties propagate to first order in linear variance:
/// dV_gen = dV_meas / eta.
SqueezingReport build_report(const RawMeasurement& raw, const EfficiencyBudget& budget);

/// Fixed field names: raw_sq_db, raw_asq_db, eta_total, inferred_sq_db,
/// inferred_asq_db, purity_product, budget{factor: value}, plus the
/// uncertainty and projection fields. Absent optionals are null.
nlohmann::json to_json(const SqueezingReport& report);

}  // namespace sqz
