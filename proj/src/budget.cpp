#include "sqz/budget.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "sqz/gaussian.hpp"

namespace sqz {
namespace {

constexpr const char* kOverall = "overall";

void check_unit(double value, const std::string& what) {
  if (!(value >= 0.0 && value <= 1.0)) {
    throw std::invalid_argument(fmt::format("{} = {} is outside [0, 1]", what, value));
  }
}

double round2(double x) { return std::round(x * 100.0) / 100.0; }

// Linear-variance uncertainty carried through the loss inversion, back in dB.
double propagate_unc_db(double v_meas_db, double unc_db, double eta) {
  const double v_meas = from_db(v_meas_db);
  const double v_gen = (v_meas - (1.0 - eta)) / eta;
  const double dv_meas = v_meas * std::log(10.0) / 10.0 * unc_db;
  return 10.0 / std::log(10.0) * (dv_meas / eta) / v_gen;
}

}  // namespace

EfficiencyBudget EfficiencyBudget::overall(double eta) {
  EfficiencyBudget budget;
  budget.extra.push_back({kOverall, eta});
  return budget;
}

void EfficiencyBudget::validate() const {
  for (const auto& f : factors()) check_unit(f.value, "efficiency '" + f.name + "'");
}

std::vector<BudgetFactor> EfficiencyBudget::factors() const {
  std::vector<BudgetFactor> out{{"fresnel", fresnel},       {"filter", filter},
                                {"photodiode", photodiode}, {"electronics", electronics},
                                {"coupler", coupler},       {"visibility", visibility},
                                {"propagation", propagation}};
  out.insert(out.end(), extra.begin(), extra.end());
  return out;
}

double EfficiencyBudget::total() const {
  // Multiplying in sorted order makes the result independent of factor order.
  std::vector<double> values;
  for (const auto& f : factors()) values.push_back(f.value);
  std::sort(values.begin(), values.end());
  double product = 1.0;
  for (double v : values) product *= v;
  return product;
}

double EfficiencyBudget::total_rounded() const {
  double product = 1.0;
  for (const auto& f : factors()) product *= round2(f.value);
  return product;
}

bool EfficiencyBudget::factorized() const {
  for (const auto& f : extra) {
    if (f.name == kOverall) return false;
  }
  return true;
}

double fresnel_efficiency(double n1, double n2) {
  if (!(n1 > 0.0) || !(n2 > 0.0)) throw std::invalid_argument("refractive indices must be > 0");
  const double r = (n1 - n2) / (n1 + n2);
  return 1.0 - r * r;
}

double electronic_efficiency(double snr_db) {
  if (!(snr_db > 0.0)) {
    throw std::invalid_argument("electronic SNR must be > 0 dB (noise at or above signal)");
  }
  const double s = from_db(snr_db);
  return (s - 1.0) / s;
}

double total_efficiency(const EfficiencyBudget& budget) {
  budget.validate();
  return budget.total();
}

double apply_loss_db(double v_db, double eta) {
  check_unit(eta, "eta");
  return to_db(eta * from_db(v_db) + (1.0 - eta));
}

double infer_generated(double v_meas_db, double eta) {
  if (!(eta > 0.0 && eta <= 1.0)) throw std::invalid_argument("eta must lie in (0, 1]");
  const double v_meas = from_db(v_meas_db);
  if (!(v_meas > 1.0 - eta)) {
    throw InfeasibleMeasurement(fmt::format(
        "infeasible measurement: variance {:.6f} ({:.4f} dB) is not above the loss floor "
        "1 - eta = {:.6f}",
        v_meas, v_meas_db, 1.0 - eta));
  }
  return to_db((v_meas - (1.0 - eta)) / eta);
}

double purity_product(double sq_db, double asq_db) { return from_db(sq_db) * from_db(asq_db); }

double pump_to_r(double pump_mw, double gain) {
  if (!(pump_mw >= 0.0)) throw std::invalid_argument("pump power must be >= 0");
  if (!(gain >= 0.0)) throw std::invalid_argument("gain must be >= 0");
  return gain * std::sqrt(pump_mw);
}

double extrapolate_squeezing(double gain, double pump_mw, double eta_eff) {
  check_unit(eta_eff, "eta_eff");
  const double r = pump_to_r(pump_mw, gain);
  return to_db(eta_eff * std::exp(-2.0 * r) + (1.0 - eta_eff));
}

SqueezingReport build_report(const RawMeasurement& raw, const EfficiencyBudget& budget) {
  budget.validate();
  if (!(raw.unc_db >= 0.0)) throw std::invalid_argument("uncertainty must be >= 0");
  const double eta = budget.total();

  SqueezingReport report;
  report.raw_sq_db = raw.sq_db;
  report.raw_asq_db = raw.asq_db;
  report.raw_unc_db = raw.unc_db;
  report.eta_total = eta;
  report.eta_total_rounded = budget.total_rounded();
  report.budget = budget.factors();

  report.inferred_sq_db = infer_generated(raw.sq_db, eta);
  report.inferred_sq_unc_db = propagate_unc_db(raw.sq_db, raw.unc_db, eta);
  if (raw.asq_db) {
    report.inferred_asq_db = infer_generated(*raw.asq_db, eta);
    report.inferred_asq_unc_db = propagate_unc_db(*raw.asq_db, raw.unc_db, eta);
    report.purity_product = purity_product(report.inferred_sq_db, *report.inferred_asq_db);
    report.purity_product_db = to_db(*report.purity_product);
  }

  if (budget.factorized()) {
    EfficiencyBudget improved = budget;
    improved.fresnel = 1.0;
    improved.photodiode = kImprovedDetection;
    improved.electronics = 1.0;
    report.avoidable_loss_sq_db = apply_loss_db(report.inferred_sq_db, improved.total());
  }
  return report;
}

nlohmann::json to_json(const SqueezingReport& report) {
  auto opt = [](const std::optional<double>& v) -> nlohmann::json {
    return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
  };
  nlohmann::json budget = nlohmann::json::object();
  for (const auto& f : report.budget) budget[f.name] = f.value;

  nlohmann::json j = nlohmann::json::object();
  j["raw_sq_db"] = report.raw_sq_db;
  j["raw_asq_db"] = opt(report.raw_asq_db);
  j["raw_unc_db"] = report.raw_unc_db;
  j["eta_total"] = report.eta_total;
  j["eta_total_rounded"] = report.eta_total_rounded;
  j["inferred_sq_db"] = report.inferred_sq_db;
  j["inferred_sq_unc_db"] = report.inferred_sq_unc_db;
  j["inferred_asq_db"] = opt(report.inferred_asq_db);
  j["inferred_asq_unc_db"] = opt(report.inferred_asq_unc_db);
  j["purity_product"] = opt(report.purity_product);
  j["purity_product_db"] = opt(report.purity_product_db);
  j["avoidable_loss_sq_db"] = opt(report.avoidable_loss_sq_db);
  j["budget"] = std::move(budget);
  return j;
}

}  // namespace sqz
