#include "sqz/homodyne.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <random>
#include <stdexcept>
#include <string>

#include <fmt/format.h>

namespace sqz {
namespace {

void check_unit(double value, const char* what) {
  if (!(value >= 0.0 && value <= 1.0)) {
    throw std::invalid_argument(fmt::format("{} = {} is outside [0, 1]", what, value));
  }
}

}  // namespace

void HomodyneConfig::validate() const {
  check_unit(eta_pd, "eta_pd");
  check_unit(eta_e, "eta_e");
  check_unit(coupler_ratio, "coupler_ratio");
  check_unit(visibility, "visibility");
  if (!(vbw_hz > 0.0)) throw std::invalid_argument("vbw must be > 0");
  if (!(rbw_hz >= vbw_hz) || !std::isfinite(rbw_hz)) {
    throw std::invalid_argument("rbw must be >= vbw");
  }
  if (!(sweep_time_s > 0.0) || !std::isfinite(sweep_time_s)) {
    throw std::invalid_argument("sweep time must be > 0");
  }
  if (!std::isfinite(center_freq_hz)) throw std::invalid_argument("center frequency must be finite");
}

double HomodyneConfig::relative_sigma() const { return std::sqrt(2.0 / averaging_factor()); }

void PhaseSweep::validate() const {
  if (count < 2) throw std::invalid_argument("phase sweep needs at least 2 points");
  if (!std::isfinite(start) || !std::isfinite(stop)) {
    throw std::invalid_argument("phase sweep bounds must be finite");
  }
}

std::vector<double> PhaseSweep::phases() const {
  validate();
  std::vector<double> out(count);
  const double step = (stop - start) / static_cast<double>(count);
  for (std::size_t i = 0; i < count; ++i) out[i] = start + step * static_cast<double>(i);
  return out;
}

double HomodyneTrace::min_db() const {
  if (variance_db.empty()) throw std::logic_error("empty trace");
  return *std::min_element(variance_db.begin(), variance_db.end());
}

double HomodyneTrace::max_db() const {
  if (variance_db.empty()) throw std::logic_error("empty trace");
  return *std::max_element(variance_db.begin(), variance_db.end());
}

std::vector<double> HomodyneTrace::sample_times() const {
  std::vector<double> out(phases.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = config.sweep_time_s * static_cast<double>(i) / static_cast<double>(out.size());
  }
  return out;
}

double effective_efficiency(const HomodyneConfig& config) {
  config.validate();
  const double r = config.coupler_ratio;
  return 4.0 * r * (1.0 - r) * config.visibility * config.visibility * config.eta_pd *
         config.eta_e;
}

double measure_variance(const GaussianState& state, std::size_t mode, double theta,
                        const HomodyneConfig& config) {
  return quadrature_variance(apply_loss(state, mode, effective_efficiency(config)), mode, theta);
}

HomodyneTrace sweep(const GaussianState& state, std::size_t mode, const HomodyneConfig& config,
                    const PhaseSweep& phases) {
  const double eta_hd = effective_efficiency(config);
  const GaussianState detected = apply_loss(state, mode, eta_hd);
  HomodyneTrace trace;
  trace.config = config;
  trace.noiseless = true;
  trace.phases = phases.phases();
  trace.variance_db.reserve(trace.phases.size());
  for (double theta : trace.phases) {
    trace.variance_db.push_back(to_db(quadrature_variance(detected, mode, theta)));
  }
  return trace;
}

HomodyneTrace synthesize_trace(const HomodyneTrace& trace, const HomodyneConfig& config) {
  config.validate();
  if (!config.seed) throw std::invalid_argument("noise synthesis needs a seed");
  if (trace.phases.size() != trace.variance_db.size()) {
    throw std::invalid_argument("trace phase and variance lengths differ");
  }
  const double m = config.averaging_factor();
  std::mt19937_64 rng(*config.seed);
  std::gamma_distribution<double> fluctuation(m / 2.0, 2.0 / m);

  HomodyneTrace noisy = trace;
  noisy.config = config;
  noisy.noiseless = false;
  for (double& v_db : noisy.variance_db) v_db = to_db(from_db(v_db) * fluctuation(rng));
  return noisy;
}

double estimator_uncertainty_db(const HomodyneConfig& config) {
  config.validate();
  return config.relative_sigma() * 10.0 / std::log(10.0);
}

void write_csv(std::ostream& out, const HomodyneTrace& trace) {
  if (trace.phases.size() != trace.variance_db.size()) {
    throw std::invalid_argument("trace phase and variance lengths differ");
  }
  out << "phase_rad,variance_db\n";
  for (std::size_t i = 0; i < trace.phases.size(); ++i) {
    std::string db = fmt::format("{:.6f}", trace.variance_db[i]);
    if (db == "-0.000000") db.erase(0, 1);
    out << fmt::format("{:.9f},{}\n", trace.phases[i], db);
  }
}

}  // namespace sqz
