#pragma once

// Balanced homodyne detection of one mode with a classical (strong) local
// oscillator, and spectrum-analyser style variance-vs-phase traces.

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

#include "sqz/gaussian.hpp"

namespace sqz {

struct HomodyneConfig {
  double eta_pd = 1.0;
  double eta_e = 1.0;
  double coupler_ratio = 0.5;
  double visibility = 1.0;
  double center_freq_hz = 2e6;  // metadata; the model is frequency-flat
  double rbw_hz = 100e3;
  double vbw_hz = 30.0;
  double sweep_time_s = 1.0;
  std::optional<std::uint64_t> seed;

  /// Throws std::invalid_argument on out-of-range efficiencies or when
  /// rbw >= vbw > 0 and sweep_time > 0 do not hold.
  void validate() const;

  /// Number of independent samples averaged per displayed point, rbw / vbw.
  double averaging_factor() const { return rbw_hz / vbw_hz; }
  /// Relative standard deviation of one displayed point, sqrt(2 / M).
  double relative_sigma() const;

  bool operator==(const HomodyneConfig&) const = default;
};

/// `count` phases from `start` (inclusive) to `stop` (exclusive).
struct PhaseSweep {
  double start = 0.0;
  double stop = 0.0;
  std::size_t count = 0;

  void validate() const;
  std::vector<double> phases() const;

  bool operator==(const PhaseSweep&) const = default;
};

struct HomodyneTrace {
  std::vector<double> phases;
  std::vector<double> variance_db;
  HomodyneConfig config;
  bool noiseless = true;

  double min_db() const;
  double max_db() const;
  /// Acquisition time of each point; phase is linear in time over the sweep.
  std::vector<double> sample_times() const;
};

/// 4R(1-R) * v^2 * eta_pd * eta_e.
double effective_efficiency(const HomodyneConfig& config);

/// Quadrature variance after the detector's effective loss.
double measure_variance(const GaussianState& state, std::size_t mode, double theta,
                        const HomodyneConfig& config);

/// Noiseless trace in dB relative to shot noise.
HomodyneTrace sweep(const GaussianState& state, std::size_t mode, const HomodyneConfig& config,
                    const PhaseSweep& phases);

/// Adds spectrum-analyser estimator noise: each linear variance is scaled by
/// an independent Gamma(M/2, 2/M) draw (mean 1, relative sigma sqrt(2/M)).
/// Requires config.seed; output is a pure function of (trace, config).
HomodyneTrace synthesize_trace(const HomodyneTrace& trace, const HomodyneConfig& config);

/// One-sigma point scatter in dB, sqrt(2/M) * 10 / ln 10.
double estimator_uncertainty_db(const HomodyneConfig& config);

/// Header `phase_rad,variance_db`, one row per point, LF endings.
void write_csv(std::ostream& out, const HomodyneTrace& trace);

}  // namespace sqz
