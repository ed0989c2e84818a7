#pragma once

// End-to-end run of a parsed netlist: state preparation, homodyne sweep,
// optional estimator noise, and the squeezing report read off the trace.

#include <cstdint>
#include <optional>

#include "sqz/budget.hpp"
#include "sqz/gaussian.hpp"
#include "sqz/homodyne.hpp"
#include "sqz/netlist.hpp"

namespace sqz {

struct SimulationResult {
  /// Trace as written out (noisy when a seed was given and noise is enabled).
  HomodyneTrace trace;
  /// Expected (noiseless) trace; the report's extrema come from here.
  HomodyneTrace model;
  EfficiencyBudget budget;
  SqueezingReport report;
};

/// Applies the preparation channels to vacuum, i.e. the state reaching the
/// detector before the homodyne's own loss.
GaussianState prepare_state(const netlist::CompiledCircuit& circuit);

/// Loss statements on the measured mode, grouped by label ("fresnel",
/// "filter", "propagation" map to the named fields; unlabeled losses go to
/// "anonymous"), plus the homodyne's photodiode, electronics, coupler
/// imbalance and visibility factors.
EfficiencyBudget budget_for(const netlist::CircuitSpec& spec);

/// Throws InfeasibleMeasurement / std::invalid_argument when the report
/// cannot be inferred (e.g. zero detection efficiency).
SimulationResult simulate(const netlist::CircuitSpec& spec, std::optional<std::uint64_t> seed,
                          bool noiseless);

}  // namespace sqz
