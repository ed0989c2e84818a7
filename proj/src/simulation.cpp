#include "sqz/simulation.hpp"

#include <algorithm>

namespace sqz {
namespace {

void multiply_into(EfficiencyBudget& budget, const std::string& label, double eta) {
  if (label == "fresnel") {
    budget.fresnel *= eta;
  } else if (label == "filter") {
    budget.filter *= eta;
  } else if (label == "propagation") {
    budget.propagation *= eta;
  } else {
    auto it = std::find_if(budget.extra.begin(), budget.extra.end(),
                           [&](const BudgetFactor& f) { return f.name == label; });
    if (it == budget.extra.end()) {
      budget.extra.push_back({label, eta});
    } else {
      it->value *= eta;
    }
  }
}

}  // namespace

GaussianState prepare_state(const netlist::CompiledCircuit& circuit) {
  GaussianState state = vacuum(circuit.n_modes);
  for (const auto& channel : circuit.preparation()) state = channel.apply(state);
  return state;
}

EfficiencyBudget budget_for(const netlist::CircuitSpec& spec) {
  EfficiencyBudget budget;
  for (const auto& statement : spec.statements) {
    const auto* loss = std::get_if<netlist::Loss>(&statement);
    if (!loss || loss->mode != spec.measurement.mode) continue;
    multiply_into(budget, loss->label.value_or("anonymous"), loss->eta);
  }
  const HomodyneConfig& c = spec.measurement.config;
  budget.photodiode = c.eta_pd;
  budget.electronics = c.eta_e;
  budget.coupler = 4.0 * c.coupler_ratio * (1.0 - c.coupler_ratio);
  budget.visibility = c.visibility * c.visibility;
  return budget;
}

SimulationResult simulate(const netlist::CircuitSpec& spec, std::optional<std::uint64_t> seed,
                          bool noiseless) {
  const auto circuit = netlist::compile(spec);
  const GaussianState state = prepare_state(circuit);

  HomodyneConfig config = circuit.plan.config;
  config.seed = noiseless ? std::nullopt : seed;

  SimulationResult result;
  result.model = sweep(state, circuit.plan.mode, config, circuit.plan.sweep);
  result.trace = config.seed ? synthesize_trace(result.model, config) : result.model;
  result.budget = budget_for(spec);

  RawMeasurement raw;
  raw.sq_db = result.model.min_db();
  raw.asq_db = result.model.max_db();
  raw.unc_db = config.seed ? estimator_uncertainty_db(config) : 0.0;
  result.report = build_report(raw, result.budget);
  return result;
}

}  // namespace sqz
