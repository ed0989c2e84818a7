#include "sqz/cli.hpp"

#include <algorithm>
#include <fstream>
#include <iterator>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "sqz/budget.hpp"
#include "sqz/netlist.hpp"
#include "sqz/simulation.hpp"

namespace sqz::cli {
namespace {

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string fixed(double v) {
  std::string s = fmt::format("{:.6f}", v);
  if (s == "-0.000000") s.erase(0, 1);
  return s;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(fmt::format("cannot open '{}'", path));
  std::string content((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (in.bad()) throw IoError(fmt::format("error reading '{}'", path));
  return content;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError(fmt::format("cannot open '{}' for writing", path));
  out << content;
  out.flush();
  if (!out) throw IoError(fmt::format("error writing '{}'", path));
}

// Parses "fresnel=0.86,filter=0.99,..." into a budget.
EfficiencyBudget parse_budget(const std::string& text) {
  EfficiencyBudget budget;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto eq = item.find('=');
    if (eq == std::string::npos || eq == 0) {
      throw std::invalid_argument(fmt::format("budget entry '{}' is not name=value", item));
    }
    const std::string name = item.substr(0, eq);
    double value = 0.0;
    try {
      std::size_t used = 0;
      value = std::stod(item.substr(eq + 1), &used);
      if (used != item.size() - eq - 1) throw std::invalid_argument("trailing characters");
    } catch (const std::exception&) {
      throw std::invalid_argument(fmt::format("budget entry '{}' has a bad number", item));
    }
    if (name == "fresnel") budget.fresnel = value;
    else if (name == "filter") budget.filter = value;
    else if (name == "photodiode" || name == "pd") budget.photodiode = value;
    else if (name == "electronics" || name == "e") budget.electronics = value;
    else if (name == "coupler") budget.coupler = value;
    else if (name == "visibility") budget.visibility = value;
    else if (name == "propagation") budget.propagation = value;
    else budget.extra.push_back({name, value});
  }
  return budget;
}

std::optional<netlist::CircuitSpec> load_netlist(const std::string& path, std::ostream& err) {
  const auto result = netlist::parse(read_file(path));
  if (const auto* error = std::get_if<netlist::ParseError>(&result)) {
    err << path << ":" << error->to_string() << "\n";
    return std::nullopt;
  }
  return std::get<netlist::CircuitSpec>(result);
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Chip squeezing simulator: Gaussian model, homodyne traces, loss-budget analysis",
               "sqzsim"};
  app.require_subcommand(1);

  std::string netlist_path;
  std::string csv_path = "trace.csv";
  std::string report_path = "report.json";
  std::optional<std::uint64_t> seed;
  bool noiseless = false;

  auto* validate = app.add_subcommand("validate", "Parse and check a netlist");
  validate->add_option("netlist", netlist_path, "Netlist file")->required();

  auto* simulate_cmd = app.add_subcommand("simulate", "Simulate a netlist into a trace and report");
  simulate_cmd->add_option("netlist", netlist_path, "Netlist file")->required();
  simulate_cmd->add_option("--csv", csv_path, "Trace CSV output path")->capture_default_str();
  simulate_cmd->add_option("--report", report_path, "Report JSON output path")
      ->capture_default_str();
  simulate_cmd->add_option("--seed", seed, "Seed for spectrum-analyser noise");
  simulate_cmd->add_flag("--noiseless", noiseless, "Write the noiseless model trace");

  double sq_db = 0.0;
  std::optional<double> asq_db;
  double unc_db = 0.0;
  std::optional<double> eta;
  std::string budget_text;
  auto* analyze = app.add_subcommand("analyze", "Infer generated squeezing from measured values");
  analyze->add_option("--sq-db", sq_db, "Measured squeezing (dB)")->required();
  analyze->add_option("--asq-db", asq_db, "Measured antisqueezing (dB)");
  analyze->add_option("--unc-db", unc_db, "Measurement uncertainty (dB)");
  auto* eta_opt = analyze->add_option("--eta", eta, "Overall detection efficiency");
  auto* budget_opt =
      analyze->add_option("--budget", budget_text, "Factors, e.g. fresnel=0.86,filter=0.99");
  eta_opt->excludes(budget_opt);

  double gain = 0.0;
  double pump_mw = 0.0;
  double eta_eff = 1.0;
  auto* extrapolate = app.add_subcommand("extrapolate", "Squeezing expected at another pump power");
  extrapolate->add_option("--gain", gain, "Single-pass gain (mW^-1/2)")->required();
  extrapolate->add_option("--pump-mw", pump_mw, "Pump power (mW)")->required();
  extrapolate->add_option("--eta-eff", eta_eff, "Effective efficiency")->capture_default_str();

  std::optional<double> snr_db;
  std::optional<double> n_chip;
  double n_outer = 1.0;
  auto* calibrate = app.add_subcommand("calibrate", "Efficiencies from measured quantities");
  calibrate->add_option("--snr-db", snr_db, "Electronic SNR (dB)");
  calibrate->add_option("--n-chip", n_chip, "Chip refractive index");
  calibrate->add_option("--n-outer", n_outer, "Outer medium refractive index")
      ->capture_default_str();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitDomain;
  }

  try {
    if (validate->parsed()) {
      const auto spec = load_netlist(netlist_path, err);
      if (!spec) return kExitDomain;
      out << fmt::format("ok: {} mode(s), {} statement(s), homodyne on '{}'\n", spec->modes.size(),
                         spec->statements.size(), spec->measurement.mode);
      return kExitOk;
    }

    if (simulate_cmd->parsed()) {
      const auto spec = load_netlist(netlist_path, err);
      if (!spec) return kExitDomain;
      const SimulationResult result = sqz::simulate(*spec, seed, noiseless);
      std::ostringstream csv;
      write_csv(csv, result.trace);
      write_file(csv_path, csv.str());
      write_file(report_path, to_json(result.report).dump(2) + "\n");
      out << fmt::format("trace: {} points, min {} dB, max {} dB\n", result.trace.phases.size(),
                         fixed(result.model.min_db()), fixed(result.model.max_db()));
      return kExitOk;
    }

    if (analyze->parsed()) {
      EfficiencyBudget budget;
      if (eta) {
        budget = EfficiencyBudget::overall(*eta);
      } else if (!budget_text.empty()) {
        budget = parse_budget(budget_text);
      } else {
        err << "error: analyze needs --eta or --budget\n";
        return kExitDomain;
      }
      const auto report = build_report(RawMeasurement{sq_db, asq_db, unc_db}, budget);
      out << to_json(report).dump(2) << "\n";
      return kExitOk;
    }

    if (extrapolate->parsed()) {
      out << fixed(extrapolate_squeezing(gain, pump_mw, eta_eff)) << "\n";
      return kExitOk;
    }

    if (calibrate->parsed()) {
      if (!snr_db && !n_chip) {
        err << "error: calibrate needs --snr-db and/or --n-chip\n";
        return kExitDomain;
      }
      if (snr_db) out << "eta_e " << fixed(electronic_efficiency(*snr_db)) << "\n";
      if (n_chip) out << "eta_f " << fixed(fresnel_efficiency(n_outer, *n_chip)) << "\n";
      return kExitOk;
    }
  } catch (const IoError& e) {
    err << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const InfeasibleMeasurement& e) {
    err << "error: " << e.what() << "\n";
    return kExitDomain;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kExitDomain;
  } catch (const std::domain_error& e) {
    err << "error: " << e.what() << "\n";
    return kExitDomain;
  }
  return kExitDomain;
}

}  // namespace sqz::cli
