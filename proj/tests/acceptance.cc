// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <random>
#include <sstream>
#include <string>

#include <fmt/format.h>
#include <json.hpp>

#include "spec_generator.hpp"
#include "sqz/budget.hpp"
#include "sqz/cli.hpp"
#include "sqz/fock.hpp"
#include "sqz/gaussian.hpp"
#include "sqz/netlist.hpp"
#include "sqz/simulation.hpp"
#include "test_support.hpp"

namespace fs = std::filesystem;
using namespace sqz;
using sqz::testing::pick;
using sqz::testing::uniform;

namespace {

int failures = 0;

void report(int id, const std::string& name, bool ok, const std::string& detail) {
  std::cout << fmt::format("[{}] criterion {:2d} {}: {}\n", ok ? "PASS" : "FAIL", id, name, detail);
  if (!ok) ++failures;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + p.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

const fs::path kData = SQZ_DATA_DIR;

EfficiencyBudget golden_budget(const nlohmann::json& g) {
  EfficiencyBudget b;
  b.fresnel = g["eta_fresnel"];
  b.filter = g["eta_filter"];
  b.photodiode = g["eta_pd"];
  b.electronics = g["eta_e"];
  return b;
}

void total_efficiency_check(const nlohmann::json& g) {
  const double total = golden_budget(g).total();
  const double expected = g["eta_total"];
  report(1, "total efficiency", std::abs(total - expected) <= 0.005,
         fmt::format("{:.6f} vs {} (tol 0.005)", total, expected));
}

void electronics_check(const nlohmann::json& g) {
  const double eta_e = electronic_efficiency(g["snr_db"]);
  report(2, "electronic efficiency", std::abs(eta_e - 0.9475) <= 1e-4,
         fmt::format("{:.6f} vs 0.9475 (tol 1e-4)", eta_e));
}

void fresnel_check() {
  const double f = fresnel_efficiency(1.0, 2.211);
  report(3, "fresnel efficiency", std::abs(f - 0.8578) <= 1e-3,
         fmt::format("{:.6f} vs 0.8578 (tol 1e-3)", f));
}

void forward_check(const nlohmann::json& g) {
  const auto parsed = netlist::parse(slurp(kData / "paper_chip.nl"));
  if (!std::holds_alternative<netlist::CircuitSpec>(parsed)) {
    report(4, "forward trace", false, std::get<netlist::ParseError>(parsed).to_string());
    return;
  }
  const auto result = simulate(std::get<netlist::CircuitSpec>(parsed), std::nullopt, true);
  const double lo = result.model.min_db(), hi = result.model.max_db();
  const double want_lo = g["raw_sq_db"], want_hi = g["raw_asq_db"];
  report(4, "forward trace", std::abs(lo - want_lo) <= 0.01 && std::abs(hi - want_hi) <= 0.01,
         fmt::format("min {:.4f} max {:.4f} vs {} / {} (tol 0.01)", lo, hi, want_lo, want_hi));
}

SqueezingReport golden_report(const nlohmann::json& g) {
  return build_report(RawMeasurement{g["raw_sq_db"], g["raw_asq_db"].get<double>(), g["raw_unc_db"]},
                      EfficiencyBudget::overall(g["eta_total"]));
}

void inference_check(const nlohmann::json& g) {
  const auto r = golden_report(g);
  const double want_sq = g["inferred_sq_db"], want_asq = g["inferred_asq_db"];
  const bool ok = std::abs(r.inferred_sq_db - want_sq) <= 0.05 &&
                  std::abs(*r.inferred_asq_db - want_asq) <= 0.05;
  report(5, "inferred squeezing", ok,
         fmt::format("{:.4f} / {:.4f} vs {} / {} (tol 0.05)", r.inferred_sq_db, *r.inferred_asq_db,
                     want_sq, want_asq));
}

void purity_check(const nlohmann::json& g) {
  const auto r = golden_report(g);
  report(6, "purity product", std::abs(*r.purity_product - 1.093) <= 0.01,
         fmt::format("{:.6f} vs 1.093 (tol 0.01)", *r.purity_product));
}

void extrapolation_check(const nlohmann::json& g) {
  const double ideal = extrapolate_squeezing(0.058014, g["extrapolation_pump_mw"], 1.0);
  const double lossy = extrapolate_squeezing(0.058014, g["extrapolation_pump_mw"], 0.95);
  const double lo = g["extrapolation_band_db"][0], hi = g["extrapolation_band_db"][1];
  report(7, "extrapolation", std::abs(ideal + 11.27) <= 0.05 && lossy >= lo && lossy <= hi,
         fmt::format("ideal {:.4f} vs -11.27 (tol 0.05); eta 0.95 {:.4f} in [{}, {}]", ideal, lossy,
                     lo, hi));
}

void oracle_check() {
  std::mt19937_64 rng(2024);
  const auto start = std::chrono::steady_clock::now();
  double worst = 0.0;
  for (int i = 0; i < 200; ++i) {
    const double r = uniform(rng, 0.0, 1.0);
    const double eta = uniform(rng, 0.3, 1.0);
    const double theta = uniform(rng, 0.0, 2 * std::numbers::pi);
    const double gaussian =
        quadrature_variance(apply_loss(apply_squeezer(vacuum(1), 0, r), 0, eta), 0, theta);
    const double fock = fock::quadrature_variance_fock(
        fock::apply_loss_fock(fock::squeezed_vacuum_fock(r), eta), theta);
    worst = std::max(worst, std::abs(gaussian - fock));
  }
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  report(8, "gaussian vs fock oracle", worst <= 1e-6 && seconds < 60.0,
         fmt::format("200 cases, max |diff| {:.3g} (tol 1e-6), {:.2f} s (limit 60)", worst, seconds));
}

void invariants_check() {
  std::mt19937_64 rng(5);
  double worst_symplectic = 0.0, worst_uncertainty = 0.0, worst_loss = 0.0;
  for (int i = 0; i < 500; ++i) {
    const std::size_t n = 1 + pick(rng, 4);
    const std::size_t m = pick(rng, n);
    std::size_t other = pick(rng, n);
    if (n > 1 && other == m) other = (m + 1) % n;
    const double r = uniform(rng, 0.0, 2.0), phi = uniform(rng, -7.0, 7.0);
    worst_symplectic = std::max({worst_symplectic, squeezer_channel(n, m, r, phi).symplectic_defect(),
                                 phase_shift_channel(n, m, phi).symplectic_defect()});
    if (n > 1) {
      worst_symplectic = std::max(
          worst_symplectic, coupler_channel(n, m, other, uniform(rng, 0.0, 1.0)).symplectic_defect());
    }
    const auto state = sqz::testing::random_state(rng, n);
    worst_uncertainty = std::max(worst_uncertainty, -min_uncertainty_eigenvalue(state));
    const double a = uniform(rng, 0.0, 1.0), b = uniform(rng, 0.0, 1.0);
    const auto twice = apply_loss(apply_loss(state, m, a), m, b);
    const auto once = apply_loss(state, m, a * b);
    const double scale = std::max(1.0, state.cov().cwiseAbs().maxCoeff());
    worst_loss = std::max(worst_loss, (twice.cov() - once.cov()).cwiseAbs().maxCoeff() / scale);
  }
  const bool ok = worst_symplectic <= 1e-10 && worst_uncertainty <= 1e-10 && worst_loss <= 1e-12;
  report(9, "gaussian invariants", ok,
         fmt::format("symplectic defect {:.3g} (tol 1e-10), uncertainty violation {:.3g} (tol "
                     "1e-10), loss composition {:.3g} (tol 1e-12)",
                     worst_symplectic, worst_uncertainty, worst_loss));
}

void parser_check() {
  std::mt19937_64 rng(11);
  std::size_t bad_positions = 0, crashes = 0, accepted = 0;
  for (int i = 0; i < 100000; ++i) {
    std::string bytes(pick(rng, 200), '\0');
    for (auto& c : bytes) c = static_cast<char>(pick(rng, 256));
    try {
      const auto result = netlist::parse(bytes);
      if (const auto* err = std::get_if<netlist::ParseError>(&result)) {
        if (err->line == 0 || err->column == 0) ++bad_positions;
      } else {
        ++accepted;
      }
    } catch (...) {
      ++crashes;
    }
  }
  std::size_t round_trip_failures = 0;
  for (int i = 0; i < 1000; ++i) {
    const auto spec = sqz::testing::random_spec(rng);
    const auto back = netlist::parse(netlist::to_source(spec));
    const auto* parsed = std::get_if<netlist::CircuitSpec>(&back);
    if (!parsed || !(*parsed == spec)) ++round_trip_failures;
  }
  report(10, "parser totality and round trip",
         crashes == 0 && bad_positions == 0 && round_trip_failures == 0,
         fmt::format("100000 random inputs: {} exceptions, {} bad positions; 1000 round trips: {} "
                     "mismatches",
                     crashes, bad_positions, round_trip_failures));
}

void determinism_check() {
  const fs::path dir = fs::temp_directory_path() / "sqzsim_acceptance";
  fs::create_directories(dir);
  auto run_once = [&](const std::string& tag) {
    std::ostringstream out, err;
    const int code = cli::run({"simulate", (kData / "paper_chip.nl").string(), "--seed", "12345",
                               "--csv", (dir / (tag + ".csv")).string(), "--report",
                               (dir / (tag + ".json")).string()},
                              out, err);
    return code;
  };
  const int a = run_once("a"), b = run_once("b");
  const bool same = a == 0 && b == 0 && slurp(dir / "a.csv") == slurp(dir / "b.csv") &&
                    slurp(dir / "a.json") == slurp(dir / "b.json");
  fs::remove_all(dir);
  report(11, "seeded determinism", same,
         fmt::format("exit codes {} / {}, trace and report {}", a, b,
                     same ? "byte-identical" : "differ"));
}

}  // namespace

int main() {
  try {
    const auto golden = nlohmann::json::parse(slurp(kData / "paper_expected.json"));
    total_efficiency_check(golden);
    electronics_check(golden);
    fresnel_check();
    forward_check(golden);
    inference_check(golden);
    purity_check(golden);
    extrapolation_check(golden);
    oracle_check();
    invariants_check();
    parser_check();
    determinism_check();
  } catch (const std::exception& e) {
    std::cout << "[FAIL] acceptance aborted: " << e.what() << "\n";
    return 1;
  }
  std::cout << (failures == 0 ? "all criteria passed\n" : fmt::format("{} criteria failed\n", failures));
  return failures == 0 ? 0 : 1;
}
