#pragma once

// Line-oriented chip description:
//
//   # sqzsim netlist v1
//   modes: sig
//   squeezer sig pump_mw=40 gain=0.058014
//   loss sig eta=0.85777 label=fresnel
//   homodyne sig eta_pd=0.88 eta_e=0.94752 ratio=0.5 sweep=0:6.283185307179586:720
//
// One statement per line, `#` starts a comment, parameters are key=value.
// The homodyne statement is mandatory and must come last.

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "sqz/gaussian.hpp"
#include "sqz/homodyne.hpp"

namespace sqz::netlist {

enum class ErrorKind {
  UnknownKeyword,
  UndeclaredMode,
  BadNumber,
  OutOfRange,
  DuplicateMeasurement,
  MissingMeasurement,
  Malformed,
};

std::string_view to_string(ErrorKind kind);

struct ParseError {
  std::size_t line = 0;    // 1-based
  std::size_t column = 0;  // 1-based byte offset of the offending token
  ErrorKind kind = ErrorKind::Malformed;
  std::string message;

  /// "line:column: kind: message"
  std::string to_string() const;
};

struct DirectSqueezing {
  double r = 0.0;
  bool operator==(const DirectSqueezing&) const = default;
};

struct PumpedSqueezing {
  double pump_mw = 0.0;
  double gain = 0.0;
  bool operator==(const PumpedSqueezing&) const = default;
};

struct Squeezer {
  std::string mode;
  std::variant<DirectSqueezing, PumpedSqueezing> drive;
  double phase = 0.0;
  double excess = 0.0;

  double squeezing_parameter() const;
  bool operator==(const Squeezer&) const = default;
};

struct PhaseShift {
  std::string mode;
  double theta = 0.0;
  bool operator==(const PhaseShift&) const = default;
};

struct Coupler {
  std::string mode_a;
  std::string mode_b;
  double ratio = 0.5;
  bool operator==(const Coupler&) const = default;
};

struct Loss {
  std::string mode;
  double eta = 1.0;
  std::optional<std::string> label;
  bool operator==(const Loss&) const = default;
};

using Statement = std::variant<Squeezer, PhaseShift, Coupler, Loss>;

struct Homodyne {
  std::string mode;
  HomodyneConfig config;
  PhaseSweep sweep;
  bool operator==(const Homodyne&) const = default;
};

struct CircuitSpec {
  std::vector<std::string> modes;
  std::vector<Statement> statements;
  Homodyne measurement;

  /// Position of `name` in `modes`; throws std::out_of_range if undeclared.
  std::size_t mode_index(std::string_view name) const;
  bool operator==(const CircuitSpec&) const = default;
};

using ParseResult = std::variant<CircuitSpec, ParseError>;

/// Total over arbitrary bytes: returns a validated spec or the first error.
ParseResult parse(std::string_view source);

/// Canonical text form; parse(to_source(spec)) == spec.
std::string to_source(const CircuitSpec& spec);

struct MeasurementPlan {
  std::size_t mode = 0;
  HomodyneConfig config;
  PhaseSweep sweep;
  double eta_hd = 1.0;
};

/// One channel per statement in order, with the homodyne's effective
/// detection loss appended as the final channel.
struct CompiledCircuit {
  std::size_t n_modes = 0;
  std::vector<GaussianChannel> channels;
  MeasurementPlan plan;

  /// Channels up to (not including) detection.
  std::span<const GaussianChannel> preparation() const;
  const GaussianChannel& detection() const { return channels.back(); }
};

CompiledCircuit compile(const CircuitSpec& spec);

}  // namespace sqz::netlist
