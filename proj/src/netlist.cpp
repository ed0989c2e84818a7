#include "sqz/netlist.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>
#include <unordered_set>

#include <fmt/format.h>

#include "sqz/budget.hpp"

namespace sqz::netlist {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
// e^{2r} must stay comfortably finite in every downstream covariance.
constexpr double kMaxSqueezing = 20.0;
constexpr std::size_t kMaxSweepPoints = 1'000'000;

struct Token {
  std::string_view text;
  std::size_t column = 0;
};

struct ParseFailure {
  ParseError error;
};

[[noreturn]] void fail(std::size_t line, std::size_t column, ErrorKind kind, std::string message) {
  throw ParseFailure{ParseError{line, column, kind, std::move(message)}};
}

std::vector<Token> tokenize(std::string_view line) {
  std::vector<Token> tokens;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    if (i >= line.size()) break;
    const std::size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t') ++i;
    tokens.push_back({line.substr(start, i - start), start + 1});
  }
  return tokens;
}

bool is_identifier(std::string_view s) {
  if (s.empty() || s[0] < 'a' || s[0] > 'z') return false;
  for (char c : s) {
    if (!((c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '_')) return false;
  }
  return true;
}

bool is_digit(char c) { return c >= '0' && c <= '9'; }

// Decimal float with optional sign and exponent; no inf/nan/hex.
std::optional<double> parse_number(std::string_view s) {
  std::size_t i = 0;
  if (i < s.size() && (s[i] == '+' || s[i] == '-')) ++i;
  std::size_t digits = 0;
  while (i < s.size() && is_digit(s[i])) ++i, ++digits;
  if (i < s.size() && s[i] == '.') {
    ++i;
    while (i < s.size() && is_digit(s[i])) ++i, ++digits;
  }
  if (digits == 0) return std::nullopt;
  if (i < s.size() && (s[i] == 'e' || s[i] == 'E')) {
    ++i;
    if (i < s.size() && (s[i] == '+' || s[i] == '-')) ++i;
    std::size_t exp_digits = 0;
    while (i < s.size() && is_digit(s[i])) ++i, ++exp_digits;
    if (exp_digits == 0) return std::nullopt;
  }
  if (i != s.size()) return std::nullopt;

  std::string_view body = s;
  if (!body.empty() && body[0] == '+') body.remove_prefix(1);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(body.data(), body.data() + body.size(), value);
  if (ec != std::errc() || ptr != body.data() + body.size() || !std::isfinite(value)) {
    return std::nullopt;
  }
  return value;
}

std::string format_number(double v) {
  std::array<char, 64> buf{};
  const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  if (ec != std::errc()) throw std::logic_error("number formatting failed");
  return std::string(buf.data(), ptr);
}

struct Range {
  double lo = -kInf;
  double hi = kInf;
  bool lo_open = false;

  bool contains(double v) const { return (lo_open ? v > lo : v >= lo) && v <= hi; }
  std::string describe() const {
    if (hi == kInf) return fmt::format("{} {}", lo_open ? ">" : ">=", format_number(lo));
    return fmt::format("in [{}, {}]", format_number(lo), format_number(hi));
  }
};

constexpr Range kAnyValue{};
constexpr Range kUnit{0.0, 1.0};
constexpr Range kNonNegative{0.0, kInf};
constexpr Range kPositive{0.0, kInf, true};
constexpr Range kSqueezing{0.0, kMaxSqueezing};

enum class ValueKind { Number, Label, Sweep };

struct KeyRule {
  std::string_view key;
  ValueKind kind = ValueKind::Number;
  Range range;
};

struct Param {
  Token token;  // whole key=value token
  Token value;
  double number = 0.0;
  std::string label;
  PhaseSweep sweep;
};

struct RawStatement {
  Token keyword;
  std::vector<Token> modes;
  std::map<std::string_view, Param> params;

  const Param* find(std::string_view key) const {
    auto it = params.find(key);
    return it == params.end() ? nullptr : &it->second;
  }
};

constexpr std::array kSqueezerRules{
    KeyRule{"r", ValueKind::Number, kSqueezing},
    KeyRule{"pump_mw", ValueKind::Number, kNonNegative},
    KeyRule{"gain", ValueKind::Number, kNonNegative},
    KeyRule{"phase", ValueKind::Number, kAnyValue},
    KeyRule{"excess", ValueKind::Number, kNonNegative},
};
constexpr std::array kPhaseShiftRules{KeyRule{"theta", ValueKind::Number, kAnyValue}};
constexpr std::array kCouplerRules{KeyRule{"ratio", ValueKind::Number, kUnit}};
constexpr std::array kLossRules{
    KeyRule{"eta", ValueKind::Number, kUnit},
    KeyRule{"label", ValueKind::Label, kAnyValue},
};
constexpr std::array kHomodyneRules{
    KeyRule{"eta_pd", ValueKind::Number, kUnit},
    KeyRule{"eta_e", ValueKind::Number, kUnit},
    KeyRule{"ratio", ValueKind::Number, kUnit},
    KeyRule{"visibility", ValueKind::Number, kUnit},
    KeyRule{"rbw", ValueKind::Number, kPositive},
    KeyRule{"vbw", ValueKind::Number, kPositive},
    KeyRule{"sweep_time", ValueKind::Number, kPositive},
    KeyRule{"center_freq", ValueKind::Number, kNonNegative},
    KeyRule{"sweep", ValueKind::Sweep, kAnyValue},
};

class Parser {
 public:
  explicit Parser(std::string_view source) : source_(source) {}

  CircuitSpec run() {
    std::size_t line_no = 0;
    std::size_t pos = 0;
    std::size_t last_line_len = 0;
    while (true) {
      ++line_no;
      const std::size_t nl = source_.find('\n', pos);
      std::string_view line =
          source_.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
      last_line_len = line.size();
      if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
      if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
      const auto tokens = tokenize(line);
      if (!tokens.empty()) statement(line_no, tokens);
      if (nl == std::string_view::npos) break;
      pos = nl + 1;
    }
    if (!measurement_) {
      fail(line_no, last_line_len + 1, ErrorKind::MissingMeasurement,
           "no homodyne measurement statement");
    }
    spec_.measurement = *measurement_;
    return std::move(spec_);
  }

 private:
  void statement(std::size_t line, const std::vector<Token>& tokens) {
    const Token& kw = tokens.front();
    const bool known = kw.text == "modes:" || kw.text == "squeezer" || kw.text == "phaseshift" ||
                       kw.text == "coupler" || kw.text == "loss" || kw.text == "homodyne";
    if (!known) {
      fail(line, kw.column, ErrorKind::UnknownKeyword,
           fmt::format("unknown keyword '{}'", printable(kw.text)));
    }
    if (measurement_) {
      if (kw.text == "homodyne") {
        fail(line, kw.column, ErrorKind::DuplicateMeasurement,
             fmt::format("second homodyne measurement (first on line {})", measurement_line_));
      }
      fail(line, kw.column, ErrorKind::Malformed,
           "statement after the homodyne measurement, which must come last");
    }

    if (kw.text == "modes:") {
      declare_modes(line, tokens);
    } else if (kw.text == "squeezer") {
      squeezer(line, read(line, tokens, 1, kSqueezerRules));
    } else if (kw.text == "phaseshift") {
      auto raw = read(line, tokens, 1, kPhaseShiftRules);
      require(line, raw, "theta");
      resolve(line, raw);
      spec_.statements.emplace_back(PhaseShift{std::string(raw.modes[0].text), raw.find("theta")->number});
    } else if (kw.text == "coupler") {
      auto raw = read(line, tokens, 2, kCouplerRules);
      require(line, raw, "ratio");
      resolve(line, raw);
      if (raw.modes[0].text == raw.modes[1].text) {
        fail(line, raw.modes[1].column, ErrorKind::Malformed, "coupler needs two distinct modes");
      }
      spec_.statements.emplace_back(Coupler{std::string(raw.modes[0].text),
                                            std::string(raw.modes[1].text),
                                            raw.find("ratio")->number});
    } else if (kw.text == "loss") {
      auto raw = read(line, tokens, 1, kLossRules);
      require(line, raw, "eta");
      resolve(line, raw);
      Loss loss{std::string(raw.modes[0].text), raw.find("eta")->number, std::nullopt};
      if (const Param* label = raw.find("label")) loss.label = label->label;
      spec_.statements.emplace_back(std::move(loss));
    } else {
      homodyne(line, read(line, tokens, 1, kHomodyneRules));
    }
  }

  void declare_modes(std::size_t line, const std::vector<Token>& tokens) {
    if (tokens.size() < 2) {
      fail(line, tokens[0].column, ErrorKind::Malformed, "modes: needs at least one mode name");
    }
    for (std::size_t i = 1; i < tokens.size(); ++i) {
      const Token& t = tokens[i];
      if (!is_identifier(t.text)) {
        fail(line, t.column, ErrorKind::Malformed,
             fmt::format("invalid mode name '{}' (lowercase identifier expected)", printable(t.text)));
      }
      if (!declared_.insert(std::string(t.text)).second) {
        fail(line, t.column, ErrorKind::Malformed,
             fmt::format("mode '{}' declared twice", t.text));
      }
      spec_.modes.emplace_back(t.text);
    }
  }

  void squeezer(std::size_t line, const RawStatement& raw) {
    const Param* r = raw.find("r");
    const Param* pump = raw.find("pump_mw");
    const Param* gain = raw.find("gain");
    if (r && (pump || gain)) {
      fail(line, (pump ? pump : gain)->token.column, ErrorKind::Malformed,
           "squeezer takes either r= or pump_mw= with gain=, not both");
    }
    if (!r && !(pump && gain)) {
      fail(line, raw.keyword.column, ErrorKind::Malformed,
           "squeezer needs r= or both pump_mw= and gain=");
    }
    Squeezer sq;
    sq.mode = std::string(raw.modes[0].text);
    if (r) {
      sq.drive = DirectSqueezing{r->number};
    } else {
      sq.drive = PumpedSqueezing{pump->number, gain->number};
      if (!(pump_to_r(pump->number, gain->number) <= kMaxSqueezing)) {
        fail(line, gain->value.column, ErrorKind::OutOfRange,
             fmt::format("gain*sqrt(pump_mw) must be <= {}", format_number(kMaxSqueezing)));
      }
    }
    if (const Param* p = raw.find("phase")) sq.phase = p->number;
    if (const Param* p = raw.find("excess")) sq.excess = p->number;
    resolve(line, raw);
    spec_.statements.emplace_back(std::move(sq));
  }

  void homodyne(std::size_t line, const RawStatement& raw) {
    for (auto key : {"eta_pd", "eta_e", "ratio", "sweep"}) require(line, raw, key);
    Homodyne hd;
    hd.mode = std::string(raw.modes[0].text);
    hd.config.eta_pd = raw.find("eta_pd")->number;
    hd.config.eta_e = raw.find("eta_e")->number;
    hd.config.coupler_ratio = raw.find("ratio")->number;
    if (const Param* p = raw.find("visibility")) hd.config.visibility = p->number;
    if (const Param* p = raw.find("rbw")) hd.config.rbw_hz = p->number;
    if (const Param* p = raw.find("vbw")) hd.config.vbw_hz = p->number;
    if (const Param* p = raw.find("sweep_time")) hd.config.sweep_time_s = p->number;
    if (const Param* p = raw.find("center_freq")) hd.config.center_freq_hz = p->number;
    if (hd.config.vbw_hz > hd.config.rbw_hz) {
      const Param* at = raw.find("vbw") ? raw.find("vbw") : raw.find("rbw");
      fail(line, at->value.column, ErrorKind::OutOfRange,
           fmt::format("vbw ({}) must not exceed rbw ({})", format_number(hd.config.vbw_hz),
                       format_number(hd.config.rbw_hz)));
    }
    hd.sweep = raw.find("sweep")->sweep;
    resolve(line, raw);
    measurement_ = std::move(hd);
    measurement_line_ = line;
  }

  template <std::size_t N>
  RawStatement read(std::size_t line, const std::vector<Token>& tokens, std::size_t n_modes,
                    const std::array<KeyRule, N>& rules) {
    RawStatement raw;
    raw.keyword = tokens[0];
    std::size_t i = 1;
    for (; i < tokens.size() && raw.modes.size() < n_modes; ++i) {
      const Token& t = tokens[i];
      if (t.text.find('=') != std::string_view::npos || !is_identifier(t.text)) {
        fail(line, t.column, ErrorKind::Malformed,
             fmt::format("expected a mode name, got '{}'", printable(t.text)));
      }
      raw.modes.push_back(t);
    }
    if (raw.modes.size() < n_modes) {
      fail(line, raw.keyword.column, ErrorKind::Malformed,
           fmt::format("'{}' needs {} mode name(s)", raw.keyword.text, n_modes));
    }
    for (; i < tokens.size(); ++i) {
      const Token& t = tokens[i];
      const auto eq = t.text.find('=');
      if (eq == std::string_view::npos) {
        fail(line, t.column, ErrorKind::Malformed,
             fmt::format("expected key=value, got '{}'", printable(t.text)));
      }
      const std::string_view key = t.text.substr(0, eq);
      const KeyRule* rule = nullptr;
      for (const auto& candidate : rules) {
        if (candidate.key == key) rule = &candidate;
      }
      if (!rule) {
        fail(line, t.column, ErrorKind::UnknownKeyword,
             fmt::format("unknown parameter '{}' for '{}'", printable(key), raw.keyword.text));
      }
      if (raw.params.count(key)) {
        fail(line, t.column, ErrorKind::Malformed, fmt::format("parameter '{}' given twice", key));
      }
      Param p;
      p.token = t;
      p.value = Token{t.text.substr(eq + 1), t.column + eq + 1};
      read_value(line, *rule, p);
      raw.params.emplace(key, std::move(p));
    }
    return raw;
  }

  void read_value(std::size_t line, const KeyRule& rule, Param& p) {
    switch (rule.kind) {
      case ValueKind::Number: {
        p.number = number(line, p.value);
        if (!rule.range.contains(p.number)) {
          fail(line, p.value.column, ErrorKind::OutOfRange,
               fmt::format("{}={} out of range, must be {}", rule.key, p.value.text,
                           rule.range.describe()));
        }
        break;
      }
      case ValueKind::Label:
        if (!is_identifier(p.value.text)) {
          fail(line, p.value.column, ErrorKind::Malformed,
               fmt::format("invalid label '{}' (lowercase identifier expected)",
                           printable(p.value.text)));
        }
        p.label = std::string(p.value.text);
        break;
      case ValueKind::Sweep:
        p.sweep = sweep(line, p.value);
        break;
    }
  }

  double number(std::size_t line, const Token& t) {
    const auto value = parse_number(t.text);
    if (!value) {
      fail(line, t.column, ErrorKind::BadNumber,
           fmt::format("'{}' is not a finite decimal number", printable(t.text)));
    }
    return *value;
  }

  PhaseSweep sweep(std::size_t line, const Token& t) {
    std::array<Token, 3> parts;
    std::size_t start = 0;
    for (std::size_t k = 0; k < 3; ++k) {
      const std::size_t colon = t.text.find(':', start);
      if ((k < 2) == (colon == std::string_view::npos)) {
        fail(line, t.column, ErrorKind::BadNumber,
             fmt::format("sweep '{}' must have the form start:stop:count", printable(t.text)));
      }
      const std::size_t end = k < 2 ? colon : t.text.size();
      parts[k] = Token{t.text.substr(start, end - start), t.column + start};
      start = end + 1;
    }
    PhaseSweep s;
    s.start = number(line, parts[0]);
    s.stop = number(line, parts[1]);
    const std::string_view count = parts[2].text;
    bool digits_only = !count.empty();
    for (char c : count) digits_only = digits_only && is_digit(c);
    if (!digits_only) {
      fail(line, parts[2].column, ErrorKind::BadNumber,
           fmt::format("sweep count '{}' is not a non-negative integer", printable(count)));
    }
    std::uint64_t n = 0;
    const auto [ptr, ec] = std::from_chars(count.data(), count.data() + count.size(), n);
    if (ec != std::errc() || n < 2 || n > kMaxSweepPoints) {
      fail(line, parts[2].column, ErrorKind::OutOfRange,
           fmt::format("sweep count must be in [2, {}]", kMaxSweepPoints));
    }
    s.count = static_cast<std::size_t>(n);
    return s;
  }

  void require(std::size_t line, const RawStatement& raw, std::string_view key) {
    if (!raw.find(key)) {
      fail(line, raw.keyword.column, ErrorKind::Malformed,
           fmt::format("'{}' is missing required parameter '{}'", raw.keyword.text, key));
    }
  }

  void resolve(std::size_t line, const RawStatement& raw) {
    for (const Token& m : raw.modes) {
      if (!declared_.count(std::string(m.text))) {
        fail(line, m.column, ErrorKind::UndeclaredMode, fmt::format("mode '{}' is not declared", m.text));
      }
    }
  }

  // Non-printable bytes are escaped so diagnostics stay one line.
  static std::string printable(std::string_view s) {
    std::string out;
    for (unsigned char c : s) {
      if (c >= 0x20 && c < 0x7f) {
        out.push_back(static_cast<char>(c));
      } else {
        out += fmt::format("\\x{:02x}", c);
      }
    }
    return out;
  }

  std::string_view source_;
  CircuitSpec spec_;
  std::unordered_set<std::string> declared_;
  std::optional<Homodyne> measurement_;
  std::size_t measurement_line_ = 0;
};

}  // namespace

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::UnknownKeyword: return "unknown-keyword";
    case ErrorKind::UndeclaredMode: return "undeclared-mode";
    case ErrorKind::BadNumber: return "bad-number";
    case ErrorKind::OutOfRange: return "out-of-range";
    case ErrorKind::DuplicateMeasurement: return "duplicate-measurement";
    case ErrorKind::MissingMeasurement: return "missing-measurement";
    case ErrorKind::Malformed: return "malformed";
  }
  return "unknown";
}

std::string ParseError::to_string() const {
  return fmt::format("{}:{}: {}: {}", line, column, netlist::to_string(kind), message);
}

double Squeezer::squeezing_parameter() const {
  if (const auto* direct = std::get_if<DirectSqueezing>(&drive)) return direct->r;
  const auto& pumped = std::get<PumpedSqueezing>(drive);
  return pump_to_r(pumped.pump_mw, pumped.gain);
}

std::size_t CircuitSpec::mode_index(std::string_view name) const {
  for (std::size_t i = 0; i < modes.size(); ++i) {
    if (modes[i] == name) return i;
  }
  throw std::out_of_range(fmt::format("mode '{}' is not declared", name));
}

ParseResult parse(std::string_view source) {
  try {
    return Parser(source).run();
  } catch (ParseFailure& failure) {
    return std::move(failure.error);
  }
}

std::string to_source(const CircuitSpec& spec) {
  std::string out = "# sqzsim netlist v1\n";
  out += "modes:";
  for (const auto& m : spec.modes) out += " " + m;
  out += "\n";
  const auto n = [](double v) { return format_number(v); };
  for (const auto& statement : spec.statements) {
    std::visit(
        [&](const auto& s) {
          using T = std::decay_t<decltype(s)>;
          if constexpr (std::is_same_v<T, Squeezer>) {
            out += "squeezer " + s.mode;
            if (const auto* d = std::get_if<DirectSqueezing>(&s.drive)) {
              out += " r=" + n(d->r);
            } else {
              const auto& p = std::get<PumpedSqueezing>(s.drive);
              out += " pump_mw=" + n(p.pump_mw) + " gain=" + n(p.gain);
            }
            out += " phase=" + n(s.phase) + " excess=" + n(s.excess) + "\n";
          } else if constexpr (std::is_same_v<T, PhaseShift>) {
            out += "phaseshift " + s.mode + " theta=" + n(s.theta) + "\n";
          } else if constexpr (std::is_same_v<T, Coupler>) {
            out += "coupler " + s.mode_a + " " + s.mode_b + " ratio=" + n(s.ratio) + "\n";
          } else {
            out += "loss " + s.mode + " eta=" + n(s.eta);
            if (s.label) out += " label=" + *s.label;
            out += "\n";
          }
        },
        statement);
  }
  const Homodyne& hd = spec.measurement;
  const HomodyneConfig& c = hd.config;
  out += fmt::format(
      "homodyne {} eta_pd={} eta_e={} ratio={} visibility={} rbw={} vbw={} sweep_time={} "
      "center_freq={} sweep={}:{}:{}\n",
      hd.mode, n(c.eta_pd), n(c.eta_e), n(c.coupler_ratio), n(c.visibility), n(c.rbw_hz),
      n(c.vbw_hz), n(c.sweep_time_s), n(c.center_freq_hz), n(hd.sweep.start), n(hd.sweep.stop),
      hd.sweep.count);
  return out;
}

std::span<const GaussianChannel> CompiledCircuit::preparation() const {
  return std::span<const GaussianChannel>(channels).first(channels.size() - 1);
}

CompiledCircuit compile(const CircuitSpec& spec) {
  CompiledCircuit out;
  out.n_modes = spec.modes.size();
  const std::size_t n = out.n_modes;
  for (const auto& statement : spec.statements) {
    out.channels.push_back(std::visit(
        [&](const auto& s) -> GaussianChannel {
          using T = std::decay_t<decltype(s)>;
          if constexpr (std::is_same_v<T, Squeezer>) {
            return squeezer_channel(n, spec.mode_index(s.mode), s.squeezing_parameter(), s.phase,
                                    s.excess);
          } else if constexpr (std::is_same_v<T, PhaseShift>) {
            return phase_shift_channel(n, spec.mode_index(s.mode), s.theta);
          } else if constexpr (std::is_same_v<T, Coupler>) {
            return coupler_channel(n, spec.mode_index(s.mode_a), spec.mode_index(s.mode_b), s.ratio);
          } else {
            return loss_channel(n, spec.mode_index(s.mode), s.eta);
          }
        },
        statement));
  }
  out.plan.mode = spec.mode_index(spec.measurement.mode);
  out.plan.config = spec.measurement.config;
  out.plan.sweep = spec.measurement.sweep;
  out.plan.eta_hd = effective_efficiency(spec.measurement.config);
  out.channels.push_back(loss_channel(n, out.plan.mode, out.plan.eta_hd));
  return out;
}

}  // namespace sqz::netlist
