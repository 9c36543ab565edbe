#include "loschmidt/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <regex>
#include <set>
#include <sstream>

#include "loschmidt/models.hpp"
#include "loschmidt/spinor.hpp"

namespace loschmidt::cli {

namespace {

using Json = nlohmann::ordered_json;
constexpr double kPi = std::numbers::pi;

const std::map<std::string, Command> kCommands{{"quasistatic", Command::Quasistatic},
                                               {"quench", Command::Quench},
                                               {"uhlmann", Command::Uhlmann},
                                               {"scan", Command::Scan},
                                               {"verify", Command::Verify}};

const std::map<std::string, ModelKind> kModels{{"two-level", ModelKind::TwoLevel},
                                               {"three-level", ModelKind::ThreeLevel},
                                               {"creutz", ModelKind::Creutz}};

const std::map<std::string, EvalMode> kModes{{"closed-form", EvalMode::ClosedForm},
                                             {"numeric", EvalMode::Numeric},
                                             {"both", EvalMode::Both}};

const char* kUsageNotes =
    "Parameters (radians only; reals may be written as pi, pi/3, 2*pi/5):\n"
    "  two-level    Rx Ry Rz beta [E=1] [R0x R0y R0z]\n"
    "  three-level  R theta phi beta\n"
    "  creutz       m Theta [k_points=1024]\n"
    "Axes: name:min:max:n[:log]. Temperature axes are named T, time axes t.\n";

struct ModelParams {
  std::vector<std::string> required;
  std::set<std::string> optional;
  std::map<std::string, double> defaults;
};

ModelParams model_params(ModelKind model) {
  switch (model) {
    case ModelKind::TwoLevel:
      return {{"Rx", "Ry", "Rz", "beta"}, {"E", "R0x", "R0y", "R0z"}, {{"E", 1.0}}};
    case ModelKind::ThreeLevel:
      return {{"R", "theta", "phi", "beta"}, {}, {}};
    case ModelKind::Creutz:
      return {{"m", "Theta", "k_points"}, {}, {{"k_points", 1024.0}}};
  }
  return {};
}

template <class T>
std::string name_of(const std::map<std::string, T>& table, T value) {
  for (const auto& [k, v] : table) {
    if (v == value) return k;
  }
  return "?";
}

[[noreturn]] void usage(const std::string& message) { throw Error(ErrorKind::Usage, message); }

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

GridAxis parse_axis(const std::string& spec) {
  std::vector<std::string> parts;
  std::stringstream in(spec);
  for (std::string item; std::getline(in, item, ':');) parts.push_back(item);
  if (parts.size() != 4 && parts.size() != 5) {
    usage("--axis expects name:min:max:n[:log], got '" + spec + "'");
  }
  if (parts.size() == 5 && parts[4] != "log") {
    usage("--axis scale must be 'log' when given, got '" + parts[4] + "'");
  }
  GridAxis axis;
  axis.name = parts[0];
  if (axis.name.empty()) usage("--axis needs a name in '" + spec + "'");
  try {
    axis.min = parse_real(parts[1]);
    axis.max = parse_real(parts[2]);
    std::size_t used = 0;
    axis.n = std::stoi(parts[3], &used);
    if (used != parts[3].size()) throw std::invalid_argument(parts[3]);
  } catch (const Error&) {
    usage("--axis has a malformed number in '" + spec + "'");
  } catch (const std::exception&) {
    usage("--axis has a malformed number in '" + spec + "'");
  }
  axis.scale = parts.size() == 5 ? AxisScale::Log : AxisScale::Linear;
  if (!(axis.min < axis.max) || axis.n < 2 || (axis.scale == AxisScale::Log && axis.min <= 0.0)) {
    usage("--axis '" + spec + "' needs min < max, n >= 2 and min > 0 on log scale");
  }
  return axis;
}

bool has_axis(const RunConfig& c, const std::string& name) {
  return std::any_of(c.axes.begin(), c.axes.end(), [&](const GridAxis& a) { return a.name == name; });
}

void check_axes(const RunConfig& c) {
  const auto n = c.axes.size();
  auto name = [&](std::size_t i) { return c.axes[i].name; };
  switch (c.command) {
    case Command::Quasistatic:
    case Command::Quench:
      if (c.model == ModelKind::Creutz) usage("--model creutz has no dynamics; use uhlmann");
      if (n == 1 && name(0) == "t") return;
      if (n == 2 && (name(0) == "T" || name(0) == "beta") && name(1) == "t") return;
      usage("--axis for dynamics must be t, or T (or beta) followed by t");
    case Command::Uhlmann:
      if (c.model == ModelKind::TwoLevel) usage("--model two-level has no uhlmann loop; use creutz or three-level");
      if (n == 1 && name(0) == "T") return;
      if (n == 2 && name(0) == "T") {
        if (c.model == ModelKind::Creutz && (name(1) == "m" || name(1) == "Theta")) return;
        if (c.model == ModelKind::ThreeLevel && name(1) == "R") return;
      }
      usage("--axis for uhlmann must be T, optionally followed by a model parameter (m, Theta or R)");
    case Command::Scan:
      if (n != 2) usage("--axis must be given twice for scan");
      if (name(1) == "t") {
        if (c.model == ModelKind::Creutz) usage("--model creutz has no dynamics; use a parameter axis");
        if (name(0) == "T" || name(0) == "beta") return;
        usage("--axis for a dynamics scan must be T (or beta) followed by t");
      }
      if (c.model == ModelKind::TwoLevel) usage("--model two-level scans need a time axis t");
      if (name(0) != "T") usage("--axis for an uhlmann scan must start with T");
      if (c.model == ModelKind::Creutz && (name(1) == "m" || name(1) == "Theta")) return;
      if (c.model == ModelKind::ThreeLevel && name(1) == "R") return;
      usage("--axis '" + name(1) + "' is not a scannable parameter of this model");
    case Command::Verify:
      if (n != 0) usage("--axis is not used by verify");
      return;
  }
}

bool uhlmann_run(const RunConfig& c) {
  return c.command == Command::Uhlmann ||
         (c.command == Command::Scan && c.axes.size() == 2 && c.axes[1].name != "t");
}

void check_params(RunConfig& c) {
  const ModelParams mp = model_params(c.model);
  // The three-level loop only depends on R and the temperature.
  const std::vector<std::string> required =
      c.model == ModelKind::ThreeLevel && uhlmann_run(c) ? std::vector<std::string>{"R"}
                                                         : mp.required;
  std::set<std::string> known(mp.required.begin(), mp.required.end());
  known.insert(mp.optional.begin(), mp.optional.end());
  for (const auto& [k, v] : c.params) {
    if (!known.count(k)) usage("--param '" + k + "' is not a parameter of this model");
  }
  for (const auto& [k, v] : mp.defaults) c.params.emplace(k, v);
  for (const auto& k : required) {
    const bool covered = has_axis(c, k) || (k == "beta" && has_axis(c, "T"));
    if (!c.params.count(k) && !covered) usage("--param " + k + "=... is required for this model");
  }
  if (c.model == ModelKind::Creutz) {
    const double k = c.params.at("k_points");
    if (k != std::floor(k) || k < 4 || k > 1e7) usage("--param k_points must be an integer >= 4");
  }
}

double param(const RunConfig& c, const std::string& key) {
  const auto it = c.params.find(key);
  if (it == c.params.end()) {
    throw Error(ErrorKind::Usage, "--param " + key + "=... is required here");
  }
  return it->second;
}

double inverse_temperature(const std::string& axis_name, double x) {
  if (axis_name == "beta") return x;
  if (!(x > 0.0)) throw Error(ErrorKind::DomainError, "temperature must be positive");
  return 1.0 / x;
}

// ------------------------------------------------------------- evaluators

struct Evaluators {
  PlaneEvaluator closed;
  PlaneEvaluator numeric;
};

Vec3 field(const RunConfig& c) { return {param(c, "Rx"), param(c, "Ry"), param(c, "Rz")}; }

bool has_r0(const RunConfig& c) {
  return c.params.count("R0x") || c.params.count("R0y") || c.params.count("R0z");
}

Vec3 initial_field(const RunConfig& c) {
  auto get = [&](const char* k) { return c.params.count(k) ? c.params.at(k) : 0.0; };
  return {get("R0x"), get("R0y"), get("R0z")};
}

// Dynamics evaluators take (temperature-like x1, t).
Evaluators dynamics_evaluators(const RunConfig& c, bool quench, const std::string& x1_name) {
  Evaluators e;
  if (c.model == ModelKind::TwoLevel) {
    const Vec3 r = field(c);
    TwoLevelSpec{r, 0.0}.validate();
    if (!quench) {
      e.closed = [r, x1_name](double x, double t) {
        return two_level_quasistatic_g({r, inverse_temperature(x1_name, x)}, t);
      };
      e.numeric = [r, x1_name](double x, double t) {
        const TwoLevelSpec spec{r, inverse_temperature(x1_name, x)};
        return loschmidt_amplitude(spec.thermal_state(), spec.hamiltonian(), t);
      };
    } else if (has_r0(c)) {
      const Vec3 r0 = initial_field(c);
      two_level_quench_initial_state(r0);
      e.closed = [r0, r](double, double t) { return two_level_quench_g(r0, r, t); };
      e.numeric = [r0, r](double, double t) {
        return loschmidt_amplitude(two_level_quench_initial_state(r0), bloch_operator(r), t);
      };
    } else {
      const double energy = param(c, "E");
      e.closed = [energy, r, x1_name](double x, double t) {
        return two_level_thermal_quench_g(energy, inverse_temperature(x1_name, x), r, t);
      };
      e.numeric = [energy, r, x1_name](double x, double t) {
        return loschmidt_amplitude(
            two_level_thermal_initial_state(energy, inverse_temperature(x1_name, x)),
            bloch_operator(r), t);
      };
    }
    return e;
  }
  const double r = param(c, "R");
  const double theta = param(c, "theta");
  const double phi = param(c, "phi");
  ThreeLevelSpec{r, theta, phi, 0.0}.validate();
  const ComplexMatrix h0 = three_level_hamiltonian(r);
  const ComplexMatrix hf = quench ? three_level_quench_hamiltonian(r, theta, phi) : h0;
  e.closed = [=](double x, double t) {
    const ThreeLevelSpec spec{r, theta, phi, inverse_temperature(x1_name, x)};
    return quench ? three_level_quench_g(spec, t) : three_level_quasistatic_g(spec, t);
  };
  e.numeric = [=](double x, double t) {
    return loschmidt_amplitude(DensityMatrix::thermal(h0, inverse_temperature(x1_name, x)), hf, t);
  };
  return e;
}

// Uhlmann evaluators take (T, parameter value) for the named parameter.
Evaluators uhlmann_evaluators(const RunConfig& c, const std::string& p_name) {
  Evaluators e;
  const int steps = c.n_steps;
  if (c.model == ModelKind::Creutz) {
    // The scanned parameter comes from the axis, so it may be absent from --param.
    auto fixed = [&](const std::string& key) { return key == p_name ? 0.0 : param(c, key); };
    CreutzSpec base{fixed("m"), fixed("Theta"), static_cast<int>(param(c, "k_points"))};
    auto spec_at = [base, p_name](double p) {
      CreutzSpec s = base;
      (p_name == "m" ? s.m : s.theta_flux) = p;
      return s;
    };
    e.closed = [spec_at](double t, double p) {
      return Complex(two_band_uhlmann_closed_form(spec_at(p), t), 0.0);
    };
    e.numeric = [spec_at, steps](double t, double p) {
      return uhlmann_loschmidt(creutz_path(spec_at(p), t, steps));
    };
    return e;
  }
  e.closed = [](double t, double r) {
    return Complex(three_level_uhlmann_closed_form(r, inverse_temperature("T", t)), 0.0);
  };
  e.numeric = [steps](double t, double r) {
    return uhlmann_loschmidt(three_level_circle_path(r, inverse_temperature("T", t), steps));
  };
  return e;
}

std::string model_parameter_default_axis(ModelKind model) {
  return model == ModelKind::Creutz ? "m" : "R";
}

void record_config(PhaseDiagram& d, const RunConfig& c) {
  d.metadata["command"] = name_of(kCommands, c.command);
  d.metadata["model"] = name_of(kModels, c.model);
  d.metadata["mode"] = name_of(kModes, c.mode);
  d.metadata["n_steps"] = std::to_string(c.n_steps);
  for (const auto& [k, v] : c.params) d.metadata["param." + k] = fmt(v);
}

// Largest |closed - numeric| over the cells of a closed-form diagram.
double compare_routes(const PhaseDiagram& d, const PlaneEvaluator& numeric) {
  double worst = 0.0;
  for (const auto& cell : d.cells) {
    worst = std::max(worst, std::abs(cell.g - numeric(cell.x1, cell.x2)));
  }
  return worst;
}

// ------------------------------------------------------------- verify helpers

std::vector<double> time_grid(double omega, int n) {
  std::vector<double> out(n);
  for (int i = 0; i < n; ++i) out[i] = 4.0 * kPi / omega * i / (n - 1);
  return out;
}

VerifyItem max_over(const std::string& quantity, double tol, const std::vector<double>& xs,
                    const std::function<double(double)>& deviation) {
  VerifyItem item{quantity, 0.0, tol};
  for (double x : xs) item.max_deviation = std::max(item.max_deviation, deviation(x));
  return item;
}

Json axis_to_json(const GridAxis& a) {
  Json j;
  j["name"] = a.name;
  j["min"] = a.min;
  j["max"] = a.max;
  j["n"] = a.n;
  j["scale"] = a.scale == AxisScale::Log ? "log" : a.scale == AxisScale::Fixed ? "fixed" : "linear";
  return j;
}

GridAxis axis_from_json(const Json& j) {
  GridAxis a;
  a.name = j.at("name").get<std::string>();
  a.min = j.at("min").get<double>();
  a.max = j.at("max").get<double>();
  a.n = j.at("n").get<int>();
  const auto scale = j.at("scale").get<std::string>();
  a.scale = scale == "log" ? AxisScale::Log : scale == "fixed" ? AxisScale::Fixed : AxisScale::Linear;
  return a;
}

}  // namespace

double parse_real(const std::string& text) {
  static const std::regex pi_form(R"(^\s*([+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?\*|-)?pi(?:/((?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?))?\s*$)");
  std::smatch m;
  if (std::regex_match(text, m, pi_form)) {
    double factor = 1.0;
    if (m[1].matched) {
      const std::string f = m[1].str();
      factor = f == "-" ? -1.0 : std::stod(f.substr(0, f.size() - 1));
    }
    const double divisor = m[2].matched ? std::stod(m[2].str()) : 1.0;
    return factor * kPi / divisor;
  }
  std::size_t used = 0;
  double value = 0.0;
  try {
    value = std::stod(text, &used);
  } catch (const std::exception&) {
    throw Error(ErrorKind::Usage, "not a number: '" + text + "'");
  }
  if (used != text.size() || !std::isfinite(value)) {
    throw Error(ErrorKind::Usage, "not a number: '" + text + "'");
  }
  return value;
}

RunConfig parse_args(const std::vector<std::string>& args) {
  CLI::App app{"Loschmidt amplitudes of purified mixed states", "loschmidt_cli"};
  app.footer(kUsageNotes);
  std::string command, model, format = "csv", mode = "both", out;
  std::vector<std::string> params, axes;
  int steps = 1024;
  app.add_option("command", command, "quasistatic | quench | uhlmann | scan | verify")->required();
  app.add_option("--model", model, "two-level | three-level | creutz")->required();
  app.add_option("--param", params, "key=value, repeatable");
  app.add_option("--axis", axes, "name:min:max:n[:log], repeatable");
  app.add_option("--steps", steps, "Uhlmann loop steps")->capture_default_str();
  app.add_option("--out", out, "output file (default stdout)");
  app.add_option("--format", format, "csv | json")->capture_default_str();
  app.add_option("--mode", mode, "closed-form | numeric | both")->capture_default_str();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  app.parse(reversed);

  RunConfig c;
  if (!kCommands.count(command)) usage("unknown command '" + command + "'");
  c.command = kCommands.at(command);
  if (!kModels.count(model)) usage("--model must be two-level, three-level or creutz, got '" + model + "'");
  c.model = kModels.at(model);
  if (format != "csv" && format != "json") usage("--format must be csv or json, got '" + format + "'");
  c.format = format == "json" ? OutputFormat::Json : OutputFormat::Csv;
  if (!kModes.count(mode)) usage("--mode must be closed-form, numeric or both, got '" + mode + "'");
  c.mode = kModes.at(mode);
  if (steps < kMinUhlmannSteps) usage("--steps must be at least " + std::to_string(kMinUhlmannSteps));
  c.n_steps = steps;
  c.out_path = out;

  for (const auto& p : params) {
    const auto eq = p.find('=');
    if (eq == std::string::npos || eq == 0) usage("--param expects key=value, got '" + p + "'");
    const std::string key = p.substr(0, eq);
    try {
      c.params[key] = parse_real(p.substr(eq + 1));
    } catch (const Error&) {
      usage("--param " + key + " has a malformed value '" + p.substr(eq + 1) + "'");
    }
  }
  for (const auto& a : axes) c.axes.push_back(parse_axis(a));
  check_axes(c);
  check_params(c);
  return c;
}

PhaseDiagram build_diagram(const RunConfig& c) {
  const bool uhlmann_scan = uhlmann_run(c);
  const bool quench = c.command == Command::Quench || c.command == Command::Scan;

  GridAxis axis1, axis2;
  if (uhlmann_scan) {
    axis1 = c.axes.at(0);
    axis2 = c.axes.size() == 2
                ? c.axes[1]
                : GridAxis::fixed(model_parameter_default_axis(c.model),
                                  param(c, model_parameter_default_axis(c.model)));
  } else if (c.axes.size() == 1) {
    axis1 = GridAxis::fixed("beta", param(c, "beta"));
    axis2 = c.axes[0];
  } else {
    axis1 = c.axes[0];
    axis2 = c.axes[1];
  }
  if (axis1.name == "T" && !(axis1.min > 0.0)) {
    throw Error(ErrorKind::DomainError, "temperature axis must start above 0");
  }

  const Evaluators ev =
      uhlmann_scan ? uhlmann_evaluators(c, axis2.name) : dynamics_evaluators(c, quench, axis1.name);
  const bool numeric = c.mode == EvalMode::Numeric;
  const PlaneEvaluator& primary = numeric ? ev.numeric : ev.closed;
  PhaseDiagram d = uhlmann_scan ? scan_uhlmann(primary, axis1, axis2)
                                : scan_dynamics(primary, axis1, axis2);
  record_config(d, c);
  d.metadata["evaluation"] = numeric ? "numeric" : "closed-form";
  if (c.mode == EvalMode::Both && c.command != Command::Scan) {
    d.metadata["max_closed_numeric_deviation"] = fmt(compare_routes(d, ev.numeric));
  }
  return d;
}

std::string to_csv(const PhaseDiagram& d) {
  std::string out = "x1,x2,G_re,G_im,echo,phase,rate,divergent\n";
  for (const auto& c : d.cells) {
    out += fmt(c.x1) + ',' + fmt(c.x2) + ',' + fmt(c.g.real()) + ',' + fmt(c.g.imag()) + ',' +
           fmt(c.echo) + ',' + (c.phase ? fmt(*c.phase) : std::string()) + ',' + fmt(c.rate) + ',' +
           (c.divergent ? "true" : "false") + '\n';
  }
  return out;
}

std::string to_json(const PhaseDiagram& d) {
  Json j;
  j["metadata"] = Json::object();
  for (const auto& [k, v] : d.metadata) j["metadata"][k] = v;
  j["axes"] = Json::array({axis_to_json(d.axis1), axis_to_json(d.axis2)});
  j["cells"] = Json::array();
  for (const auto& c : d.cells) {
    Json cell;
    cell["x1"] = c.x1;
    cell["x2"] = c.x2;
    cell["G_re"] = c.g.real();
    cell["G_im"] = c.g.imag();
    cell["echo"] = c.echo;
    cell["phase"] = c.phase ? Json(*c.phase) : Json(nullptr);
    cell["rate"] = c.rate;
    cell["divergent"] = c.divergent;
    j["cells"].push_back(std::move(cell));
  }
  j["criticals"] = Json::array();
  for (const auto& p : d.criticals) j["criticals"].push_back({{"x1", p.x1}, {"x2", p.x2}});
  return j.dump(1) + "\n";
}

PhaseDiagram diagram_from_json(const std::string& text) {
  PhaseDiagram d;
  try {
    const Json j = Json::parse(text);
    for (const auto& [k, v] : j.at("metadata").items()) d.metadata[k] = v.get<std::string>();
    d.axis1 = axis_from_json(j.at("axes").at(0));
    d.axis2 = axis_from_json(j.at("axes").at(1));
    for (const auto& c : j.at("cells")) {
      PhaseCell cell;
      cell.x1 = c.at("x1").get<double>();
      cell.x2 = c.at("x2").get<double>();
      cell.g = {c.at("G_re").get<double>(), c.at("G_im").get<double>()};
      cell.echo = c.at("echo").get<double>();
      if (!c.at("phase").is_null()) cell.phase = c.at("phase").get<double>();
      cell.rate = c.at("rate").get<double>();
      cell.divergent = c.at("divergent").get<bool>();
      d.cells.push_back(cell);
    }
    for (const auto& p : j.at("criticals")) {
      d.criticals.push_back({p.at("x1").get<double>(), p.at("x2").get<double>()});
    }
  } catch (const Json::exception& e) {
    throw Error(ErrorKind::Io, std::string("malformed diagram JSON: ") + e.what());
  }
  if (d.cells.size() != static_cast<std::size_t>(d.axis1.n) * d.axis2.n) {
    throw Error(ErrorKind::Io, "diagram JSON cell count does not match its axes");
  }
  return d;
}

void write_atomically(const std::string& path, const std::string& contents) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw Error(ErrorKind::Io, "cannot open '" + tmp.string() + "' for writing");
    f << contents;
    f.flush();
    if (!f) throw Error(ErrorKind::Io, "write to '" + tmp.string() + "' failed");
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw Error(ErrorKind::Io, "cannot rename onto '" + path + "'");
  }
}

void emit(const PhaseDiagram& diagram, const RunConfig& config, std::ostream& stdout_stream) {
  const std::string text =
      config.format == OutputFormat::Json ? to_json(diagram) : to_csv(diagram);
  if (config.out_path.empty()) {
    stdout_stream << text;
    stdout_stream.flush();
    if (!stdout_stream) throw Error(ErrorKind::Io, "cannot write to stdout");
  } else {
    write_atomically(config.out_path, text);
  }
}

bool VerifyReport::passed() const {
  return std::all_of(items.begin(), items.end(), [](const VerifyItem& i) { return i.passed(); });
}

std::string VerifyReport::text() const {
  std::string out;
  for (const auto& i : items) {
    char line[200];
    std::snprintf(line, sizeof line, "%-28s max_dev=%.3e tol=%.1e %s\n", i.quantity.c_str(),
                  i.max_deviation, i.tolerance, i.passed() ? "PASS" : "FAIL");
    out += line;
  }
  return out;
}

VerifyReport verify(const RunConfig& c) {
  VerifyReport report;
  if (c.model == ModelKind::TwoLevel) {
    const Vec3 r = field(c);
    const double beta = param(c, "beta");
    const double energy = param(c, "E");
    const TwoLevelSpec spec{r, beta};
    spec.validate();
    const auto times = time_grid(spec.omega(), 64);
    const DensityMatrix rho = spec.thermal_state();
    report.items.push_back(max_over("quasistatic_G", 1e-12, times, [&](double t) {
      return std::abs(two_level_quasistatic_g(spec, t) -
                      loschmidt_amplitude(rho, spec.hamiltonian(), t));
    }));
    const DensityMatrix rho_e = two_level_thermal_initial_state(energy, beta);
    report.items.push_back(max_over("thermal_quench_G", 1e-12, times, [&](double t) {
      return std::abs(two_level_thermal_quench_g(energy, beta, r, t) -
                      loschmidt_amplitude(rho_e, spec.hamiltonian(), t));
    }));
    if (has_r0(c)) {
      const Vec3 r0 = initial_field(c);
      const DensityMatrix rho0 = two_level_quench_initial_state(r0);
      report.items.push_back(max_over("quench_G", 1e-12, times, [&](double t) {
        return std::abs(two_level_quench_g(r0, r, t) -
                        loschmidt_amplitude(rho0, spec.hamiltonian(), t));
      }));
    }
    const PurifiedState w0 = purify(amplitude_from_density(rho));
    const double delta = gap_from_field_strength(spec.field_strength());
    report.items.push_back(max_over("spinor_overlap", 1e-12, times, [&](double t) {
      return std::abs(quasistatic_overlap_closed_form(beta, delta, spec.omega(), t) -
                      overlap(w0, gamma_rotate(w0, r, t)));
    }));
  } else if (c.model == ModelKind::ThreeLevel) {
    const double r = param(c, "R");
    const ThreeLevelSpec spec{r, param(c, "theta"), param(c, "phi"), param(c, "beta")};
    spec.validate();
    const auto times = time_grid(spec.omega(), 64);
    const ComplexMatrix h0 = three_level_hamiltonian(r);
    const DensityMatrix rho = DensityMatrix::thermal(h0, spec.beta);
    const ComplexMatrix hf = three_level_quench_hamiltonian(r, spec.theta, spec.phi);
    report.items.push_back(max_over("quasistatic_G", 1e-8, times, [&](double t) {
      return std::abs(three_level_quasistatic_g(spec, t) - loschmidt_amplitude(rho, h0, t));
    }));
    report.items.push_back(max_over("quench_G", 1e-8, times, [&](double t) {
      return std::abs(three_level_quench_g(spec, t) - loschmidt_amplitude(rho, hf, t));
    }));
    report.items.push_back(max_over("uhlmann_G", 1e-6, {0.5, 1.0, 2.0}, [&](double br) {
      const double b = br / r;
      return std::abs(three_level_uhlmann_closed_form(r, b) -
                      uhlmann_loschmidt(three_level_circle_path(r, b, c.n_steps)));
    }));
    const double t_star = kPi / (2.0 * spec.omega());
    const double tq = critical_temperature_analytic(CriticalKind::ThreeLevelQuasistatic, r);
    const DensityMatrix rho_q = DensityMatrix::thermal(h0, 1.0 / tq);
    report.items.push_back(
        {"quasistatic_zero_at_Tq", std::abs(loschmidt_amplitude(rho_q, h0, t_star)), 1e-8});
    const double th = critical_temperature_analytic(CriticalKind::ThreeLevelQuench, r, spec.theta);
    const DensityMatrix rho_h = DensityMatrix::thermal(h0, 1.0 / th);
    report.items.push_back(
        {"quench_zero_at_Th", std::abs(loschmidt_amplitude(rho_h, hf, t_star)), 1e-8});
    const double ts = three_level_uhlmann_tstar(r);
    report.items.push_back(
        {"uhlmann_zero_at_Tstar", std::abs(three_level_uhlmann_closed_form(r, 1.0 / ts)), 1e-10});
  } else {
    const CreutzSpec spec{param(c, "m"), param(c, "Theta"), static_cast<int>(param(c, "k_points"))};
    spec.validate();
    const auto t_star = creutz_critical_temperature(spec);
    const std::vector<double> temps =
        t_star ? std::vector<double>{0.5 * *t_star, *t_star, 2.0 * *t_star}
               : std::vector<double>{0.2, 0.5, 1.0};
    report.items.push_back(max_over("uhlmann_G", 1e-6, temps, [&](double t) {
      return std::abs(two_band_uhlmann_closed_form(spec, t) -
                      uhlmann_loschmidt(creutz_path(spec, t, c.n_steps)));
    }));
    CreutzSpec fine = spec;
    fine.k_points = 4 * spec.k_points;
    report.items.push_back({"winding_refinement",
                            std::abs(static_cast<double>(creutz_winding_number(spec) -
                                                         creutz_winding_number(fine))),
                            0.0});
    if (t_star) {
      report.items.push_back(
          {"uhlmann_zero_at_Tstar", std::abs(two_band_uhlmann_closed_form(spec, *t_star)), 1e-6});
    }
  }
  return report;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  try {
    const RunConfig config = parse_args(args);
    if (config.command == Command::Verify) {
      const VerifyReport report = verify(config);
      if (config.out_path.empty()) {
        out << report.text();
      } else {
        write_atomically(config.out_path, report.text());
      }
      for (const auto& item : report.items) {
        if (!item.passed()) err << "verification failed: " << item.quantity << "\n";
      }
      return report.passed() ? kExitOk : kExitVerifyFailed;
    }
    emit(build_diagram(config), config, out);
    return kExitOk;
  } catch (const CLI::CallForHelp&) {
    out << "usage: loschmidt_cli <quasistatic|quench|uhlmann|scan|verify> --model NAME\n"
           "       [--param key=value]... [--axis name:min:max:n[:log]]... [--steps N]\n"
           "       [--out FILE] [--format csv|json] [--mode closed-form|numeric|both]\n"
        << kUsageNotes;
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const Error& e) {
    err << e.what() << "\n";
    switch (e.kind()) {
      case ErrorKind::Usage:
        return kExitUsage;
      case ErrorKind::Io:
        return kExitIo;
      default:
        return kExitDomain;
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitDomain;
  }
}

}  // namespace loschmidt::cli
