#include "quasisol/cli/config.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "app.hpp"
#include "quasisol/errors.hpp"

namespace quasisol::cli {

namespace {

std::string trim(std::string s) {
  auto not_space = [](unsigned char c) { return !std::isspace(c); };
  s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_space));
  s.erase(std::find_if(s.rbegin(), s.rend(), not_space).base(), s.end());
  return s;
}

std::vector<CommandSpec> build_specs() {
  const KeySpec out{"out", "", "output directory (overrides $QUASISOL_OUT)"};
  std::vector<CommandSpec> specs;
  specs.push_back({"groundstate",
                   "radial ground state by relaxed Newton iteration",
                   {{"alpha", std::nullopt, "nonlinearity exponent (integer >= 1)"},
                    {"dim", std::nullopt, "space dimension (>= 2)"},
                    {"omega", std::nullopt, "frequency in (0, 1/(alpha+1))"},
                    {"n", "200", "Chebyshev collocation points"},
                    {"s0", "1000", "computational domain s = r^2 in [0, s0]"},
                    {"mu", "0.1", "Newton relaxation"},
                    {"mu_growth", "1", "relaxation growth per accepted step (1 = fixed)"},
                    {"tol", "1e-10", "residual sup-norm tolerance"},
                    {"max_iter", "5000", "Newton iteration cap per frequency"},
                    {"continuation", "true", "reach omega by continuation from 0.1"},
                    out}});
  specs.push_back({"sweep",
                   "mass/energy bifurcation data over a frequency grid",
                   {{"alpha", std::nullopt, "nonlinearity exponent"},
                    {"dim", std::nullopt, "space dimension (1 uses closed forms)"},
                    {"omega_min", "", "first frequency (with omega_max and points)"},
                    {"omega_max", "", "last frequency"},
                    {"points", "100", "number of grid points"},
                    {"spacing", "linear", "linear | log | log-star (log in omega*-omega)"},
                    {"omegas", "", "explicit comma-separated frequency list"},
                    {"n", "200", "Chebyshev collocation points (dim >= 2)"},
                    {"s0", "1000", "domain size in s (dim >= 2)"},
                    {"mu", "0.1", "Newton relaxation (dim >= 2)"},
                    {"mu_growth", "2", "relaxation growth (dim >= 2)"},
                    {"tol", "1e-10", "Newton tolerance (dim >= 2)"},
                    {"max_iter", "5000", "Newton iteration cap (dim >= 2)"},
                    {"fit", "none", "none | star | zero: asymptotic law fitted to all points"},
                    {"profiles", "false", "also write one profile CSV per frequency (dim >= 2)"},
                    out}});
  specs.push_back({"mass1d",
                   "closed-form 1D mass, slope and energy",
                   {{"alpha", std::nullopt, "nonlinearity exponent"},
                    {"omega", std::nullopt, "frequency"},
                    out}});
  specs.push_back({"evolve1d",
                   "1D time evolution of a perturbed solitary wave (RK4, Fourier)",
                   {{"alpha", "3", "nonlinearity exponent"},
                    {"omega", std::nullopt, "solitary-wave frequency"},
                    {"lambda", "1", "initial data lambda * phi_omega"},
                    {"lx", "30", "domain lx * [-pi, pi]"},
                    {"nx", "4096", "Fourier modes (power of two)"},
                    {"tmax", std::nullopt, "final time"},
                    {"nt", std::nullopt, "time steps"},
                    {"diag_stride", "100", "steps between diagnostics"},
                    {"snapshot_stride", "0", "steps between snapshots (0 = none)"},
                    {"delta_bound", "1e-3", "energy-conservation abort threshold"},
                    out}});
  specs.push_back({"evolver",
                   "radial time evolution (Crank-Nicolson, Chebyshev in s = r^2)",
                   {{"alpha", "1", "nonlinearity exponent"},
                    {"dim", "3", "space dimension (>= 2)"},
                    {"n", "200", "Chebyshev collocation points"},
                    {"s0", "1000", "domain size in s"},
                    {"tmax", std::nullopt, "final time"},
                    {"nt", std::nullopt, "time steps"},
                    {"initial", "gaussian", "soliton | gaussian"},
                    {"omega", "0.1", "soliton frequency"},
                    {"lambda", "1", "soliton scaling"},
                    {"c", "0.9", "gaussian amplitude"},
                    {"s1", "50", "gaussian width in s"},
                    {"newton_tol", "1e-10", "CN Newton tolerance"},
                    {"newton_max_iter", "25", "CN Newton iteration cap"},
                    {"diag_stride", "1", "steps between diagnostics"},
                    {"snapshot_stride", "0", "steps between snapshots (0 = none)"},
                    {"delta_bound", "1e-3", "energy-conservation abort threshold"},
                    out}});
  specs.push_back({"fit",
                   "fitted frequency from a diagnostics CSV",
                   {{"diagnostics", std::nullopt, "path to diagnostics.csv"},
                    {"alpha", std::nullopt, "nonlinearity exponent"},
                    out}});
  return specs;
}

std::string json_scalar(const nlohmann::json& v, const std::string& key) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  if (v.is_number_integer()) return std::to_string(v.get<long long>());
  if (v.is_number()) {
    std::ostringstream os;
    os.precision(17);
    os << v.get<double>();
    return os.str();
  }
  if (v.is_array()) {
    std::string joined;
    for (const auto& item : v) joined += (joined.empty() ? "" : ",") + json_scalar(item, key);
    return joined;
  }
  fail(ErrorCode::usage_error, "config key '" + key + "': unsupported value type");
}

[[noreturn]] void bad_value(const std::string& key, const std::string& value, const char* expected) {
  fail(ErrorCode::usage_error, "key '" + key + "': expected " + expected + ", got '" + value + "'");
}

}  // namespace

const std::vector<CommandSpec>& command_specs() {
  static const std::vector<CommandSpec> specs = build_specs();
  return specs;
}

const CommandSpec& command_spec(std::string_view name) {
  for (const auto& s : command_specs()) {
    if (s.name == name) return s;
  }
  fail(ErrorCode::usage_error, "unknown command '" + std::string(name) + "'");
}

bool RunDescription::given(const std::string& key) const {
  return std::find(explicit_keys.begin(), explicit_keys.end(), key) != explicit_keys.end();
}

const std::string& RunDescription::text(const std::string& key) const {
  const auto it = values.find(key);
  require(it != values.end(), ErrorCode::usage_error, "missing key '" + key + "'");
  return it->second;
}

double RunDescription::number(const std::string& key) const {
  const auto& v = text(key);
  try {
    std::size_t used = 0;
    const double d = std::stod(v, &used);
    if (used == v.size()) return d;
  } catch (const std::exception&) {
  }
  bad_value(key, v, "a number");
}

long RunDescription::integer(const std::string& key) const {
  const double d = number(key);
  if (std::nearbyint(d) != d || std::abs(d) > 9e15) bad_value(key, text(key), "an integer");
  return static_cast<long>(d);
}

bool RunDescription::flag(const std::string& key) const {
  std::string v = text(key);
  std::transform(v.begin(), v.end(), v.begin(), [](unsigned char c) { return std::tolower(c); });
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  bad_value(key, text(key), "a boolean");
}

std::vector<double> RunDescription::numbers(const std::string& key) const {
  std::vector<double> out;
  std::stringstream ss(text(key));
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) continue;
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) bad_value(key, item, "a number list");
    } catch (const std::invalid_argument&) {
      bad_value(key, item, "a number list");
    } catch (const std::out_of_range&) {
      bad_value(key, item, "a number list");
    }
  }
  return out;
}

std::map<std::string, std::string> read_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  require(in.good(), ErrorCode::usage_error, "cannot read config file " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  const std::string content = buffer.str();
  std::map<std::string, std::string> values;

  const auto first = content.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && content[first] == '{') {
    nlohmann::json doc;
    try {
      doc = nlohmann::json::parse(content);
    } catch (const nlohmann::json::parse_error& e) {
      fail(ErrorCode::usage_error, "config file " + path.string() + ": " + e.what());
    }
    for (const auto& [key, v] : doc.items()) values[key] = json_scalar(v, key);
    return values;
  }

  std::stringstream ss(content);
  std::string line;
  int lineno = 0;
  while (std::getline(ss, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    require(eq != std::string::npos, ErrorCode::usage_error,
            path.string() + ":" + std::to_string(lineno) + ": expected key = value");
    values[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  return values;
}

RunDescription merge_config(const CommandSpec& spec, const std::map<std::string, std::string>& file_values,
                            const std::map<std::string, std::string>& flag_values) {
  RunDescription d;
  d.command = spec.name;
  auto known = [&](const std::string& key) {
    return std::any_of(spec.keys.begin(), spec.keys.end(), [&](const KeySpec& k) { return k.name == key; });
  };
  for (const auto& k : spec.keys) {
    if (k.default_value) d.values[k.name] = *k.default_value;
  }
  for (const auto* source : {&file_values, &flag_values}) {
    for (const auto& [key, value] : *source) {
      require(known(key), ErrorCode::usage_error, "unknown key '" + key + "' for command " + spec.name);
      d.values[key] = value;
      if (!d.given(key)) d.explicit_keys.push_back(key);
    }
  }
  for (const auto& k : spec.keys) {
    require(d.values.count(k.name) > 0, ErrorCode::usage_error,
            "missing required key '" + k.name + "' for command " + spec.name);
  }
  return d;
}

RunDescription parse_config(const std::vector<std::string>& args) {
  AppState state;
  auto app = make_app(state);
  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app->parse(reversed);
  } catch (const CLI::ParseError& e) {
    fail(ErrorCode::usage_error, e.what());
  }
  require(!state.selected.empty() && state.selected != "preset", ErrorCode::usage_error,
          "expected one of: groundstate, sweep, mass1d, evolve1d, evolver, fit");
  auto description = description_from_state(state);
  validate(description);
  return description;
}

std::filesystem::path output_directory(const RunDescription& description) {
  const auto it = description.values.find("out");
  if (it != description.values.end() && !it->second.empty()) return it->second;
  if (const char* env = std::getenv("QUASISOL_OUT"); env != nullptr && *env != '\0') return env;
  return std::filesystem::path("quasisol_out") / description.command;
}

RunDescription description_from_state(const AppState& state) {
  const auto& spec = command_spec(state.selected);
  std::map<std::string, std::string> file_values;
  if (!state.config_path.empty()) file_values = read_config_file(state.config_path);
  std::map<std::string, std::string> flag_values;
  for (const auto& [key, option] : state.options.at(state.selected)) {
    if (option->count() > 0) flag_values[key] = option->as<std::string>();
  }
  return merge_config(spec, file_values, flag_values);
}

}  // namespace quasisol::cli
