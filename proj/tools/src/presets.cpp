#include "quasisol/cli/presets.hpp"

#include "quasisol/errors.hpp"

namespace quasisol::cli {

namespace {

using Map = std::map<std::string, std::string>;

std::vector<ExperimentPreset> build_presets() {
  std::vector<ExperimentPreset> p;

  // 1D bifurcation curves from the closed forms; cheap at any scale.
  p.push_back({"fig1-mass-energy-alpha1", "M, E and E(M) for alpha = 1, d = 1", "sweep",
               Map{{"alpha", "1"}, {"dim", "1"}, {"omega_min", "0.001"}, {"omega_max", "0.499"}, {"points", "500"}},
               Map{},
               {"mass and energy monotone", "all interior points stable"}});
  p.push_back({"fig2-mass-energy-alpha2", "M, E and E(M) for alpha = 2, d = 1", "sweep",
               Map{{"alpha", "2"}, {"dim", "1"}, {"omega_min", "0.001"}, {"omega_max", "0.333"}, {"points", "500"}},
               Map{},
               {"mass increasing and convex", "mass tends to sqrt(3) pi / 2 as omega -> 0"}});
  p.push_back({"fig3-mass-energy", "M, E and E(M) for alpha = 3, d = 1", "sweep",
               Map{{"alpha", "3"}, {"dim", "1"}, {"omega_min", "0.001"}, {"omega_max", "0.2499"}, {"points", "500"}},
               Map{},
               {"exactly one sign change of dM/domega", "E(M) shows a cusp at the mass minimum"}});

  // Radial bifurcation curves.
  const Map radial_sweep{{"n", "400"}, {"s0", "5000"}, {"omega_min", "0.05"}, {"omega_max", "0.45"},
                         {"points", "41"}, {"mu", "0.1"}, {"mu_growth", "2"}};
  auto with = [](Map base, const Map& extra) {
    for (const auto& [k, v] : extra) base[k] = v;
    return base;
  };
  p.push_back({"fig4-mass-energy-2d", "M and E for alpha = 1, d = 2", "sweep",
               with(radial_sweep, {{"alpha", "1"}, {"dim", "2"}}), Map{{"points", "17"}},
               {"mass increasing, finite limit as omega -> 0"}});
  p.push_back({"fig5-mass-energy-3d", "M and E for alpha = 1, d = 3", "sweep",
               with(radial_sweep, {{"alpha", "1"}, {"dim", "3"}}), Map{{"points", "17"}},
               {"mass decreasing for small omega, increasing beyond"}});
  p.push_back({"fig6-mass-energy-3d-alpha3", "M and E for alpha = 3, d = 3", "sweep",
               with(radial_sweep, {{"alpha", "3"}, {"dim", "3"}, {"omega_min", "0.02"}, {"omega_max", "0.24"},
                                   {"points", "45"}}),
               Map{{"points", "12"}},
               {"one sign change of dM/domega"}});

  // 1D perturbed solitary waves.
  const Map evolve_full{{"alpha", "3"}, {"nx", "4096"}, {"nt", "1000000"}, {"diag_stride", "1000"},
                        {"snapshot_stride", "10000"}};
  const Map evolve_desk{{"nx", "1024"}, {"nt", "100000"}, {"diag_stride", "100"}, {"snapshot_stride", "1000"}};
  p.push_back({"fig7-alpha3-om022", "omega = 0.22, lambda = 1.001: perturbed stable wave", "evolve1d",
               with(evolve_full, {{"omega", "0.22"}, {"lambda", "1.001"}, {"lx", "30"}, {"tmax", "10"}}), evolve_desk,
               {"fitted omega near 0.2205", "max delta below 1e-3"}});
  p.push_back({"fig9-alpha3-om022-low", "omega = 0.22, lambda = 0.99: perturbed stable wave", "evolve1d",
               with(evolve_full, {{"omega", "0.22"}, {"lambda", "0.99"}, {"lx", "30"}, {"tmax", "10"}}), evolve_desk,
               {"fitted omega near 0.2149"}});
  p.push_back({"fig10-alpha3-om002", "omega = 0.02, lambda = 1.001: unstable wave grows", "evolve1d",
               with(evolve_full, {{"omega", "0.02"}, {"lambda", "1.001"}, {"lx", "100"}, {"tmax", "200"}}),
               with(evolve_desk, {{"tmax", "50"}}),
               {"L-infinity jumps, then oscillates about a level fitting omega near 0.1972"}});
  p.push_back({"fig12-alpha3-om002-low", "omega = 0.02, lambda = 0.99: unstable wave disperses", "evolve1d",
               with(evolve_full, {{"omega", "0.02"}, {"lambda", "0.99"}, {"lx", "100"}, {"tmax", "200"}}),
               with(evolve_desk, {{"tmax", "50"}}),
               {"L-infinity decays without recovery"}});

  // Radial ground states.
  p.push_back({"fig12-groundstates", "ground states for omega in {0.1, 0.2, 0.3, 0.4}, alpha = 1, d = 3", "sweep",
               Map{{"alpha", "1"}, {"dim", "3"}, {"omegas", "0.1,0.2,0.3,0.4"}, {"n", "1000"}, {"s0", "10000"},
                   {"mu", "0.01"}, {"mu_growth", "2"}, {"profiles", "true"}},
               Map{{"n", "200"}, {"s0", "1000"}, {"mu", "0.1"}},
               {"peaks increase towards 1", "1 - max phi of order 1e-7 at omega = 0.4"}});
  p.push_back({"continuation-near-star-3d", "mass divergence near omega*, alpha = 1, d = 3", "sweep",
               Map{{"alpha", "1"}, {"dim", "3"}, {"omega_min", "0.35"}, {"omega_max", "0.45"}, {"points", "21"},
                   {"n", "1000"}, {"s0", "10000"}, {"mu", "0.01"}, {"mu_growth", "2"}, {"fit", "star"}},
               Map{{"points", "11"}},
               {"log-log exponent near -3"}});

  // Radial dynamics.
  const Map radial_full{{"alpha", "1"}, {"dim", "3"}, {"n", "1000"}, {"s0", "10000"}, {"diag_stride", "10"},
                        {"snapshot_stride", "200"}};
  const Map radial_desk{{"n", "400"}, {"s0", "4000"}, {"diag_stride", "5"}, {"snapshot_stride", "100"}};
  p.push_back({"fig14-cn-stationary", "Crank-Nicolson on the omega = 0.1 ground state", "evolver",
               Map{{"alpha", "1"}, {"dim", "3"}, {"n", "200"}, {"s0", "1000"}, {"initial", "soliton"},
                   {"omega", "0.1"}, {"lambda", "1"}, {"tmax", "1"}, {"nt", "4000"}, {"diag_stride", "40"}},
               Map{},
               {"sup error against phi exp(i omega t) of order 1e-12", "delta of order 1e-12"}});
  p.push_back({"om01-perturbed-up", "omega = 0.1, lambda = 1.01: stable ground state", "evolver",
               with(radial_full, {{"initial", "soliton"}, {"omega", "0.1"}, {"lambda", "1.01"}, {"tmax", "20"},
                                  {"nt", "10000"}}),
               with(radial_desk, {{"nt", "2000"}}),
               {"L-infinity saturates slightly above the unperturbed peak"}});
  p.push_back({"om01-perturbed-down", "omega = 0.1, lambda = 0.99: stable ground state", "evolver",
               with(radial_full, {{"initial", "soliton"}, {"omega", "0.1"}, {"lambda", "0.99"}, {"tmax", "20"},
                                  {"nt", "10000"}}),
               with(radial_desk, {{"nt", "2000"}}),
               {"L-infinity settles slightly below the unperturbed peak"}});
  p.push_back({"fig16-unstable-grow", "omega = 0.01, lambda = 1.01: unstable wave moves to the stable branch",
               "evolver",
               with(radial_full, {{"initial", "soliton"}, {"omega", "0.01"}, {"lambda", "1.01"}, {"tmax", "140"},
                                  {"nt", "70000"}}),
               with(radial_desk, {{"tmax", "20"}, {"nt", "2000"}}),
               {"L-infinity grows and oscillates about a higher level"}});
  p.push_back({"unstable-disperse", "omega = 0.01, lambda = 0.99: unstable wave disperses", "evolver",
               with(radial_full, {{"initial", "soliton"}, {"omega", "0.01"}, {"lambda", "0.99"}, {"tmax", "140"},
                                  {"nt", "70000"}}),
               with(radial_desk, {{"tmax", "20"}, {"nt", "2000"}}),
               {"L-infinity decays"}});
  p.push_back({"fig18-gauss-wide", "gaussian c = 0.9, s1 = 50: a ground state emerges", "evolver",
               with(radial_full, {{"initial", "gaussian"}, {"c", "0.9"}, {"s1", "50"}, {"tmax", "20"}, {"nt", "10000"}}),
               with(radial_desk, {{"tmax", "10"}, {"nt", "1000"}}),
               {"L-infinity slowly reaches a plateau"}});
  p.push_back({"gauss-narrow", "gaussian c = 0.9, s1 = 10: the hump radiates away", "evolver",
               with(radial_full, {{"initial", "gaussian"}, {"c", "0.9"}, {"s1", "10"}, {"tmax", "10"}, {"nt", "5000"}}),
               with(radial_desk, {{"nt", "1000"}}),
               {"L-infinity decreases monotonically"}});
  return p;
}

}  // namespace

const std::vector<ExperimentPreset>& presets() {
  static const std::vector<ExperimentPreset> all = build_presets();
  return all;
}

const ExperimentPreset& find_preset(std::string_view name) {
  for (const auto& p : presets()) {
    if (p.name == name) return p;
  }
  fail(ErrorCode::usage_error, "unknown preset '" + std::string(name) + "' (see: quasisol preset --list)");
}

RunDescription preset_description(const ExperimentPreset& preset, bool desk, const std::string& out) {
  std::map<std::string, std::string> values = preset.full;
  if (desk) {
    for (const auto& [k, v] : preset.desk) values[k] = v;
  }
  if (!out.empty()) values["out"] = out;
  auto description = merge_config(command_spec(preset.command), {}, values);
  validate(description);
  return description;
}

}  // namespace quasisol::cli
