#include <cmath>
#include <cstdlib>
#include <fstream>
#include <random>
#include <sstream>

#include <doctest.h>

#include "quasisol/cli/commands.hpp"
#include "quasisol/cli/io.hpp"
#include "quasisol/cli/presets.hpp"

using namespace quasisol;
using namespace quasisol::cli;

namespace {

fs::path scratch(const std::string& name) {
  static const auto root = fs::temp_directory_path() / ("quasisol_cli_test_" + std::to_string(std::random_device{}()));
  const auto p = root / name;
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

ErrorCode parse_error(const std::vector<std::string>& args, std::string* message = nullptr) {
  try {
    parse_config(args);
  } catch (const Error& e) {
    if (message) *message = e.what();
    return e.code();
  }
  FAIL("expected a usage error");
  return ErrorCode::io_error;
}

struct Captured {
  int code;
  std::string out;
  std::string err;
};

Captured run_args(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("valid command line") {
    const auto d = parse_config({"groundstate", "--alpha", "1", "--dim", "3", "--omega", "0.1", "--n", "200", "--s0", "1000"});
    CHECK(d.command == "groundstate");
    CHECK(d.integer("n") == 200);
    CHECK(d.number("s0") == 1000.0);
    CHECK(d.number("mu") == 0.1);
    CHECK(d.given("omega"));
    CHECK_FALSE(d.given("mu"));
  }

  TEST_CASE("frequency above the critical value is rejected") {
    for (const std::string cmd : {"mass1d", "evolve1d"}) {
      std::vector<std::string> args{cmd, "--omega", "0.3", "--alpha", "3"};
      if (cmd == "evolve1d") args.insert(args.end(), {"--tmax", "1", "--nt", "100"});
      CHECK(parse_error(args) == ErrorCode::usage_error);
    }
    CHECK(parse_error({"groundstate", "--alpha", "3", "--dim", "3", "--omega", "0.3"}) == ErrorCode::usage_error);
    CHECK(parse_error({"sweep", "--alpha", "3", "--dim", "1", "--omegas", "0.1,0.3"}) == ErrorCode::usage_error);
  }

  TEST_CASE("missing and unknown keys") {
    std::string message;
    CHECK(parse_error({"mass1d", "--alpha", "3"}, &message) == ErrorCode::usage_error);
    CHECK(message.find("omega") != std::string::npos);
    CHECK(parse_error({"mass1d", "--alpha", "3", "--omega", "0.1", "--bogus", "1"}) == ErrorCode::usage_error);
    CHECK(parse_error({}) == ErrorCode::usage_error);
    CHECK(parse_error({"mass1d", "--alpha", "x", "--omega", "0.1"}, &message) == ErrorCode::usage_error);
    CHECK(message.find("alpha") != std::string::npos);
  }

  TEST_CASE("empty frequency grid") {
    CHECK(parse_error({"sweep", "--alpha", "3", "--dim", "1", "--omega_min", "0.2", "--omega_max", "0.1"}) ==
          ErrorCode::usage_error);
    CHECK(parse_error({"sweep", "--alpha", "3", "--dim", "1", "--omegas", ""}) == ErrorCode::usage_error);
  }

  TEST_CASE("config files and precedence") {
    const auto dir = scratch("config");
    {
      std::ofstream f(dir / "run.cfg");
      f << "# mass query\nalpha = 3\nomega = 0.1   # below omega*\n";
    }
    {
      std::ofstream f(dir / "run.json");
      f << R"({"alpha": 2, "omega": 0.05, "out": "elsewhere"})";
    }
    auto d = parse_config({"mass1d", "--config", (dir / "run.cfg").string()});
    CHECK(d.integer("alpha") == 3);
    CHECK(d.number("omega") == 0.1);
    d = parse_config({"mass1d", "--config", (dir / "run.json").string(), "--omega", "0.07"});
    CHECK(d.integer("alpha") == 2);
    CHECK(d.number("omega") == 0.07);
    CHECK(output_directory(d) == fs::path("elsewhere"));

    {
      std::ofstream f(dir / "bad.cfg");
      f << "alpha = 3\nfrequency = 0.1\n";
    }
    CHECK(parse_error({"mass1d", "--config", (dir / "bad.cfg").string()}) == ErrorCode::usage_error);
  }

  TEST_CASE("output directory precedence") {
    auto d = parse_config({"mass1d", "--alpha", "3", "--omega", "0.1"});
    ::unsetenv("QUASISOL_OUT");
    CHECK(output_directory(d) == fs::path("quasisol_out") / "mass1d");
    ::setenv("QUASISOL_OUT", "/tmp/from_env", 1);
    CHECK(output_directory(d) == fs::path("/tmp/from_env"));
    d = parse_config({"mass1d", "--alpha", "3", "--omega", "0.1", "--out", "explicit"});
    CHECK(output_directory(d) == fs::path("explicit"));
    ::unsetenv("QUASISOL_OUT");
  }

  TEST_CASE("every preset is a valid description") {
    for (const auto& p : presets()) {
      CHECK_NOTHROW(preset_description(p, false));
      CHECK_NOTHROW(preset_description(p, true));
    }
    CHECK_THROWS_AS(find_preset("no-such-preset"), Error);
    const auto d = preset_description(find_preset("fig12-groundstates"), true);
    CHECK(d.numbers("omegas") == std::vector<double>{0.1, 0.2, 0.3, 0.4});
  }

  TEST_CASE("fit report") {
    const auto dir = scratch("fit");
    Diagnostics diag;
    for (int i = 0; i <= 50; ++i) diag.record(0.2 * i, 0.97928, 1.0, -1.0);
    write_diagnostics(dir / "diagnostics.csv", diag);
    const auto fit = fit_report(dir / "diagnostics.csv", 3);
    CHECK(fit.omega == doctest::Approx(0.22049).epsilon(1e-4));

    Diagnostics short_run;
    for (int i = 0; i < 9; ++i) short_run.record(i, 0.9, 1.0, -1.0);
    write_diagnostics(dir / "short.csv", short_run);
    try {
      fit_report(dir / "short.csv", 3);
      FAIL("expected too-few-samples");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::too_few_samples);
    }

    {
      std::ofstream f(dir / "wrong.csv");
      f << "time,peak\n0,0.9\n";
    }
    try {
      fit_report(dir / "wrong.csv", 3);
      FAIL("expected schema-mismatch");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::schema_mismatch);
    }
  }

  TEST_CASE("bifurcation files round trip") {
    const auto dir = scratch("bif");
    const std::vector<BifurcationPoint> pts{{0.1, 3.6, 0.02, -1.4, Stability::undetermined_endpoint},
                                            {0.2, 3.1, -0.01, 0.5, Stability::stable}};
    write_bifurcation(dir / "b.csv", pts);
    const auto back = read_bifurcation(dir / "b.csv");
    REQUIRE(back.size() == 2);
    CHECK(back[1].omega == pts[1].omega);
    CHECK(back[1].mass == pts[1].mass);
    CHECK(back[1].stability == Stability::stable);
    CHECK(back[0].stability == Stability::undetermined_endpoint);
  }

  TEST_CASE("exit codes") {
    const auto dir = scratch("runs");
    auto r = run_args({"mass1d", "--alpha", "3", "--omega", "0.1", "--out", (dir / "m").string()});
    CHECK(r.code == 0);
    CHECK(r.out.find("mass=3.6082011277") != std::string::npos);
    CHECK(fs::exists(dir / "m" / "mass1d.json"));

    CHECK(run_args({"mass1d", "--alpha", "3", "--omega", "0.3"}).code == 2);
    CHECK(run_args({"frobnicate"}).code == 2);
    CHECK(run_args({"mass1d", "--help"}).code == 0);
    CHECK(run_args({"preset", "--list"}).code == 0);
    CHECK(run_args({"preset", "no-such-preset"}).code == 2);

    r = run_args({"evolve1d", "--omega", "0.22", "--lambda", "1.001", "--nx", "1024", "--tmax", "5", "--nt", "2000",
             "--diag_stride", "1", "--delta_bound", "1e-8", "--out", (dir / "abort").string()});
    CHECK(r.code == 4);
    CHECK(fs::exists(dir / "abort" / "diagnostics.csv"));
    CHECK(fs::exists(dir / "abort" / "manifest.json"));

    r = run_args({"groundstate", "--alpha", "1", "--dim", "3", "--omega", "0.1", "--max_iter", "3", "--continuation",
             "false", "--out", (dir / "gs").string()});
    CHECK(r.code == 3);
  }

  TEST_CASE("sweep outputs") {
    const auto dir = scratch("sweep");
    const auto r = run_args({"sweep", "--alpha", "3", "--dim", "1", "--omega_min", "0.01", "--omega_max", "0.24",
                        "--points", "60", "--out", dir.string()});
    REQUIRE(r.code == 0);
    const auto pts = read_bifurcation(dir / "bifurcation.csv");
    CHECK(pts.size() == 60);
    std::ifstream in(dir / "bifurcation.json");
    const auto meta = json::parse(in);
    CHECK(meta["omega_c"].get<double>() == doctest::Approx(0.1181265).epsilon(1e-5));
    CHECK(meta["cusp"]["non_functional"].get<bool>());
  }

  TEST_CASE("small-frequency fit carries the semilinear reference") {
    const auto dir = scratch("sweep2d");
    const auto r = run_args({"sweep", "--alpha", "1", "--dim", "2", "--omegas", "0.001,0.002,0.005,0.01", "--n", "300",
                             "--s0", "4e5", "--fit", "zero", "--out", dir.string()});
    REQUIRE(r.code == 0);
    std::ifstream in(dir / "bifurcation.json");
    const auto meta = json::parse(in);
    // Townes mass
    CHECK(meta["semilinear"]["mass"].get<double>() == doctest::Approx(11.700896).epsilon(1e-6));
    CHECK(meta["semilinear"]["norm"].get<double>() == doctest::Approx(std::sqrt(11.700896)).epsilon(1e-6));
    // mass tends to the Townes mass as omega -> 0, exponent 1/alpha - d/2 = 0
    const auto& fit = meta["fits"][0];
    CHECK(std::abs(fit["exponent"].get<double>()) < 0.05);
    const auto pts = read_bifurcation(dir / "bifurcation.csv");
    CHECK(pts.front().mass == doctest::Approx(11.700896).epsilon(5e-3));
    CHECK(fit["note"].get<std::string>().find("reference prefactor") != std::string::npos);
  }

  TEST_CASE("evolve1d outputs") {
    const auto dir = scratch("evolve");
    const auto r = run_args({"evolve1d", "--omega", "0.22", "--lambda", "1.001", "--nx", "256", "--tmax", "0.5", "--nt",
                        "1000", "--diag_stride", "10", "--snapshot_stride", "500", "--out", dir.string()});
    REQUIRE(r.code == 0);
    CHECK(r.out.find("fitted_omega=") != std::string::npos);
    std::ifstream in(dir / "manifest.json");
    const auto manifest = json::parse(in);
    CHECK(manifest["snapshots"].size() == 3);
    CHECK(manifest["config"]["omega"] == "0.22");
    const auto snap = read_csv(dir / "snapshots" / manifest["snapshots"][1]["file"].get<std::string>());
    CHECK(snap.header == std::vector<std::string>{"x", "re", "im", "abs"});
    CHECK(read_diagnostics(dir / "diagnostics.csv").size() == 101);
  }
}
