#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "quasisol/bifurcation.hpp"
#include "quasisol/diagnostics.hpp"
#include "quasisol/evolve1d.hpp"
#include "quasisol/evolver.hpp"

namespace quasisol::cli {

namespace fs = std::filesystem;
using nlohmann::json;

/// Comma-separated table with a header row. Numbers are written with %.17g.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  /// Parses the named column as doubles; schema_mismatch if it is absent.
  [[nodiscard]] std::vector<double> numeric(const std::string& name) const;
  [[nodiscard]] std::vector<std::string> text(const std::string& name) const;
};

CsvTable read_csv(const fs::path& path);
void write_csv(const fs::path& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& columns);
void write_json(const fs::path& path, const json& value);
std::string format_number(double value);

/// Columns s, r, phi.
void write_profile(const fs::path& path, const RadialProfile& profile);
/// Columns x, phi.
void write_profile_1d(const fs::path& path, const std::vector<double>& x, const std::vector<double>& phi);

/// Columns omega, mass, energy, dmass_domega, stability.
void write_bifurcation(const fs::path& path, const std::vector<BifurcationPoint>& points);
std::vector<BifurcationPoint> read_bifurcation(const fs::path& path);
json to_json(const AsymptoteFit& fit);

/// Columns t, linf, mass, energy, delta.
void write_diagnostics(const fs::path& path, const Diagnostics& diagnostics);
Diagnostics read_diagnostics(const fs::path& path);

/// One CSV per snapshot (x, re, im, abs) under dir; returns manifest entries.
json write_snapshots(const fs::path& dir, const std::vector<Snapshot1D>& snapshots, const Fourier1DGrid& grid);
/// One CSV per snapshot (r, re, im, abs) under dir; returns manifest entries.
json write_snapshots(const fs::path& dir, const std::vector<RadialSnapshot>& snapshots, const ChebGrid& grid);

/// Columns x, re, im, abs for a single 1D field.
void write_field(const fs::path& path, const Field1D& field);
/// Columns r, re, im, abs for a single radial field.
void write_field(const fs::path& path, const RadialField& field);

}  // namespace quasisol::cli
