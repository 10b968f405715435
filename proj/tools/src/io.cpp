#include "quasisol/cli/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "quasisol/errors.hpp"

namespace quasisol::cli {

namespace {

std::ofstream open_for_write(const fs::path& path) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path);
  require(out.good(), ErrorCode::io_error, "cannot write " + path.string());
  return out;
}

std::vector<std::string> split_row(const std::string& line) {
  std::vector<std::string> cells;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

double parse_double(const std::string& cell, const std::string& column) {
  double value = 0.0;
  const auto* end = cell.data() + cell.size();
  const auto [ptr, ec] = std::from_chars(cell.data(), end, value);
  if (ec != std::errc() || ptr != end) {
    // from_chars rejects "inf"/"nan" spellings produced by some writers.
    try {
      std::size_t used = 0;
      value = std::stod(cell, &used);
      require(used == cell.size(), ErrorCode::schema_mismatch, "");
    } catch (const std::exception&) {
      fail(ErrorCode::schema_mismatch, "column '" + column + "': cannot parse '" + cell + "' as a number");
    }
  }
  return value;
}

std::size_t column_index(const CsvTable& table, const std::string& name) {
  for (std::size_t i = 0; i < table.header.size(); ++i) {
    if (table.header[i] == name) return i;
  }
  fail(ErrorCode::schema_mismatch, "missing column '" + name + "'");
}

Stability parse_stability(const std::string& s) {
  if (s == "stable") return Stability::stable;
  if (s == "unstable") return Stability::unstable;
  if (s == "undetermined-endpoint") return Stability::undetermined_endpoint;
  fail(ErrorCode::schema_mismatch, "unknown stability label '" + s + "'");
}

std::string snapshot_name(std::size_t index) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "snap_%05zu.csv", index);
  return buf;
}

}  // namespace

std::string format_number(double value) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

std::vector<double> CsvTable::numeric(const std::string& name) const {
  const std::size_t col = column_index(*this, name);
  std::vector<double> out;
  out.reserve(rows.size());
  for (const auto& row : rows) {
    require(col < row.size(), ErrorCode::schema_mismatch, "short row in column '" + name + "'");
    out.push_back(parse_double(row[col], name));
  }
  return out;
}

std::vector<std::string> CsvTable::text(const std::string& name) const {
  const std::size_t col = column_index(*this, name);
  std::vector<std::string> out;
  for (const auto& row : rows) {
    require(col < row.size(), ErrorCode::schema_mismatch, "short row in column '" + name + "'");
    out.push_back(row[col]);
  }
  return out;
}

CsvTable read_csv(const fs::path& path) {
  std::ifstream in(path);
  require(in.good(), ErrorCode::io_error, "cannot read " + path.string());
  CsvTable table;
  std::string line;
  require(static_cast<bool>(std::getline(in, line)), ErrorCode::schema_mismatch, path.string() + " is empty");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  table.header = split_row(line);
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto cells = split_row(line);
    require(cells.size() == table.header.size(), ErrorCode::schema_mismatch,
            path.string() + ": row has " + std::to_string(cells.size()) + " cells, header has " +
                std::to_string(table.header.size()));
    table.rows.push_back(std::move(cells));
  }
  return table;
}

void write_csv(const fs::path& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& columns) {
  require(header.size() == columns.size(), ErrorCode::length_mismatch, "header and column count differ");
  const std::size_t rows = columns.empty() ? 0 : columns.front().size();
  for (const auto& c : columns) {
    require(c.size() == rows, ErrorCode::length_mismatch, "columns differ in length");
  }
  auto out = open_for_write(path);
  for (std::size_t i = 0; i < header.size(); ++i) out << (i ? "," : "") << header[i];
  out << '\n';
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < columns.size(); ++c) out << (c ? "," : "") << format_number(columns[c][r]);
    out << '\n';
  }
}

void write_json(const fs::path& path, const json& value) {
  auto out = open_for_write(path);
  out << value.dump(2) << '\n';
}

void write_profile(const fs::path& path, const RadialProfile& profile) {
  const auto& s = profile.grid->s_nodes();
  std::vector<double> sv(s.begin(), s.end()), r, phi(profile.values.begin(), profile.values.end());
  for (double v : sv) r.push_back(std::sqrt(v));
  write_csv(path, {"s", "r", "phi"}, {sv, r, phi});
}

void write_profile_1d(const fs::path& path, const std::vector<double>& x, const std::vector<double>& phi) {
  write_csv(path, {"x", "phi"}, {x, phi});
}

void write_bifurcation(const fs::path& path, const std::vector<BifurcationPoint>& points) {
  auto out = open_for_write(path);
  out << "omega,mass,energy,dmass_domega,stability\n";
  for (const auto& p : points) {
    out << format_number(p.omega) << ',' << format_number(p.mass) << ',' << format_number(p.energy) << ','
        << format_number(p.dmass_domega) << ',' << to_string(p.stability) << '\n';
  }
}

std::vector<BifurcationPoint> read_bifurcation(const fs::path& path) {
  const auto table = read_csv(path);
  const auto omega = table.numeric("omega");
  const auto mass = table.numeric("mass");
  const auto energy = table.numeric("energy");
  const auto slope = table.numeric("dmass_domega");
  const auto stability = table.text("stability");
  std::vector<BifurcationPoint> points;
  for (std::size_t i = 0; i < omega.size(); ++i) {
    points.push_back({omega[i], mass[i], energy[i], slope[i], parse_stability(stability[i])});
  }
  return points;
}

json to_json(const AsymptoteFit& fit) {
  return {{"law", std::string(to_string(fit.law))},
          {"coefficient", fit.coefficient},
          {"exponent", fit.exponent},
          {"window", {fit.window_lo, fit.window_hi}},
          {"residual", fit.residual},
          {"note", fit.note}};
}

void write_diagnostics(const fs::path& path, const Diagnostics& d) {
  write_csv(path, {"t", "linf", "mass", "energy", "delta"}, {d.times, d.linf, d.mass, d.energy, d.delta});
}

Diagnostics read_diagnostics(const fs::path& path) {
  const auto table = read_csv(path);
  Diagnostics d;
  d.times = table.numeric("t");
  d.linf = table.numeric("linf");
  d.mass = table.numeric("mass");
  d.energy = table.numeric("energy");
  d.delta = table.numeric("delta");
  return d;
}

void write_field(const fs::path& path, const Field1D& field) {
  std::vector<double> re, im, ab;
  for (const auto& v : field.values) {
    re.push_back(v.real());
    im.push_back(v.imag());
    ab.push_back(std::abs(v));
  }
  write_csv(path, {"x", "re", "im", "abs"}, {field.grid->x_nodes(), re, im, ab});
}

void write_field(const fs::path& path, const RadialField& field) {
  std::vector<double> r, re(field.re.begin(), field.re.end()), im(field.im.begin(), field.im.end()), ab;
  for (Eigen::Index k = 0; k < field.re.size(); ++k) {
    r.push_back(std::sqrt(field.grid->s_nodes()[k]));
    ab.push_back(std::hypot(field.re[k], field.im[k]));
  }
  write_csv(path, {"r", "re", "im", "abs"}, {r, re, im, ab});
}

json write_snapshots(const fs::path& dir, const std::vector<Snapshot1D>& snapshots, const Fourier1DGrid& grid) {
  json entries = json::array();
  for (std::size_t i = 0; i < snapshots.size(); ++i) {
    std::vector<double> re, im, ab;
    for (const auto& v : snapshots[i].values) {
      re.push_back(v.real());
      im.push_back(v.imag());
      ab.push_back(std::abs(v));
    }
    const auto name = snapshot_name(i);
    write_csv(dir / name, {"x", "re", "im", "abs"}, {grid.x_nodes(), re, im, ab});
    entries.push_back({{"index", i}, {"time", snapshots[i].time}, {"file", name}});
  }
  return entries;
}

json write_snapshots(const fs::path& dir, const std::vector<RadialSnapshot>& snapshots, const ChebGrid& grid) {
  json entries = json::array();
  std::vector<double> r;
  for (Eigen::Index k = 0; k < grid.s_nodes().size(); ++k) r.push_back(std::sqrt(grid.s_nodes()[k]));
  for (std::size_t i = 0; i < snapshots.size(); ++i) {
    const auto& snap = snapshots[i];
    std::vector<double> re(snap.re.begin(), snap.re.end()), im(snap.im.begin(), snap.im.end()), ab;
    for (Eigen::Index k = 0; k < snap.re.size(); ++k) ab.push_back(std::hypot(snap.re[k], snap.im[k]));
    const auto name = snapshot_name(i);
    write_csv(dir / name, {"r", "re", "im", "abs"}, {r, re, im, ab});
    entries.push_back({{"index", i}, {"time", snap.time}, {"file", name}});
  }
  return entries;
}

}  // namespace quasisol::cli
