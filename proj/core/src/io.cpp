#include "spe/io.hpp"

#include <algorithm>
#include <cerrno>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "spe/error.hpp"
#include "spe/spectral.hpp"

namespace spe {

std::string_view to_string(Scheme s) {
  return s == Scheme::Polysymplectic ? "polysymplectic" : "pseudospectral";
}

std::optional<Scheme> parse_scheme(std::string_view name) {
  if (name == "polysymplectic") return Scheme::Polysymplectic;
  if (name == "pseudospectral") return Scheme::PseudoSpectral;
  return std::nullopt;
}

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

[[noreturn]] void invalid(const std::string& key, const std::string& reason) {
  throw Error(ErrorCode::InvalidValue, "InvalidValue(\"" + key + "\", \"" + reason + "\")");
}

double parse_double(const std::string& key, const std::string& value) {
  errno = 0;
  char* end = nullptr;
  const double v = std::strtod(value.c_str(), &end);
  if (value.empty() || end != value.c_str() + value.size() || errno == ERANGE || !std::isfinite(v)) {
    invalid(key, "not a finite number");
  }
  return v;
}

long parse_long(const std::string& key, const std::string& value) {
  long v = 0;
  const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
  if (ec != std::errc() || ptr != value.data() + value.size()) invalid(key, "not an integer");
  return v;
}

bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1" || value == "on") return true;
  if (value == "false" || value == "0" || value == "off") return false;
  invalid(key, "expected true or false");
}

double positive(const std::string& key, double v) {
  if (!(v > 0.0)) invalid(key, "must be positive");
  return v;
}

}  // namespace

SimConfig parse_config(std::string_view text) {
  static const std::set<std::string, std::less<>> known = {
      "scheme", "x_max",      "n_x",  "dt",      "t_final",      "soliton_m",
      "soliton_x0", "initial", "snapshot_times", "output_dir", "seed", "dealias",
      "boundary_tol", "levels", "repetitions"};

  std::map<std::string, std::string, std::less<>> values;
  std::size_t pos = 0;
  int line_no = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl == std::string_view::npos ? text.size() - pos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw Error(ErrorCode::InvalidValue,
                  "InvalidValue(\"line " + std::to_string(line_no) + "\", \"expected key = value\")");
    }
    std::string key(trim(line.substr(0, eq)));
    std::string value(trim(line.substr(eq + 1)));
    if (!known.contains(key)) throw Error(ErrorCode::UnknownKey, "UnknownKey(\"" + key + "\")");
    if (values.contains(key)) invalid(key, "given more than once");
    values.emplace(std::move(key), std::move(value));
  }

  const auto required = [&](const char* key) -> const std::string& {
    const auto it = values.find(key);
    if (it == values.end()) throw Error(ErrorCode::MissingKey, std::string("MissingKey(\"") + key + "\")");
    return it->second;
  };
  const auto optional = [&](const char* key) -> const std::string* {
    const auto it = values.find(key);
    return it == values.end() ? nullptr : &it->second;
  };

  SimConfig cfg;
  cfg.x_max = positive("x_max", parse_double("x_max", required("x_max")));
  const long n_x = parse_long("n_x", required("n_x"));
  if (n_x < 2 || n_x > (1L << 26)) invalid("n_x", "must lie in [2, 2^26]");
  cfg.n_x = static_cast<int>(n_x);
  cfg.dt = positive("dt", parse_double("dt", required("dt")));
  cfg.t_final = positive("t_final", parse_double("t_final", required("t_final")));

  if (const auto* v = optional("scheme")) {
    const auto s = parse_scheme(*v);
    if (!s) invalid("scheme", "expected polysymplectic or pseudospectral");
    cfg.scheme = *s;
  }
  if (const auto* v = optional("soliton_m")) {
    cfg.soliton_m = parse_double("soliton_m", *v);
    if (!(cfg.soliton_m > 0.0 && cfg.soliton_m < 1.0)) invalid("soliton_m", "must lie in (0, 1)");
  }
  cfg.soliton_x0 = 0.5 * cfg.x_max;
  if (const auto* v = optional("soliton_x0")) cfg.soliton_x0 = parse_double("soliton_x0", *v);
  if (const auto* v = optional("initial")) {
    if (*v == "soliton") {
      cfg.initial = InitialData::Soliton;
    } else if (*v == "zero") {
      cfg.initial = InitialData::Zero;
    } else {
      invalid("initial", "expected soliton or zero");
    }
  }
  cfg.snapshot_times = {0.0, cfg.t_final};
  if (const auto* v = optional("snapshot_times")) {
    cfg.snapshot_times.clear();
    std::stringstream ss(*v);
    std::string item;
    while (std::getline(ss, item, ',')) {
      const double t = parse_double("snapshot_times", std::string(trim(item)));
      if (t < 0.0 || t > cfg.t_final * (1.0 + 1e-12)) invalid("snapshot_times", "must lie in [0, t_final]");
      cfg.snapshot_times.push_back(t);
    }
    if (cfg.snapshot_times.empty()) invalid("snapshot_times", "empty list");
  }
  if (const auto* v = optional("output_dir")) {
    if (v->empty()) invalid("output_dir", "empty path");
    cfg.output_dir = *v;
  }
  if (const auto* v = optional("seed")) {
    const long s = parse_long("seed", *v);
    if (s < 0) invalid("seed", "must be non-negative");
    cfg.seed = static_cast<unsigned long>(s);
  }
  if (const auto* v = optional("dealias")) cfg.dealias = parse_bool("dealias", *v);
  if (const auto* v = optional("boundary_tol")) {
    cfg.boundary_tol = positive("boundary_tol", parse_double("boundary_tol", *v));
  }
  if (const auto* v = optional("levels")) {
    const long l = parse_long("levels", *v);
    if (l < 1 || l > 8) invalid("levels", "must lie in [1, 8]");
    cfg.levels = static_cast<int>(l);
  }
  if (const auto* v = optional("repetitions")) {
    const long r = parse_long("repetitions", *v);
    if (r < 1 || r > 100) invalid("repetitions", "must lie in [1, 100]");
    cfg.repetitions = static_cast<int>(r);
  }

  if (cfg.scheme == Scheme::PseudoSpectral && !is_power_of_two(cfg.n_x)) {
    invalid("n_x", "must be a power of two for the pseudospectral scheme");
  }
  try {
    (void)cfg.grid();
  } catch (const Error&) {
    invalid("t_final", "must be a whole number of time steps dt");
  }
  return cfg;
}

SimConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) raise(ErrorCode::IoError, "cannot read config " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

std::vector<int> snap_times(const std::vector<double>& times, const GridSpec& grid) {
  std::vector<int> steps;
  steps.reserve(times.size());
  for (double t : times) {
    const long j = std::lround(t / grid.dt());
    steps.push_back(static_cast<int>(std::clamp<long>(j, 0, grid.n_t())));
  }
  return steps;
}

std::string format_number(double v) {
  if (v == 0.0) return "0";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) raise(ErrorCode::IoError, "cannot write " + path.string());
  return out;
}

void finish(std::ofstream& out, const std::filesystem::path& path) {
  out.flush();
  if (!out) raise(ErrorCode::IoError, "write failed for " + path.string());
}

std::string csv_safe(std::string s) {
  std::replace(s.begin(), s.end(), ',', ';');
  std::replace(s.begin(), s.end(), '\n', ' ');
  std::replace(s.begin(), s.end(), '\r', ' ');
  return s;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> cells;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

double read_double(const std::string& s, const std::filesystem::path& path) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size()) {
    raise(ErrorCode::IoError, "malformed number '" + s + "' in " + path.string());
  }
  return v;
}

}  // namespace

void write_snapshot(const std::filesystem::path& path, const FieldSnapshot& snapshot, double dx) {
  std::ofstream out = open_output(path);
  out << "x,u\n";
  for (std::size_t i = 0; i < snapshot.u.size(); ++i) {
    out << format_number(static_cast<double>(i) * dx) << ',' << format_number(snapshot.u[i]) << '\n';
  }
  finish(out, path);
}

void write_report(const std::filesystem::path& path, const RunReport& report,
                  const ReportOptions& opts) {
  std::ofstream out = open_output(path);
  const GridSpec& g = report.grid;
  out << "scheme=" << to_string(report.scheme) << '\n'
      << "x_max=" << format_number(g.x_max()) << '\n'
      << "n_x=" << g.n_x() << '\n'
      << "dx=" << format_number(g.dx()) << '\n'
      << "dt=" << format_number(g.dt()) << '\n'
      << "n_t=" << g.n_t() << '\n';
  if (opts.include_timing) out << "wall_seconds=" << format_number(report.wall_seconds) << '\n';
  for (const auto& [t, s] : report.sigma_by_time) {
    out << "sigma@" << format_number(t) << '=' << format_number(s) << '\n';
  }
  for (const auto& [name, d] : report.invariant_drift) {
    out << "drift." << name << '=' << format_number(d) << '\n';
  }
  finish(out, path);
}

void write_report(const std::filesystem::path& path, const ConvergenceTable& table,
                  const ReportOptions& opts) {
  std::ofstream out = open_output(path);
  out << "scheme,dx,dt,sigma_final," << (opts.include_timing ? "wall_seconds," : "")
      << "measured_order,error\n";
  for (const auto& row : table.rows) {
    out << to_string(table.scheme) << ',' << format_number(row.dx) << ',' << format_number(row.dt)
        << ',' << format_number(row.sigma_final) << ',';
    if (opts.include_timing) out << format_number(row.wall_seconds) << ',';
    if (row.measured_order) out << format_number(*row.measured_order);
    out << ',' << csv_safe(row.error) << '\n';
  }
  finish(out, path);
}

void write_report(const std::filesystem::path& path, const ComparisonReport& report,
                  const ReportOptions& opts) {
  std::ofstream out = open_output(path);
  out << "scheme,soliton_m,soliton_x0,x_max,n_x,dx,dt,n_t,t_final,sigma_final"
      << (opts.include_timing ? ",wall_seconds" : "") << '\n';
  for (const auto& row : report.rows) {
    const GridSpec& g = row.report.grid;
    out << to_string(row.report.scheme) << ',' << format_number(report.params.m) << ','
        << format_number(report.params.x0) << ',' << format_number(g.x_max()) << ',' << g.n_x()
        << ',' << format_number(g.dx()) << ',' << format_number(g.dt()) << ',' << g.n_t() << ','
        << format_number(report.t_final) << ',' << format_number(row.sigma_final);
    if (opts.include_timing) out << ',' << format_number(row.report.wall_seconds);
    out << '\n';
  }
  finish(out, path);
}

SnapshotCsv read_snapshot(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) raise(ErrorCode::IoError, "cannot read " + path.string());
  std::string line;
  if (!std::getline(in, line) || line != "x,u") {
    raise(ErrorCode::IoError, "missing x,u header in " + path.string());
  }
  SnapshotCsv snap;
  while (std::getline(in, line)) {
    const auto cells = split_csv(line);
    if (cells.size() != 2) raise(ErrorCode::IoError, "malformed row in " + path.string());
    snap.x.push_back(read_double(cells[0], path));
    snap.u.push_back(read_double(cells[1], path));
  }
  return snap;
}

ConvergenceTable read_convergence_table(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) raise(ErrorCode::IoError, "cannot read " + path.string());
  std::string line;
  if (!std::getline(in, line)) raise(ErrorCode::IoError, "empty table " + path.string());
  const auto header = split_csv(line);
  const bool timing = std::find(header.begin(), header.end(), "wall_seconds") != header.end();
  const std::size_t width = timing ? 7 : 6;
  if (header.size() != width) raise(ErrorCode::IoError, "unexpected header in " + path.string());

  ConvergenceTable table;
  while (std::getline(in, line)) {
    const auto cells = split_csv(line);
    if (cells.size() != width) raise(ErrorCode::IoError, "malformed row in " + path.string());
    const auto scheme = parse_scheme(cells[0]);
    if (!scheme) raise(ErrorCode::IoError, "unknown scheme in " + path.string());
    table.scheme = *scheme;
    ConvergenceRow row;
    std::size_t c = 1;
    row.dx = read_double(cells[c++], path);
    row.dt = read_double(cells[c++], path);
    row.sigma_final = read_double(cells[c++], path);
    if (timing) row.wall_seconds = read_double(cells[c++], path);
    if (!cells[c].empty()) row.measured_order = read_double(cells[c], path);
    ++c;
    row.error = cells[c];
    table.rows.push_back(std::move(row));
  }
  return table;
}

}  // namespace spe
