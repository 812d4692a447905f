// Command-line front end: configuration, dispatch and table output.
//
//   acsf <command> [flags]      command: solve sample verify simulate entropy tangent product
//
// Exit codes: 0 success, 1 computational failure (or a failed verify check),
// 2 malformed input.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "acsf/acsf.hpp"

namespace acsf::cli {

inline constexpr const char* kVersion = "1.0.0";
inline constexpr const char* kOutputDirEnv = "ACSF_OUTPUT_DIR";

/// Malformed input; maps to exit code 2.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// --help or --version; the message is the text to print.
class EarlyExit : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Command { Solve, Sample, Verify, Simulate, Entropy, Tangent, Product };
enum class Spacing { Linear, Log };
enum class Format { Csv, Json };

inline const std::map<std::string, Command>& command_names() {
  static const std::map<std::string, Command> names{
      {"solve", Command::Solve},       {"sample", Command::Sample},
      {"verify", Command::Verify},     {"simulate", Command::Simulate},
      {"entropy", Command::Entropy},   {"tangent", Command::Tangent},
      {"product", Command::Product}};
  return names;
}

inline std::string to_string(Command c) {
  for (const auto& [name, value] : command_names())
    if (value == c) return name;
  return "?";
}

struct TimeGrid {
  double start = -1e6;
  double end = -1e-6;
  std::size_t count = 13;
  Spacing spacing = Spacing::Log;
};

struct RunConfig {
  Command command = Command::Solve;
  FrequencyVector freqs{1, 2};
  std::vector<FrequencyVector> factors;  // product command
  FamilyKind kind = FamilyKind::Torus;
  std::optional<double> helix_constant;
  double window = 0.0;  // helix sampling half-width, 0 = default
  std::optional<std::vector<double>> times;
  TimeGrid grid;
  std::size_t n_points = 1024;
  IntegratorConfig integrator;
  EntropyOptions entropy;
  std::string output_path;  // empty = stdout
  Format format = Format::Csv;
  std::uint64_t seed = 1;
  bool quick = false;
  std::string from_file;
  bool product_entropy = false;
};

// ---------------------------------------------------------------------------
// Parsing

inline double parse_number(const std::string& s) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw UsageError("not a number: '" + s + "'");
  }
  if (used != s.size()) throw UsageError("not a number: '" + s + "'");
  return v;
}

inline std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) out.push_back(cur);
  return out;
}

inline std::vector<double> parse_number_list(const std::string& s) {
  std::vector<double> out;
  for (const auto& tok : split(s, ',')) out.push_back(parse_number(tok));
  if (out.empty()) throw UsageError("empty number list");
  return out;
}

inline FrequencyVector parse_freqs(const std::string& s) {
  std::vector<int> ks;
  for (const auto& tok : split(s, ',')) {
    const double v = parse_number(tok);
    if (v != std::floor(v) || std::abs(v) > 1000) throw UsageError("frequency must be an integer: " + tok);
    ks.push_back(static_cast<int>(v));
  }
  try {
    return FrequencyVector(std::move(ks));
  } catch (const DomainError& e) {
    throw UsageError(std::string("--freqs ") + s + ": " + e.what());
  }
}

inline FrequencyVector freqs_from_json(const nlohmann::json& j) {
  try {
    return FrequencyVector(j.get<std::vector<int>>());
  } catch (const DomainError& e) {
    throw UsageError(std::string("config freqs: ") + e.what());
  }
}

inline Scheme parse_scheme(const std::string& s) {
  if (s == "semi-implicit" || s == "semiimplicit") return Scheme::SemiImplicit;
  if (s == "explicit") return Scheme::Explicit;
  throw UsageError("unknown scheme '" + s + "' (explicit|semi-implicit)");
}

inline FamilyKind parse_kind(const std::string& s) {
  if (s == "torus") return FamilyKind::Torus;
  if (s == "helix") return FamilyKind::Helix;
  throw UsageError("unknown kind '" + s + "' (torus|helix)");
}

inline Spacing parse_spacing(const std::string& s) {
  if (s == "log") return Spacing::Log;
  if (s == "linear") return Spacing::Linear;
  throw UsageError("unknown spacing '" + s + "' (linear|log)");
}

inline Format parse_format(const std::string& s) {
  if (s == "csv") return Format::Csv;
  if (s == "json") return Format::Json;
  throw UsageError("unknown format '" + s + "' (csv|json)");
}

inline void check_keys(const nlohmann::json& j, std::initializer_list<const char*> allowed,
                       const std::string& where) {
  for (const auto& [key, _] : j.items()) {
    if (std::find_if(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; }) ==
        allowed.end())
      throw UsageError("unknown key '" + key + "' in " + where);
  }
}

/// Applies a JSON config document (RunConfig schema) on top of cfg.
inline void apply_config_json(const nlohmann::json& j, RunConfig& cfg) {
  if (!j.is_object()) throw UsageError("config file must hold a JSON object");
  check_keys(j,
             {"command", "freqs", "factors", "kind", "helix_constant", "window", "times",
              "n_points", "integrator", "entropy", "output", "seed", "quick", "from_file",
              "product_entropy"},
             "config");
  try {
    if (j.contains("command")) {
      const auto name = j["command"].get<std::string>();
      const auto it = command_names().find(name);
      if (it == command_names().end()) throw UsageError("unknown command '" + name + "'");
      cfg.command = it->second;
    }
    if (j.contains("freqs")) cfg.freqs = freqs_from_json(j["freqs"]);
    if (j.contains("factors")) {
      cfg.factors.clear();
      for (const auto& f : j["factors"]) cfg.factors.push_back(freqs_from_json(f));
    }
    if (j.contains("kind")) cfg.kind = parse_kind(j["kind"].get<std::string>());
    if (j.contains("helix_constant")) cfg.helix_constant = j["helix_constant"].get<double>();
    if (j.contains("window")) cfg.window = j["window"].get<double>();
    if (j.contains("times")) {
      const auto& t = j["times"];
      if (t.is_array()) {
        cfg.times = t.get<std::vector<double>>();
      } else {
        check_keys(t, {"start", "end", "count", "spacing"}, "times");
        cfg.times.reset();
        if (t.contains("start")) cfg.grid.start = t["start"].get<double>();
        if (t.contains("end")) cfg.grid.end = t["end"].get<double>();
        if (t.contains("count")) cfg.grid.count = t["count"].get<std::size_t>();
        if (t.contains("spacing")) cfg.grid.spacing = parse_spacing(t["spacing"].get<std::string>());
      }
    }
    if (j.contains("n_points")) cfg.n_points = j["n_points"].get<std::size_t>();
    if (j.contains("integrator")) {
      const auto& ig = j["integrator"];
      check_keys(ig, {"dt", "scheme", "resample_every", "max_steps"}, "integrator");
      if (ig.contains("dt")) cfg.integrator.dt = ig["dt"].get<double>();
      if (ig.contains("scheme")) cfg.integrator.scheme = parse_scheme(ig["scheme"].get<std::string>());
      if (ig.contains("resample_every"))
        cfg.integrator.resample_every = ig["resample_every"].get<std::size_t>();
      if (ig.contains("max_steps")) cfg.integrator.max_steps = ig["max_steps"].get<std::size_t>();
    }
    if (j.contains("entropy")) {
      const auto& en = j["entropy"];
      check_keys(en, {"restarts", "tolerance"}, "entropy");
      if (en.contains("restarts")) cfg.entropy.restarts = en["restarts"].get<std::size_t>();
      if (en.contains("tolerance")) cfg.entropy.tolerance = en["tolerance"].get<double>();
    }
    if (j.contains("output")) {
      const auto& out = j["output"];
      check_keys(out, {"path", "format"}, "output");
      if (out.contains("path")) cfg.output_path = out["path"].get<std::string>();
      if (out.contains("format")) cfg.format = parse_format(out["format"].get<std::string>());
    }
    if (j.contains("seed")) cfg.seed = j["seed"].get<std::uint64_t>();
    if (j.contains("quick")) cfg.quick = j["quick"].get<bool>();
    if (j.contains("from_file")) cfg.from_file = j["from_file"].get<std::string>();
    if (j.contains("product_entropy")) cfg.product_entropy = j["product_entropy"].get<bool>();
  } catch (const nlohmann::json::exception& e) {
    throw UsageError(std::string("config: ") + e.what());
  }
}

/// Times requested by the configuration, in grid order.
inline std::vector<double> resolve_times(const RunConfig& cfg) {
  if (cfg.times) return *cfg.times;
  const auto& g = cfg.grid;
  if (g.count == 0) return {};
  if (g.count == 1) return {g.start};
  std::vector<double> ts(g.count);
  if (g.spacing == Spacing::Linear) {
    for (std::size_t i = 0; i < g.count; ++i)
      ts[i] = g.start + (g.end - g.start) * double(i) / double(g.count - 1);
  } else {
    if (!(g.start * g.end > 0.0))
      throw UsageError("log spacing needs start and end of the same sign, both non-zero");
    const double sign = g.start < 0.0 ? -1.0 : 1.0;
    const double a = std::log(std::abs(g.start)), b = std::log(std::abs(g.end));
    for (std::size_t i = 0; i < g.count; ++i)
      ts[i] = sign * std::exp(a + (b - a) * double(i) / double(g.count - 1));
    ts.front() = g.start;
    ts.back() = g.end;
  }
  return ts;
}

inline void validate(const RunConfig& cfg) {
  const auto times = resolve_times(cfg);
  const bool torus_only = cfg.command == Command::Simulate || cfg.command == Command::Tangent ||
                          cfg.command == Command::Product;
  if (torus_only && cfg.kind != FamilyKind::Torus)
    throw UsageError(to_string(cfg.command) + " is defined for torus curves only");
  if (cfg.kind == FamilyKind::Torus && cfg.command != Command::Verify)
    for (double t : times)
      if (!(t < 0.0)) throw UsageError("torus curves exist for t < 0 only, got " + std::to_string(t));
  for (double t : times)
    if (!std::isfinite(t)) throw UsageError("times must be finite");
  if (cfg.n_points < 8) throw UsageError("--points must be at least 8");
  if (!(cfg.integrator.dt > 0.0)) throw UsageError("--dt must be positive");
  if (cfg.window < 0.0) throw UsageError("--window must be non-negative");
  if (cfg.command == Command::Simulate) {
    if (times.size() < 2) throw UsageError("simulate needs at least two times (start, snapshots...)");
    for (std::size_t i = 1; i < times.size(); ++i)
      if (!(times[i] > times[i - 1])) throw UsageError("simulate times must increase");
  }
  if (cfg.command == Command::Entropy || cfg.command == Command::Tangent)
    for (std::size_t i = 1; i < times.size(); ++i)
      if (!(times[i] > times[i - 1])) throw UsageError("times must increase");
}

/// Parses argv (argv[0] is the program name).  Values from --config are applied
/// first; explicit flags override them.
inline RunConfig parse_config(int argc, const char* const* argv) {
  CLI::App app{"Ancient curve-shortening-flow laboratory", "acsf"};
  app.set_version_flag("--version", kVersion);

  std::string command;
  std::string freqs, kind, times, spacing, scheme, format, out, config, from_file;
  std::vector<std::string> factor_list;
  double helix_c = 0.0, window = 0.0, t_start = 0.0, t_end = 0.0, dt = 0.0, tolerance = 0.0;
  std::size_t t_count = 0, points = 0, resample_every = 0, max_steps = 0, restarts = 0;
  std::uint64_t seed = 0;
  bool quick = false, product_entropy = false;

  std::vector<std::string> names;
  for (const auto& [n, _] : command_names()) names.push_back(n);
  app.add_option("command", command, "solve|sample|verify|simulate|entropy|tangent|product")
      ->check(CLI::IsMember(names));
  auto* o_freqs = app.add_option("--freqs", freqs, "increasing positive integers, e.g. 1,2");
  auto* o_factor = app.add_option("--factor", factor_list, "product factor frequencies (repeat)");
  auto* o_kind = app.add_option("--kind", kind, "torus|helix");
  auto* o_helix_c = app.add_option("--helix-c", helix_c, "helix integration constant C");
  auto* o_window = app.add_option("--window", window, "helix sampling half-width S");
  auto* o_times = app.add_option("--times", times, "explicit comma-separated times");
  auto* o_start = app.add_option("--t-start", t_start, "time grid start");
  auto* o_end = app.add_option("--t-end", t_end, "time grid end");
  auto* o_count = app.add_option("--t-count", t_count, "time grid size");
  auto* o_spacing = app.add_option("--spacing", spacing, "linear|log");
  auto* o_points = app.add_option("--points", points, "samples per curve");
  auto* o_dt = app.add_option("--dt", dt, "integrator time step");
  auto* o_scheme = app.add_option("--scheme", scheme, "explicit|semi-implicit");
  auto* o_resample = app.add_option("--resample-every", resample_every, "steps between resamples");
  auto* o_max_steps = app.add_option("--max-steps", max_steps, "integrator step budget");
  auto* o_restarts = app.add_option("--restarts", restarts, "entropy optimizer restarts");
  auto* o_tol = app.add_option("--tolerance", tolerance, "entropy optimizer tolerance");
  auto* o_seed = app.add_option("--seed", seed, "seed for randomized restarts");
  auto* o_out = app.add_option("--out", out, "output path (default stdout)");
  auto* o_format = app.add_option("--format", format, "csv|json");
  app.add_option("--config", config, "JSON config file");
  auto* o_quick = app.add_flag("--quick", quick, "smaller verify suite");
  auto* o_from = app.add_option("--from-file", from_file, "simulate: initial curve from a sample CSV");
  auto* o_pe = app.add_flag("--product-entropy", product_entropy, "product: run the entropy check");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    throw EarlyExit(app.help());
  } catch (const CLI::CallForVersion&) {
    throw EarlyExit(std::string(kVersion) + "\n");
  } catch (const CLI::ParseError& e) {
    throw UsageError(e.what());
  }

  RunConfig cfg;
  if (!config.empty()) {
    std::ifstream in(config);
    if (!in) throw UsageError("cannot open config file " + config);
    nlohmann::json j;
    try {
      in >> j;
    } catch (const nlohmann::json::exception& e) {
      throw UsageError("config file " + config + ": " + e.what());
    }
    apply_config_json(j, cfg);
  }
  if (!command.empty()) {
    cfg.command = command_names().at(command);
  } else if (config.empty()) {
    throw UsageError("missing command");
  }
  if (o_freqs->count()) cfg.freqs = parse_freqs(freqs);
  if (o_factor->count()) {
    cfg.factors.clear();
    for (const auto& f : factor_list) cfg.factors.push_back(parse_freqs(f));
  }
  if (o_kind->count()) cfg.kind = parse_kind(kind);
  if (o_helix_c->count()) cfg.helix_constant = helix_c;
  if (o_window->count()) cfg.window = window;
  if (o_times->count()) cfg.times = parse_number_list(times);
  if (o_start->count() || o_end->count() || o_count->count() || o_spacing->count()) {
    if (o_times->count()) throw UsageError("--times cannot be combined with a time grid");
    cfg.times.reset();
  }
  if (o_start->count()) cfg.grid.start = t_start;
  if (o_end->count()) cfg.grid.end = t_end;
  if (o_count->count()) cfg.grid.count = t_count;
  if (o_spacing->count()) cfg.grid.spacing = parse_spacing(spacing);
  if (o_points->count()) cfg.n_points = points;
  if (o_dt->count()) cfg.integrator.dt = dt;
  if (o_scheme->count()) cfg.integrator.scheme = parse_scheme(scheme);
  if (o_resample->count()) cfg.integrator.resample_every = resample_every;
  if (o_max_steps->count()) cfg.integrator.max_steps = max_steps;
  if (o_restarts->count()) cfg.entropy.restarts = restarts;
  if (o_tol->count()) cfg.entropy.tolerance = tolerance;
  if (o_seed->count()) cfg.seed = seed;
  if (o_out->count()) cfg.output_path = out;
  if (o_format->count()) cfg.format = parse_format(format);
  if (o_quick->count()) cfg.quick = quick;
  if (o_from->count()) cfg.from_file = from_file;
  if (o_pe->count()) cfg.product_entropy = product_entropy;
  cfg.entropy.seed = cfg.seed;

  validate(cfg);
  return cfg;
}

inline RunConfig parse_config(const std::vector<std::string>& args) {
  std::vector<const char*> argv{"acsf"};
  for (const auto& a : args) argv.push_back(a.c_str());
  return parse_config(int(argv.size()), argv.data());
}

// ---------------------------------------------------------------------------
// Tables

using Cell = std::variant<double, long long, std::string>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  void add(std::vector<Cell> row) {
    if (row.size() != columns.size()) throw std::logic_error("table row width mismatch");
    rows.push_back(std::move(row));
  }
};

/// 17 significant digits round-trip every double.
inline std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::string cell_text(const Cell& c) {
  if (const auto* d = std::get_if<double>(&c)) return format_double(*d);
  if (const auto* i = std::get_if<long long>(&c)) return std::to_string(*i);
  return std::get<std::string>(c);
}

inline void write_csv(const Table& table, std::ostream& out) {
  for (std::size_t c = 0; c < table.columns.size(); ++c)
    out << (c ? "," : "") << table.columns[c];
  out << '\n';
  for (const auto& row : table.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) out << (c ? "," : "") << cell_text(row[c]);
    out << '\n';
  }
}

inline nlohmann::json config_echo(const RunConfig& cfg) {
  nlohmann::json j;
  j["command"] = to_string(cfg.command);
  j["freqs"] = cfg.freqs.values();
  if (!cfg.factors.empty()) {
    j["factors"] = nlohmann::json::array();
    for (const auto& f : cfg.factors) j["factors"].push_back(f.values());
  }
  j["kind"] = to_string(cfg.kind);
  if (cfg.helix_constant) j["helix_constant"] = *cfg.helix_constant;
  j["window"] = cfg.window;
  j["times"] = resolve_times(cfg);
  j["n_points"] = cfg.n_points;
  j["integrator"] = {{"dt", cfg.integrator.dt},
                     {"scheme", cfg.integrator.scheme == Scheme::Explicit ? "explicit" : "semi-implicit"},
                     {"resample_every", cfg.integrator.resample_every},
                     {"max_steps", cfg.integrator.max_steps}};
  j["entropy"] = {{"restarts", cfg.entropy.restarts}, {"tolerance", cfg.entropy.tolerance}};
  j["seed"] = cfg.seed;
  return j;
}

inline void write_json(const Table& table, const RunConfig& cfg, std::ostream& out) {
  nlohmann::ordered_json doc;
  doc["meta"] = {{"version", kVersion}, {"config", config_echo(cfg)}};
  doc["rows"] = nlohmann::ordered_json::array();
  for (const auto& row : table.rows) {
    nlohmann::ordered_json rec;
    for (std::size_t c = 0; c < row.size(); ++c) {
      const auto& cell = row[c];
      if (const auto* d = std::get_if<double>(&cell)) {
        if (std::isfinite(*d))
          rec[table.columns[c]] = *d;
        else
          rec[table.columns[c]] = format_double(*d);
      } else if (const auto* i = std::get_if<long long>(&cell)) {
        rec[table.columns[c]] = *i;
      } else {
        rec[table.columns[c]] = std::get<std::string>(cell);
      }
    }
    doc["rows"].push_back(std::move(rec));
  }
  out << doc.dump(2) << '\n';
}

inline std::filesystem::path resolve_output_path(const std::string& path) {
  std::filesystem::path p(path);
  if (p.is_relative()) {
    if (const char* dir = std::getenv(kOutputDirEnv); dir && *dir) p = std::filesystem::path(dir) / p;
  }
  return p;
}

inline void emit(const Table& table, const RunConfig& cfg, std::ostream& stdout_stream) {
  auto write = [&](std::ostream& os) {
    if (cfg.format == Format::Csv)
      write_csv(table, os);
    else
      write_json(table, cfg, os);
  };
  if (cfg.output_path.empty()) {
    write(stdout_stream);
    return;
  }
  const auto path = resolve_output_path(cfg.output_path);
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream file(path, std::ios::binary);
  if (!file) throw std::runtime_error("cannot open output file " + path.string());
  write(file);
}

// ---------------------------------------------------------------------------
// Commands

inline RadiusProfile make_profile(const RunConfig& cfg) {
  if (cfg.kind == FamilyKind::Torus) return RadiusProfile::torus(cfg.freqs);
  return cfg.helix_constant ? RadiusProfile::helix_with_constant(cfg.freqs, *cfg.helix_constant)
                            : RadiusProfile::helix(cfg.freqs);
}

inline HelixFamily make_helix(const RunConfig& cfg) {
  return HelixFamily(make_profile(cfg), cfg.window);
}

inline Table run_solve(const RunConfig& cfg) {
  const auto profile = make_profile(cfg);
  Table table{{"t", "r", "F_residual"}, {}};
  for (double t : resolve_times(cfg))
    table.add({t, profile.radius(t), profile.potential_residual(t)});
  return table;
}

inline Table run_sample(const RunConfig& cfg) {
  Table table;
  std::size_t dim = cfg.kind == FamilyKind::Torus ? 2 * cfg.freqs.size() : 2 * cfg.freqs.size() + 1;
  table.columns = {"t", "i", "param"};
  for (std::size_t c = 0; c < dim; ++c) table.columns.push_back("x" + std::to_string(c + 1));
  for (double t : resolve_times(cfg)) {
    Polyline pl = cfg.kind == FamilyKind::Torus ? TorusCurveFamily(cfg.freqs).sample(t, cfg.n_points)
                                                : make_helix(cfg).sample(t, cfg.n_points);
    const double w = cfg.kind == FamilyKind::Helix ? make_helix(cfg).window(t) : 0.0;
    for (std::size_t i = 0; i < pl.size(); ++i) {
      const double param = cfg.kind == FamilyKind::Torus
                               ? TorusCurveFamily::theta_at(i, cfg.n_points)
                               : HelixFamily::s_at(i, cfg.n_points, w);
      std::vector<Cell> row{t, static_cast<long long>(i), param};
      for (double x : pl.point(i)) row.emplace_back(x);
      table.add(std::move(row));
    }
  }
  return table;
}

/// Reads the first time slice of a `sample` CSV as a closed polyline.
inline Polyline read_sample_csv(const std::string& path) {
  std::ifstream in(resolve_output_path(path));
  if (!in) in.open(path);
  if (!in) throw UsageError("cannot open sample file " + path);
  std::string line;
  if (!std::getline(in, line)) throw UsageError("empty sample file " + path);
  const auto header = split(line, ',');
  if (header.size() < 5 || header[0] != "t" || header[1] != "i" || header[2] != "param")
    throw UsageError("sample file " + path + " lacks the t,i,param,x1.. header");
  const std::size_t dim = header.size() - 3;
  std::vector<double> coords;
  std::optional<double> first_t;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto fields = split(line, ',');
    if (fields.size() != header.size()) throw UsageError("ragged row in " + path);
    const double t = parse_number(fields[0]);
    if (!first_t) first_t = t;
    if (t != *first_t) break;
    for (std::size_t c = 0; c < dim; ++c) coords.push_back(parse_number(fields[3 + c]));
  }
  try {
    return Polyline(dim, std::move(coords), true);
  } catch (const DomainError& e) {
    throw UsageError("sample file " + path + ": " + e.what());
  }
}

inline Table run_simulate(const RunConfig& cfg) {
  const auto times = resolve_times(cfg);
  const TorusCurveFamily family(cfg.freqs);
  Polyline curve = cfg.from_file.empty() ? family.sample(times.front(), cfg.n_points)
                                         : read_sample_csv(cfg.from_file);
  Table table;
  table.columns = {"t", "step", "i"};
  for (std::size_t c = 0; c < curve.dim(); ++c) table.columns.push_back("x" + std::to_string(c + 1));
  auto snapshot = [&](const FlowState& st) {
    for (std::size_t i = 0; i < st.curve.size(); ++i) {
      std::vector<Cell> row{st.time, static_cast<long long>(st.step_count), static_cast<long long>(i)};
      for (double x : st.curve.point(i)) row.emplace_back(x);
      table.add(std::move(row));
    }
  };
  FlowState state = FlowState::start(std::move(curve), times.front());
  snapshot(state);
  for (std::size_t k = 1; k < times.size(); ++k) {
    FlowState leg = evolve(state.curve, state.time, times[k], cfg.integrator);
    leg.step_count += state.step_count;
    state = std::move(leg);
    snapshot(state);
    if (state.curve.dim() == family.dim()) {
      const auto cmp = compare_to_exact(state, family, times[k]);
      std::cerr << "t=" << format_double(times[k]) << " sup_distance=" << format_double(cmp.sup_distance)
                << " length_gap=" << format_double(cmp.length_gap) << '\n';
    }
  }
  return table;
}

inline Table run_entropy(const RunConfig& cfg) {
  const auto times = resolve_times(cfg);
  if (cfg.kind == FamilyKind::Helix) {
    // Helix entropy is unbounded in t; report the windowed F-value against the bound.
    const auto profile = make_profile(cfg);
    Table table{{"t", "r", "window_f", "lower_bound"}, {}};
    for (double t : times) {
      const double r = profile.radius(t);
      if (!(r >= 1.0)) throw DomainError("helix entropy bound needs r(t) >= 1");
      table.add({t, r, helix_window_f_value(profile, t, cfg.n_points),
                 helix_entropy_lower_bound(cfg.freqs, r)});
    }
    return table;
  }
  const TorusCurveFamily family(cfg.freqs);
  const auto rows = entropy_sweep(family, times, cfg.n_points, cfg.entropy);
  Table table{{"t", "lambda", "scale", "translation_norm", "centered_closed_form", "restarts",
               "converged", "dim_over_2lambda"},
              {}};
  for (const auto& r : rows)
    table.add({r.t, r.estimate.value, r.estimate.best_params.scale,
               detail::norm(r.estimate.best_params.translation), r.closed_form_y0,
               static_cast<long long>(r.estimate.restarts_used),
               static_cast<long long>(r.estimate.converged ? 1 : 0),
               double(family.dim()) / (2.0 * r.estimate.value)});
  return table;
}

inline Table run_tangent(const RunConfig& cfg) {
  const TorusCurveFamily family(cfg.freqs);
  Table table;
  table.columns = {"t"};
  for (std::size_t j = 0; j < cfg.freqs.size(); ++j) table.columns.push_back("amp_" + std::to_string(j + 1));
  for (const char* c : {"dominant", "winding", "circle_dist"}) table.columns.push_back(c);
  for (double t : resolve_times(cfg)) {
    const auto d = diagnostics(family, t, cfg.n_points);
    std::vector<Cell> row{t};
    for (double a : d.plane_amplitudes) row.emplace_back(a);
    row.emplace_back(static_cast<long long>(d.dominant_plane + 1));
    row.emplace_back(static_cast<long long>(d.winding));
    row.emplace_back(d.circle_distance);
    table.add(std::move(row));
  }
  return table;
}

inline Table run_product(const RunConfig& cfg) {
  const std::vector<FrequencyVector> factors =
      cfg.factors.empty() ? std::vector<FrequencyVector>{cfg.freqs} : cfg.factors;
  const auto product = make_product(factors);
  const bool with_entropy = cfg.product_entropy;
  if (with_entropy && factors.size() != 2)
    throw UsageError("--product-entropy needs exactly two --factor values");
  Table table{{"t", "ambient_dim", "intrinsic_dim", "pde_residual", "volume"}, {}};
  if (with_entropy)
    for (const char* c : {"product_entropy", "bound", "holds"}) table.columns.push_back(c);
  for (double t : resolve_times(cfg)) {
    const std::size_t n_res = std::min<std::size_t>(cfg.n_points, 256);
    std::vector<Cell> row{t, static_cast<long long>(product.dim()),
                          static_cast<long long>(product.intrinsic_dim()),
                          product.pde_residual(t, n_res).scaled, product.invariants(t).volume};
    if (with_entropy) {
      const Polyline a = product.factors()[0].sample(t, cfg.n_points);
      const Polyline b = product.factors()[1].sample(t, cfg.n_points);
      ProductCheckOptions opts;
      opts.entropy = cfg.entropy;
      const auto chk = product_entropy_check(a, entropy(a, cfg.entropy), b, entropy(b, cfg.entropy), opts);
      row.emplace_back(chk.product_estimate);
      row.emplace_back(chk.bound);
      row.emplace_back(static_cast<long long>(chk.holds ? 1 : 0));
    }
    table.add(std::move(row));
  }
  return table;
}

struct CheckResult {
  std::string name;
  double value;
  double threshold;
  bool pass;
};

inline std::vector<double> log_grid(double start, double end, std::size_t count) {
  std::vector<double> ts(count);
  const double a = std::log(-start), b = std::log(-end);
  for (std::size_t i = 0; i < count; ++i)
    ts[i] = -std::exp(a + (b - a) * double(i) / double(count - 1));
  return ts;
}

/// Invariant suite for one frequency vector.
inline std::vector<CheckResult> verify_checks(const RunConfig& cfg) {
  const auto& freqs = cfg.freqs;
  const TorusCurveFamily family(freqs);
  const auto& profile = family.profile();
  const bool quick = cfg.quick;
  std::vector<CheckResult> out;
  auto add = [&](std::string name, double value, double threshold) {
    out.push_back({std::move(name), value, threshold, value <= threshold});
  };

  const auto wide = log_grid(-1e6, -1e-6, quick ? 9 : 20);

  double identity = 0.0, pde = 0.0;
  for (double t : wide) {
    const double u = profile.log_radius(t);
    identity = std::max(identity, std::abs(std::exp(detail::log_power_sum(freqs, u)) + 2.0 * t) / (-2.0 * t));
    pde = std::max(pde, family.pde_residual(t, 256).scaled);
  }
  add("radius identity sum r^(2k^2) = -2t (relative)", identity, 1e-10);
  add("torus pde residual / (1 + |x|)", pde, 1e-10);

  // Central differences with h = 1e-4 resolve r' only where r varies on scales >> h.
  double ode = 0.0;
  for (double t : log_grid(-1e3, -0.1, quick ? 5 : 12))
    ode = std::max(ode, ode_residual(profile, t, 1e-4));
  add("ode residual, h = 1e-4, t in [-1e3, -0.1]", ode, 1e-6);

  {
    const HelixFamily helix(freqs);
    double hres = 0.0;
    for (int i = 0; i <= (quick ? 8 : 20); ++i) {
      const double t = -1e3 + 2e3 * double(i) / double(quick ? 8 : 20);
      hres = std::max(hres, helix.pde_residual(t, 256).scaled);
    }
    add("helix pde residual / (1 + |x|), t in [-1e3, 1e3]", hres, 1e-10);
  }

  {
    const std::size_t p = quick ? 512 : 1024;
    const double t0 = -2.0, t1 = quick ? -1.8 : -1.0;
    IntegratorConfig ig = cfg.integrator;
    const auto st = evolve(family.sample(t0, p), t0, t1, ig);
    add("integrator sup distance to exact curve", compare_to_exact(st, family, t1).sup_distance, 1e-3);
  }

  {
    double gap = 0.0;
    const std::size_t p = quick ? 2048 : 4096;
    for (double t : {-10.0, -1.0, -0.1}) {
      const Polyline pl = family.sample(t, p);
      const double r = profile.radius(t);
      for (double s : {0.5, 1.0, 2.0}) {
        const double s_eff = s / std::sqrt(-t);
        const double closed = f_functional_torus_closed(freqs, r, s_eff);
        gap = std::max(gap, std::abs(f_functional(pl, FParams{s_eff, {}}) - closed) / closed);
      }
    }
    add("F-functional quadrature vs closed form (relative)", gap, 1e-4);
  }

  {
    double sum_rule = 0.0;
    for (double t : wide) {
      double s = 0.0;
      for (double a : plane_amplitudes(family, t)) s += a * a;
      sum_rule = std::max(sum_rule, std::abs(s - 2.0));
    }
    add("tangent sum rule |sum amp^2 - 2|", sum_rule, 1e-10);
    const std::size_t p = std::max<std::size_t>(512, 16 * std::size_t(freqs.back()));
    const auto early = diagnostics(family, -1e6, p);
    const auto late = diagnostics(family, -1e-6, p);
    // With S the squared subdominant amplitude, the sum rule puts every vertex within
    // sqrt(S + S^2/2) of the sqrt(2) circle in the dominant plane.
    auto distance_bound = [](const TangentDiagnostics& d) {
      double sub = 0.0;
      for (std::size_t j = 0; j < d.plane_amplitudes.size(); ++j)
        if (j != d.dominant_plane) sub += d.plane_amplitudes[j] * d.plane_amplitudes[j];
      return std::sqrt(sub + 0.5 * sub * sub) * (1.0 + 1e-9) + 1e-12;
    };
    add("tangent at -1e6: circle distance", early.circle_distance, distance_bound(early));
    add("tangent at -1e6: |winding - k_m|", std::abs(early.winding - freqs.back()), 0.0);
    add("tangent at -1e-6: circle distance", late.circle_distance, distance_bound(late));
    add("tangent at -1e-6: |winding - k_1|", std::abs(late.winding - freqs.front()), 0.0);
  }

  {
    double worst = std::numeric_limits<double>::infinity();
    for (double t : {-1.0, -10.0, -100.0})
      worst = std::min(worst, min_centered_singular_value(
                                  family.sample(t, std::max<std::size_t>(64, 8 * freqs.back()))));
    // Reported as 1/sigma so that "smaller is better" like the other checks.
    add("non-flatness: 1 / min singular value", 1.0 / worst, 1e3);
  }
  return out;
}

inline Table run_verify(const RunConfig& cfg, std::ostream& log) {
  const auto checks = verify_checks(cfg);
  Table table{{"check", "value", "threshold", "pass"}, {}};
  for (const auto& c : checks) {
    log << (c.pass ? "PASS " : "FAIL ") << c.name << ": " << format_double(c.value)
        << " (threshold " << format_double(c.threshold) << ")\n";
    table.add({c.name, c.value, c.threshold, static_cast<long long>(c.pass ? 1 : 0)});
  }
  return table;
}

/// Executes a parsed configuration; tables go to cfg.output_path or `out`.
inline int run(const RunConfig& cfg, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  try {
    Table table;
    switch (cfg.command) {
      case Command::Solve: table = run_solve(cfg); break;
      case Command::Sample: table = run_sample(cfg); break;
      case Command::Simulate: table = run_simulate(cfg); break;
      case Command::Entropy: table = run_entropy(cfg); break;
      case Command::Tangent: table = run_tangent(cfg); break;
      case Command::Product: table = run_product(cfg); break;
      case Command::Verify: {
        table = run_verify(cfg, out);
        if (!cfg.output_path.empty()) emit(table, cfg, out);
        for (const auto& row : table.rows)
          if (std::get<long long>(row.back()) == 0) return 1;
        return 0;
      }
    }
    emit(table, cfg, out);
    return 0;
  } catch (const UsageError& e) {
    err << "acsf: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "acsf: " << e.what() << '\n';
    return 1;
  }
}

/// parse_config + run with exit-code mapping.
inline int main_entry(int argc, const char* const* argv, std::ostream& out = std::cout,
                      std::ostream& err = std::cerr) {
  RunConfig cfg;
  try {
    cfg = parse_config(argc, argv);
  } catch (const EarlyExit& e) {
    out << e.what();
    return 0;
  } catch (const UsageError& e) {
    err << "acsf: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "acsf: " << e.what() << '\n';
    return 2;
  }
  return run(cfg, out, err);
}

}  // namespace acsf::cli
