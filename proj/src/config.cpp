#include "circdiv/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>

#include "circdiv/table.hpp"

namespace circdiv {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

template <class Int>
Int parse_int(const std::string& key, const std::string& v) {
  // accept 1e6-style input for convenience, as long as it is integral
  std::size_t used = 0;
  double d = 0.0;
  try {
    d = std::stod(v, &used);
  } catch (const std::exception&) {
    throw UsageError(key + ": expected an integer, got '" + v + "'");
  }
  if (used != v.size() || d != std::floor(d) || d < 0.0 || d > 9e15)
    throw UsageError(key + ": expected a non-negative integer, got '" + v + "'");
  return static_cast<Int>(d);
}

double parse_real(const std::string& key, const std::string& v) {
  std::size_t used = 0;
  double d = 0.0;
  try {
    d = std::stod(v, &used);
  } catch (const std::exception&) {
    throw UsageError(key + ": expected a number, got '" + v + "'");
  }
  if (used != v.size() || !std::isfinite(d)) throw UsageError(key + ": expected a finite number, got '" + v + "'");
  return d;
}

std::string fmt(double v) { return format_double(v); }

}  // namespace

void ExperimentConfig::set(const std::string& key, const std::string& raw) {
  const std::string v = trim(raw);
  if (key == "command")
    command = v;
  else if (key == "xmin")
    xmin = parse_int<std::uint64_t>(key, v);
  else if (key == "xmax")
    xmax = parse_int<std::uint64_t>(key, v);
  else if (key == "points")
    points = parse_int<std::size_t>(key, v);
  else if (key == "grid")
    grid = parse_int<std::size_t>(key, v);
  else if (key == "tol")
    tol = parse_real(key, v);
  else if (key == "margin")
    margin = parse_real(key, v);
  else if (key == "eps")
    eps = parse_real(key, v);
  else if (key == "seed")
    seed = parse_int<std::uint64_t>(key, v);
  else if (key == "kmax")
    kmax = parse_int<int>(key, v);
  else if (key == "rmax")
    rmax = parse_int<int>(key, v);
  else if (key == "T")
    T = parse_real(key, v);
  else if (key == "samples")
    samples = parse_int<std::size_t>(key, v);
  else if (key == "out")
    out = v;
  else if (key == "format")
    format = v;
  else if (key == "cache")
    cache = v;
  else
    throw UsageError("unknown configuration key '" + key + "'");
}

void ExperimentConfig::validate() const {
  if (std::find(kSubcommands.begin(), kSubcommands.end(), command) == kSubcommands.end())
    throw UsageError("command: unknown subcommand '" + command + "'");
  if (xmin < 2) throw UsageError("xmin: must be at least 2");
  if (xmax < xmin) throw UsageError("xmax: empty sweep range (xmax < xmin)");
  if (xmax > 100000000) throw UsageError("xmax: must be at most 1e8");
  if (points < 1) throw UsageError("points: empty sweep (points = 0)");
  if (grid < 2) throw UsageError("grid: need at least 2 points");
  if (!(tol > 0.0)) throw UsageError("tol: must be positive");
  if (!(margin > 0.0)) throw UsageError("margin: must be positive");
  if (!(eps > 0.0)) throw UsageError("eps: must be positive");
  if (kmax < 4 || kmax > 64 || (kmax & (kmax - 1)) != 0) throw UsageError("kmax: must be a power of two in [4, 64]");
  if (rmax < 1 || rmax > 200) throw UsageError("rmax: must be in [1, 200]");
  if (!(T >= 1e6)) throw UsageError("T: must be at least 1e6");
  if (samples < 1) throw UsageError("samples: must be positive");
  if (format != "csv" && format != "json") throw UsageError("format: expected csv or json, got '" + format + "'");
}

std::map<std::string, std::string> ExperimentConfig::echo() const {
  return {{"command", command},
          {"xmin", std::to_string(xmin)},
          {"xmax", std::to_string(xmax)},
          {"points", std::to_string(points)},
          {"grid", std::to_string(grid)},
          {"tol", fmt(tol)},
          {"margin", fmt(margin)},
          {"eps", fmt(eps)},
          {"seed", std::to_string(seed)},
          {"kmax", std::to_string(kmax)},
          {"rmax", std::to_string(rmax)},
          {"T", fmt(T)},
          {"samples", std::to_string(samples)},
          {"out", out},
          {"format", format},
          {"cache", cache}};
}

std::map<std::string, std::string> read_kv_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw IoError("cannot read config file '" + path + "'");
  std::map<std::string, std::string> kv;
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw UsageError(path + ":" + std::to_string(lineno) + ": expected key=value");
    kv[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  return kv;
}

}  // namespace circdiv
