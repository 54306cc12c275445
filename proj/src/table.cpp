#include "circdiv/table.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace circdiv {

void Table::add_row(std::vector<double> row) {
  if (row.size() != columns.size())
    throw std::invalid_argument("table " + name + ": row has " + std::to_string(row.size()) + " cells, expected " +
                                std::to_string(columns.size()));
  rows.push_back(std::move(row));
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  std::string s = buf;
  if (s.find_first_of(".e") == std::string::npos) s += ".0";
  return s;
}

void write_csv(std::ostream& os, const Table& t) {
  for (std::size_t i = 0; i < t.columns.size(); ++i) os << (i ? "," : "") << t.columns[i];
  os << '\n';
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << format_double(row[i]);
    os << '\n';
  }
}

namespace {

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, sep)) out.push_back(cell);
  if (!line.empty() && line.back() == sep) out.emplace_back();
  return out;
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

Table read_csv(std::istream& is, const std::string& name) {
  Table t;
  t.name = name;
  std::string line;
  if (!std::getline(is, line)) throw UsageError("read_csv: missing header");
  t.columns = split(line, ',');
  std::size_t lineno = 1;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::vector<double> row;
    for (const auto& cell : split(line, ',')) {
      char* end = nullptr;
      const double v = std::strtod(cell.c_str(), &end);
      if (cell.empty() || *end != '\0')
        throw UsageError("read_csv: line " + std::to_string(lineno) + ": not a number: '" + cell + "'");
      row.push_back(v);
    }
    if (row.size() != t.columns.size())
      throw UsageError("read_csv: line " + std::to_string(lineno) + ": " + std::to_string(row.size()) +
                       " cells, expected " + std::to_string(t.columns.size()));
    t.add_row(std::move(row));
  }
  return t;
}

bool RunReport::passed() const {
  for (const auto& a : assertions)
    if (!a.passed) return false;
  return true;
}

void RunReport::check(const std::string& name, bool ok, const std::string& detail) {
  assertions.push_back({name, ok, detail});
}

namespace {

// JSON numbers cannot hold nan/inf, so those travel as strings
nlohmann::json cell_json(double v) {
  if (std::isfinite(v)) return v;
  return format_double(v);
}

double cell_value(const nlohmann::json& j) {
  if (j.is_number()) return j.get<double>();
  return std::strtod(j.get<std::string>().c_str(), nullptr);
}

}  // namespace

nlohmann::json RunReport::to_json() const {
  nlohmann::json j;
  j["schema"] = kReportSchema;
  j["command"] = command;
  j["seed"] = seed;
  j["config"] = config;
  j["wall_seconds"] = wall_seconds;
  j["passed"] = passed();
  j["assertions"] = nlohmann::json::array();
  for (const auto& a : assertions) j["assertions"].push_back({{"name", a.name}, {"passed", a.passed}, {"detail", a.detail}});
  j["tables"] = nlohmann::json::object();
  for (const auto& t : tables) {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& r : t.rows) {
      nlohmann::json row = nlohmann::json::array();
      for (double v : r) row.push_back(cell_json(v));
      rows.push_back(std::move(row));
    }
    j["tables"][t.name] = {{"columns", t.columns}, {"rows", std::move(rows)}};
  }
  return j;
}

RunReport RunReport::from_json(const nlohmann::json& j) {
  const auto problems = validate_report_json(j);
  if (!problems.empty()) throw IoError("report JSON: " + problems.front());
  RunReport r;
  r.command = j["command"].get<std::string>();
  r.seed = j["seed"].get<std::uint64_t>();
  r.config = j["config"].get<std::map<std::string, std::string>>();
  r.wall_seconds = j["wall_seconds"].get<double>();
  for (const auto& a : j["assertions"])
    r.assertions.push_back({a["name"].get<std::string>(), a["passed"].get<bool>(), a["detail"].get<std::string>()});
  for (const auto& [name, t] : j["tables"].items()) {
    Table tab;
    tab.name = name;
    tab.columns = t["columns"].get<std::vector<std::string>>();
    for (const auto& row : t["rows"]) {
      std::vector<double> cells;
      for (const auto& c : row) cells.push_back(cell_value(c));
      tab.add_row(std::move(cells));
    }
    r.tables.push_back(std::move(tab));
  }
  return r;
}

std::vector<std::string> validate_report_json(const nlohmann::json& j) {
  std::vector<std::string> bad;
  if (!j.is_object()) return {"report must be an object"};
  auto need = [&](const char* key, bool ok) {
    if (!j.contains(key))
      bad.push_back(std::string("missing key '") + key + "'");
    else if (!ok)
      bad.push_back(std::string("wrong type for '") + key + "'");
  };
  need("schema", j.contains("schema") && j["schema"] == kReportSchema);
  need("command", j.contains("command") && j["command"].is_string());
  need("seed", j.contains("seed") && j["seed"].is_number_unsigned());
  need("config", j.contains("config") && j["config"].is_object());
  need("wall_seconds", j.contains("wall_seconds") && j["wall_seconds"].is_number());
  need("passed", j.contains("passed") && j["passed"].is_boolean());
  need("assertions", j.contains("assertions") && j["assertions"].is_array());
  need("tables", j.contains("tables") && j["tables"].is_object());
  if (!bad.empty()) return bad;
  for (const auto& [k, v] : j["config"].items())
    if (!v.is_string()) bad.push_back("config value '" + k + "' must be a string");
  bool all = true;
  for (const auto& a : j["assertions"]) {
    if (!a.is_object() || !a.contains("name") || !a["name"].is_string() || !a.contains("passed") ||
        !a["passed"].is_boolean() || !a.contains("detail") || !a["detail"].is_string()) {
      bad.push_back("assertion entries need string name, boolean passed, string detail");
      break;
    }
    all = all && a["passed"].get<bool>();
  }
  if (bad.empty() && all != j["passed"].get<bool>()) bad.push_back("'passed' disagrees with the assertions");
  for (const auto& [name, t] : j["tables"].items()) {
    if (!t.is_object() || !t.contains("columns") || !t["columns"].is_array() || !t.contains("rows") ||
        !t["rows"].is_array()) {
      bad.push_back("table '" + name + "' needs columns and rows arrays");
      continue;
    }
    for (const auto& c : t["columns"])
      if (!c.is_string()) bad.push_back("table '" + name + "' has a non-string column name");
    const std::size_t width = t["columns"].size();
    for (const auto& row : t["rows"]) {
      if (!row.is_array() || row.size() != width) {
        bad.push_back("table '" + name + "' has a row of the wrong width");
        break;
      }
      for (const auto& c : row)
        if (!c.is_number() && !(c.is_string() && (c == "nan" || c == "inf" || c == "-inf"))) {
          bad.push_back("table '" + name + "' has a non-numeric cell");
          break;
        }
    }
  }
  return bad;
}

OutputFormat parse_format(const std::string& s) {
  if (s == "csv") return OutputFormat::csv;
  if (s == "json") return OutputFormat::json;
  throw UsageError("format: expected csv or json, got '" + s + "'");
}

namespace {

std::ofstream open_out(const std::string& path) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw IoError("cannot write '" + path + "'");
  return os;
}

void close_out(std::ofstream& os, const std::string& path) {
  os.flush();
  if (!os) throw IoError("write failed for '" + path + "'");
}

}  // namespace

std::vector<std::string> write_results(const RunReport& report, OutputFormat format, const std::string& path) {
  std::vector<std::string> written;
  if (format == OutputFormat::json) {
    auto os = open_out(path);
    os << report.to_json().dump(2) << '\n';
    close_out(os, path);
    return {path};
  }
  {
    auto os = open_out(path);
    os << "name,passed,detail\n";
    for (const auto& a : report.assertions)
      os << csv_escape(a.name) << ',' << (a.passed ? "true" : "false") << ',' << csv_escape(a.detail) << '\n';
    close_out(os, path);
    written.push_back(path);
  }
  std::string stem = path;
  if (stem.size() > 4 && stem.compare(stem.size() - 4, 4, ".csv") == 0) stem.resize(stem.size() - 4);
  for (const auto& t : report.tables) {
    const std::string p = stem + "-" + t.name + ".csv";
    auto os = open_out(p);
    write_csv(os, t);
    close_out(os, p);
    written.push_back(p);
  }
  return written;
}

}  // namespace circdiv
