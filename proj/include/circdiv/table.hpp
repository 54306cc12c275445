#pragma once

// Numeric tables, run reports and their CSV / JSON serialisation.

#include <cstdint>
#include <iosfwd>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

namespace circdiv {

class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Table {
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;

  void add_row(std::vector<double> row);
  bool operator==(const Table&) const = default;
};

/// 17 significant digits; integral values keep a trailing ".0".
std::string format_double(double v);

void write_csv(std::ostream& os, const Table& t);
/// Parses a table written by write_csv. The name is not stored in CSV.
Table read_csv(std::istream& is, const std::string& name = "");

struct Assertion {
  std::string name;
  bool passed = false;
  std::string detail;
};

inline constexpr const char* kReportSchema = "circdiv-report/1";

struct RunReport {
  std::string command;
  std::uint64_t seed = 0;
  std::map<std::string, std::string> config;
  double wall_seconds = 0.0;
  std::vector<Assertion> assertions;
  std::vector<Table> tables;

  bool passed() const;
  void check(const std::string& name, bool ok, const std::string& detail = "");
  nlohmann::json to_json() const;
  static RunReport from_json(const nlohmann::json& j);
};

/// Problems found in `j` against the report schema; empty when valid.
std::vector<std::string> validate_report_json(const nlohmann::json& j);

enum class OutputFormat { csv, json };

OutputFormat parse_format(const std::string& s);

/// json: one file at `path`. csv: assertions at `path`, each table at
/// `<path without .csv>-<table>.csv`. Returns the files written.
std::vector<std::string> write_results(const RunReport& report, OutputFormat format, const std::string& path);

}  // namespace circdiv
