#pragma once

// Experiment configuration: defaults, key=value files, validation.

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace circdiv {

inline const std::vector<std::string> kSubcommands = {"error-terms", "expsum", "spacing1", "spacing2", "exponents",
                                                      "verify-all"};

struct ExperimentConfig {
  std::string command = "verify-all";
  // error-terms sweep: log-spaced X in [xmin, xmax]
  std::uint64_t xmin = 1000;
  std::uint64_t xmax = 1000000;
  std::size_t points = 16;
  // exponents: grid points on [-3/8, -theta*]
  std::size_t grid = 10000;
  double tol = 1e-9;
  double margin = 1.0;
  double eps = 0.05;
  std::uint64_t seed = 20240601;
  // spacing1: largest K in the counting sweep (power of two, 4..64)
  int kmax = 64;
  // spacing2: largest denominator in the arc enumeration
  int rmax = 40;
  // expsum: T for the Case-B reduction sampling, and the number of samples
  double T = 1e12;
  std::size_t samples = 1000;
  std::string out;
  std::string format = "json";
  std::string cache;  // lattice-count cache file; empty disables it

  /// Sets one field from text. Unknown keys and unparsable values throw UsageError.
  void set(const std::string& key, const std::string& value);
  /// Throws UsageError naming the offending field.
  void validate() const;
  /// Every field as text, for the report.
  std::map<std::string, std::string> echo() const;
};

/// Flat key=value file; '#' starts a comment, blank lines are skipped.
std::map<std::string, std::string> read_kv_file(const std::string& path);

}  // namespace circdiv
