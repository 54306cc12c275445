// circdiv: run a subcommand's checks and sweeps, print a verdict per check,
// and optionally write the report as JSON or CSV.

#include <cstdio>
#include <iostream>
#include <map>
#include <string>

#include <CLI11.hpp>

#include "circdiv/config.hpp"
#include "circdiv/suite.hpp"
#include "circdiv/table.hpp"

namespace {

struct Flag {
  const char* name;
  const char* key;
  const char* help;
};

const Flag kFlags[] = {
    {"--xmin", "xmin", "smallest X in the error-term sweep"},
    {"--xmax", "xmax", "largest X in the error-term sweep"},
    {"--points", "points", "points in log-spaced sweeps"},
    {"--grid", "grid", "grid points on the admissible exponent range"},
    {"--tol", "tol", "numeric tolerance"},
    {"--margin", "margin", "constant standing in for >> and ~"},
    {"--eps", "eps", "epsilon of the explicit K^eps factors"},
    {"--seed", "seed", "seed of the single random generator"},
    {"--kmax", "kmax", "largest K in the counting sweep"},
    {"--rmax", "rmax", "largest denominator in the arc enumeration"},
    {"--T", "T", "T for the Case II sampling"},
    {"--samples", "samples", "accepted points in the Case II sampling"},
    {"--out", "out", "output file"},
    {"--format", "format", "csv or json"},
    {"--cache", "cache", "lattice-count cache file"},
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Circle and divisor problem exponent toolkit"};
  app.require_subcommand(1, 1);
  // subcommands inherit this, so flags may follow the subcommand name
  app.fallthrough();
  std::string config_file;
  app.add_option("--config", config_file, "key=value file; flags override it");
  std::map<std::string, std::string> values;
  std::map<std::string, CLI::Option*> options;
  for (const auto& f : kFlags) options[f.key] = app.add_option(f.name, values[f.key], f.help);
  for (const auto& sub : circdiv::kSubcommands) app.add_subcommand(sub, "run the " + sub + " checks");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  circdiv::ExperimentConfig cfg;
  try {
    if (!config_file.empty())
      for (const auto& [k, v] : circdiv::read_kv_file(config_file)) cfg.set(k, v);
    for (const auto& [key, opt] : options)
      if (opt->count() > 0) cfg.set(key, values[key]);
    cfg.command = app.get_subcommands().front()->get_name();
    cfg.validate();

    const auto report = circdiv::run_suite(cfg, [](const circdiv::CriterionResult& r) {
      std::printf("[%s] %s %s: %s (%.2fs)\n", r.passed ? "PASS" : "FAIL", r.id.c_str(), r.title.c_str(),
                  r.detail.c_str(), r.seconds);
      std::fflush(stdout);
    });
    std::size_t failed = 0;
    for (const auto& a : report.assertions)
      if (!a.passed) ++failed;
    for (const auto& a : report.assertions)
      if (a.name.rfind("AC", 0) != 0) std::printf("[%s] %s: %s\n", a.passed ? "PASS" : "FAIL", a.name.c_str(), a.detail.c_str());
    if (!cfg.out.empty())
      for (const auto& path : circdiv::write_results(report, circdiv::parse_format(cfg.format), cfg.out))
        std::printf("wrote %s\n", path.c_str());
    std::printf("%zu checks, %zu failed, %.1fs\n", report.assertions.size(), failed, report.wall_seconds);
    return report.passed() ? 0 : 1;
  } catch (const circdiv::UsageError& e) {
    std::fprintf(stderr, "usage error: %s\n", e.what());
    return 2;
  } catch (const circdiv::IoError& e) {
    std::fprintf(stderr, "i/o error: %s\n", e.what());
    return 3;
  }
}
