#pragma once

// Subcommand sweeps and the verification suite.

#include <functional>
#include <string>
#include <vector>

#include "circdiv/acceptance.hpp"
#include "circdiv/config.hpp"
#include "circdiv/table.hpp"

namespace circdiv {

using RowCallback = std::function<void(const std::string& table, const std::vector<double>& row)>;

struct SweepNotes {
  std::vector<std::string> warnings;
  bool cache_used = false;
  std::size_t cache_mismatches = 0;  // from a spot check after the sweep
};

/// Sweep tables for cfg.command (all of them for verify-all). `on_row`, when
/// set, sees each row as it is produced. Lattice counts go through the cache
/// named by cfg.cache, spot-checked before and after use.
std::vector<Table> sweep(const ExperimentConfig& cfg, const RowCallback& on_row = {}, SweepNotes* notes = nullptr);

/// Validates cfg, runs the criteria of the selected subcommand and its sweep.
RunReport run_suite(const ExperimentConfig& cfg,
                    const std::function<void(const CriterionResult&)>& on_criterion = {});

}  // namespace circdiv
