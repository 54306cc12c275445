#pragma once

// The fourteen acceptance criteria, each a self-contained check.

#include <string>
#include <vector>

#include "circdiv/config.hpp"
#include "circdiv/table.hpp"

namespace circdiv {

struct CriterionResult {
  std::string id;
  std::string title;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
  Table table;  // empty name when the criterion has no table
};

struct Criterion {
  std::string id;
  std::string subcommand;  // which subcommand runs it
  std::string title;
  CriterionResult (*run)(const ExperimentConfig&);
};

const std::vector<Criterion>& criteria();

/// Runs one criterion, turning exceptions into a failure with the message.
CriterionResult run_criterion(const Criterion& c, const ExperimentConfig& cfg);

}  // namespace circdiv
