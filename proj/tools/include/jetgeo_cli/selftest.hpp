#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "jetgeo/curvature.hpp"

namespace jetgeo::cli {

struct SuiteResult {
  std::string name;
  int checks = 0;
  int failures = 0;
  double worst = 0.0;  // largest residual seen
  std::string first_failure;
  bool pass() const { return failures == 0; }
};

struct SelftestOptions {
  FitOptions fit;
  unsigned long long seed = 20240601;
};

std::vector<SuiteResult> run_selftest(const SelftestOptions& options = {});

/// Prints the summary table; returns the exit code (0 iff every suite passed).
int cmd_selftest(const SelftestOptions& options, std::ostream& out);

}  // namespace jetgeo::cli
