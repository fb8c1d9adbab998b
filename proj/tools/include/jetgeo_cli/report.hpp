#pragma once

#include <array>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "jetgeo/curvature.hpp"

namespace jetgeo::cli {

enum class Format { kHuman, kKeyValue };

/// %.17g, enough digits to round-trip a double.
std::string format_real(double v);

struct Check {
  std::string name;
  double residual = 0.0;
  double threshold = 0.0;
  bool pass() const { return residual <= threshold; }
};

struct Report {
  std::string command;
  std::string source;
  std::optional<SpaceFormVerdict> verdict;
  std::optional<int> fiber_dimension;
  std::optional<int> killing_dimension;
  std::optional<std::array<int, 3>> signature;
  std::optional<double> monodromy_defect;
  std::optional<double> mc_defect;
  std::optional<double> jacobi_residual;
  std::vector<Check> checks;

  bool all_pass() const;
  void write(std::ostream& out, Format format) const;
};

}  // namespace jetgeo::cli
