#pragma once

#include <ostream>
#include <string>

#include "jetgeo/curvature.hpp"
#include "jetgeo/integrator.hpp"
#include "jetgeo_cli/report.hpp"

namespace jetgeo::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitSelftestFailed = 1;
inline constexpr int kExitParseError = 2;
inline constexpr int kExitPrecondition = 3;

struct CommandOptions {
  Format format = Format::kHuman;
  FitOptions fit;
};

int cmd_classify(const std::string& path, const CommandOptions& options, std::ostream& out, std::ostream& err);
int cmd_killing(const std::string& path, const CommandOptions& options, std::ostream& out, std::ostream& err);

/// Closed loops based at p that stay inside the domain: one circle and one
/// square per coordinate plane (axes i, i+1).
std::vector<PathSpec> default_loops(const GeometricObject& g, std::span<const double> p, double step);

}  // namespace jetgeo::cli
