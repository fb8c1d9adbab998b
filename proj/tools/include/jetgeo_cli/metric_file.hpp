#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "jetgeo/geom_object.hpp"

namespace jetgeo::cli {

/// Syntax or validation problem in a metric file; `line()` is 1-based (0 when
/// the problem is not tied to a line).
class MetricFileError : public std::runtime_error {
 public:
  MetricFileError(std::size_t line, const std::string& what)
      : std::runtime_error(line ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

struct MetricFile {
  int dimension = 0;
  StructureKind kind = StructureKind::kRiemannian;
  std::vector<std::string> coordinates;
  ExprMatrix metric;  // filled symmetrically
  std::optional<ExprTensor3> connection;
  Box domain;
  Point base_point;
  int samples = 20;
  double rk_step = 1e-3;
};

MetricFile parse_metric_file(std::string_view text);
MetricFile load_metric_file(const std::string& path);

/// Builds the geometric object; geometry errors (not positive-definite, ...)
/// propagate as GeometryError.
GeometricObject build_object(const MetricFile& file);

}  // namespace jetgeo::cli
