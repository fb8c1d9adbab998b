#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace jetgeo {

class GeometryError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class SingularMatrixError : public GeometryError {
 public:
  using GeometryError::GeometryError;
};

/// A supplied map failed the algebraic check it was promised to satisfy.
class VerificationError : public GeometryError {
 public:
  using GeometryError::GeometryError;
};

/// Metric not positive-definite (or frame singular) at a sample point.
class SamplePointError : public GeometryError {
 public:
  SamplePointError(const std::string& what, std::vector<double> point)
      : GeometryError(what), point_(std::move(point)) {}
  const std::vector<double>& point() const { return point_; }

 private:
  std::vector<double> point_;
};

class RankError : public GeometryError {
 public:
  using GeometryError::GeometryError;
};

class PreconditionError : public GeometryError {
 public:
  using GeometryError::GeometryError;
};

/// A path or flow left the chart domain.
class DomainExitError : public GeometryError {
 public:
  using GeometryError::GeometryError;
};

class ConstraintDriftError : public GeometryError {
 public:
  ConstraintDriftError(const std::string& what, double residual) : GeometryError(what), residual_(residual) {}
  double residual() const { return residual_; }

 private:
  double residual_;
};

}  // namespace jetgeo
