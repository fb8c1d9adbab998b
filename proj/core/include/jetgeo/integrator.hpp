#pragma once

#include <array>
#include <span>
#include <vector>

#include "jetgeo/algebroid.hpp"
#include "jetgeo/curvature.hpp"
#include "jetgeo/geom_object.hpp"

namespace jetgeo {

/// Piecewise path through chart space. Each segment is parameterized on [0,1]
/// and integrated with ceil(length/step) RK4 steps.
struct PathSpec {
  struct Segment {
    enum class Kind { kLine, kArc } kind = Kind::kLine;
    Point from;  // line start
    Point to;    // line end
    // arc: center + radius (cos t, sin t) in the plane of coordinate axes (axis0, axis1)
    Point center;
    double radius = 0.0;
    double angle0 = 0.0;
    double angle1 = 0.0;
    int axis0 = 0;
    int axis1 = 1;

    Point position(double t) const;
    Point velocity(double t) const;  // d/dt on [0,1]
    double length() const;
  };

  std::vector<Segment> segments;
  double step = 1e-3;

  static PathSpec polyline(const std::vector<Point>& points, double step = 1e-3);
  /// Arc from angle0 to angle1 (radians) about `center`.
  static PathSpec arc(const Point& center, double radius, double angle0, double angle1, double step = 1e-3,
                      int axis0 = 0, int axis1 = 1);
  /// Closed counterclockwise circle through `start`, centred at start - radius e_axis0.
  static PathSpec loop_circle(const Point& start, double radius, double step = 1e-3, int axis0 = 0, int axis1 = 1);
  /// Closed axis-aligned square with corner `start` and side `side`.
  static PathSpec loop_square(const Point& start, double side, double step = 1e-3, int axis0 = 0, int axis1 = 1);

  Point start() const;
  Point end() const;
};

struct IntegrationResult {
  std::vector<JetVector> end;  // order-1 jets, one per initial jet
  double max_constraint = 0.0;  // largest first-equation residual seen at step ends
  long steps = 0;
};

inline constexpr double kConstraintDriftLimit = 1e-4;

/// RK4 transport of order-1 jets along the path under the first-order Killing
/// system. Initial jets must satisfy the first defining equation to 1e-8.
IntegrationResult integrate_killing(const GeometricObject& g, std::span<const JetVector> init, const PathSpec& path);
JetVector integrate_killing(const GeometricObject& g, const JetVector& init, const PathSpec& path);

/// Largest change of any fiber-basis jet after transport around any loop at p.
double monodromy_defect(const GeometricObject& g, std::span<const double> p, std::span<const PathSpec> loops);

struct KillingBasis {
  Point p;
  std::vector<JetVector> basis;  // order-1 jets, orthonormal in coefficients
  Grid<double, 3> structure;     // structure(c,a,b) = f^c_ab
  Matrix killing_form;
  std::array<int, 3> signature{};  // (positive, zero, negative)
  double jacobi_residual = 0.0;
  double closure_residual = 0.0;  // distance of brackets from the span of the basis
  int dim() const { return static_cast<int>(basis.size()); }
};

/// Killing algebra at p built from pointwise brackets; requires constant curvature.
KillingBasis killing_algebra(const GeometricObject& g, std::span<const double> p, const FitOptions& options = {});

/// Jacobi residual max |f^d_ab f^e_dc + cyclic| of a structure tensor.
double jacobi_residual(const Grid<double, 3>& f);
std::array<int, 3> signature(const Matrix& symmetric, double rel_tol = 1e-8);

/// Flows sample points by X for time t and returns max |J^T g(phi(x)) J - g(x)|
/// with J the central-difference Jacobian of the flow.
double killing_verify(const GeometricObject& g, const ExprVector& X, double t, int samples = 10,
                      double fd_step = 1e-5);

}  // namespace jetgeo
