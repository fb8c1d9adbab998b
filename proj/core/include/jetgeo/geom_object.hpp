#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "jetgeo/errors.hpp"
#include "jetgeo/expr.hpp"
#include "jetgeo/jet_groups.hpp"

namespace jetgeo {

using Point = std::vector<double>;

/// Axis-aligned box [lo_i, hi_i].
struct Box {
  std::vector<double> lo;
  std::vector<double> hi;

  Box() = default;
  Box(std::vector<double> lower, std::vector<double> upper);
  static Box cube(int n, double lo, double hi);

  int dim() const { return static_cast<int>(lo.size()); }
  bool contains(std::span<const double> x) const;
  Point center() const;
  /// The box scaled about its center by `factor`.
  Box shrunk(double factor) const;
  /// Uniform points from a fixed-seed generator.
  std::vector<Point> random_points(int count, std::uint64_t seed) const;
  /// Cell centres of an m^n grid.
  std::vector<Point> grid_points(int m) const;
};

/// Numeric jets of the geometric object at one point.
///   g(i,j) = g_ij          dg(i,j,a) = d_a g_ij        ddg(i,j,a,b)
///   gamma(i,j,k) = g^i_jk  dgamma(i,j,k,a)             ddgamma(i,j,k,a,b)
/// Metric blocks are empty for the affine kind.
struct LocalGeometry {
  int n = 0;
  Matrix g;
  Tensor3 dg;
  Tensor4 ddg;
  Tensor3 gamma;
  Tensor4 dgamma;
  Tensor5 ddgamma;
};

/// The second-order object (g_ij, g^i_jk) on a single chart.
class GeometricObject {
 public:
  /// Riemannian object; the connection defaults to Levi-Civita.
  static GeometricObject from_metric(const ExprMatrix& g, const std::optional<ExprTensor3>& connection,
                                     Box domain, Point base_point);
  /// g1 = s1^T s1 and g2 = s1^-1 s2.
  static GeometricObject from_section(const ExprMatrix& s1, const ExprTensor3& s2, Box domain, Point base_point);
  /// Connection-only variant.
  static GeometricObject affine(const ExprTensor3& connection, Box domain, Point base_point);

  int dim() const { return n_; }
  StructureKind kind() const { return kind_; }
  bool riemannian() const { return kind_ == StructureKind::kRiemannian; }
  /// True when the connection was derived from the metric.
  bool is_levi_civita() const { return levi_civita_; }
  const ExprMatrix& metric() const { return g_; }
  const ExprTensor3& connection() const { return gamma_; }
  const Box& domain() const { return domain_; }
  const Point& base_point() const { return base_; }

  /// Derivative blocks up to `order` (0, 1 or 2) are filled; higher ones stay empty.
  LocalGeometry at(std::span<const double> x, int order = 2) const;
  Matrix metric_at(std::span<const double> x) const;
  Tensor3 connection_at(std::span<const double> x) const;

 private:
  GeometricObject() = default;
  void compile();
  void validate() const;

  int n_ = 0;
  StructureKind kind_ = StructureKind::kRiemannian;
  bool levi_civita_ = false;
  ExprMatrix g_;
  ExprTensor3 gamma_;
  Box domain_;
  Point base_;
  // programs[k] evaluates every block up to derivative order k
  std::shared_ptr<const std::array<Program, 3>> programs_;
};

/// Pulls the object back along a chart given as the old coordinates x(y) in
/// terms of new coordinates y ranging over `new_domain`. Jacobian and Hessian
/// are taken symbolically.
GeometricObject transform_chart(const GeometricObject& g, const ExprVector& x_of_y, Box new_domain,
                                Point new_base_point);

/// x = p + h1 y + 1/2 h2(y, y).
ExprVector quadratic_chart(std::span<const double> p, const Jet2Element& h);

/// 2-jet h of a chart at p that brings g to regular form there.
Jet2Element regular_normalization(const GeometricObject& g, std::span<const double> p);

/// Frame jet beta(x) with F(beta(x)) = (g_ij(x), g^i_jk(x)); the first block is
/// the transposed Cholesky factor (the identity for the affine kind).
Jet2Element frame_jet(const GeometricObject& g, std::span<const double> x);

struct Arrow2 {
  Point x;
  Point y;
  Matrix phi1;
  Tensor3 phi2;
};

/// The arrow beta(y)^-1 beta(x).
Arrow2 frame_arrow(const GeometricObject& g, std::span<const double> x, std::span<const double> y);

/// The unique phi2 that makes (phi1, phi2) satisfy the second membership equation.
Tensor3 complete_arrow(const GeometricObject& g, std::span<const double> x, std::span<const double> y,
                       const Matrix& phi1);

struct MembershipResidual {
  double first = 0.0;   // metric equation (0 for the affine kind)
  double second = 0.0;  // connection equation
  double max() const { return std::max(first, second); }
};

MembershipResidual arrow_membership(const GeometricObject& g, const Arrow2& arrow);

}  // namespace jetgeo
