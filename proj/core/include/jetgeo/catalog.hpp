#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "jetgeo/geom_object.hpp"

namespace jetgeo {

/// Reference geometries with known answers, in dimension 2 or 3.
///   euclidean   delta on [-1,1]^n
///   polar_flat  flat metric in polar (n=2) or spherical (n=3) coordinates
///   sphere      4 delta/(1+|x|^2)^2 on [-1,1]^n, curvature +1
///   poincare    4 delta/(1-|x|^2)^2 on [-0.5,0.5]^n, curvature -1
///   ellipsoid   diag(1, 1+x1^2/2[, 1+x1^2/2+x2^2/2]) on [-1,1]^n, non-constant
struct CatalogEntry {
  std::string name;
  GeometricObject object;
  std::optional<double> curvature;  // sectional curvature when constant
  std::vector<ExprVector> killing_fields;  // a full basis when known
  std::optional<ExprMatrix> frame;  // beta with beta^T beta = g
};

std::vector<std::string> catalog_names();
CatalogEntry catalog_metric(std::string_view name, int n);

/// Isometries of lambda(|x|^2) delta with lambda = 4/(1 + s |x|^2)^2:
/// rotations x_i e_j - x_j e_i and b + s (2 (b.x) x - |x|^2 b) for b = e_i.
std::vector<ExprVector> conformally_flat_killing_fields(int n, double s);

}  // namespace jetgeo
