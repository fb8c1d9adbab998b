#pragma once

#include <span>
#include <string>
#include <vector>

#include "jetgeo/algebroid.hpp"
#include "jetgeo/geom_object.hpp"

namespace jetgeo {

/// R(i,r,j,k) = R^i_rj,k = d_r g^i_jk - d_j g^i_rk - g^b_rk g^i_jb + g^b_jk g^i_rb.
/// For a Levi-Civita connection this is the Riemann tensor, and a metric of
/// constant curvature K gives R^i_rj,k = K (delta^i_r g_jk - delta^i_j g_rk).
Tensor4 fraud_riemann(const LocalGeometry& l);
Tensor4 fraud_riemann(const GeometricObject& g, std::span<const double> x);

/// delta^i_r g_jk - delta^i_j g_rk, the shape of constant curvature.
Tensor4 constant_curvature_shape(const Matrix& g);

/// Algebroid curvature at a point as coefficient matrices acting on the
/// n + n^2 coordinates of order1_coefficients():
///   N2: rows are (i,k,r,j) row-major, alternated in (k,r)
///   N1: rows are (k,i,j) row-major, alternated in (k,i); zero for the affine kind
struct AlgebroidCurvature {
  int n = 0;
  Matrix N2;
  Matrix N1;

  struct Value {
    Tensor4 N2;  // (i,k,r,j)
    Tensor3 N1;  // (k,i,j)
    double max() const { return std::max(max_abs(N2), max_abs(N1)); }
  };
  Value operator()(const JetVector& x) const;
};

AlgebroidCurvature algebroid_curvature(const GeometricObject& g, std::span<const double> x);

/// Unalternated hatted expressions, exposed for testing.
Tensor4 algebroid_hat2(const LocalGeometry& l, const JetVector& x);
Tensor3 algebroid_hat1(const LocalGeometry& l, const JetVector& x);

/// Groupoid curvature for a 1-arrow phi1 from x to y.
///   R2(i,r,j,k): transported fraud tensor at x minus the one at y
///   R1(i,k,j):   alternated in (k,j); zero for the affine kind
struct GroupoidCurvature {
  Tensor4 R2;
  Tensor3 R1;
  double max() const { return std::max(max_abs(R2), max_abs(R1)); }
};

GroupoidCurvature groupoid_curvature(const GeometricObject& g, std::span<const double> x, std::span<const double> y,
                                     const Matrix& phi1);

enum class SpaceForm { kSpherical, kFlat, kHyperbolic, kNonConstant };
std::string to_string(SpaceForm s);

/// Orientation of the fitted constant. The shape above gives c = K, so the
/// frozen value is +1; other values exist only as a negative control.
inline constexpr double kCurvatureSign = 1.0;

struct FitOptions {
  double tolerance = 1e-6;
  double sign = kCurvatureSign;
};

struct SpaceFormVerdict {
  double c = 0.0;
  double residual = 0.0;
  SpaceForm form = SpaceForm::kNonConstant;
};

/// Least-squares constant c with R = c * shape over all samples. The tensor is
/// the Levi-Civita curvature of the metric, so the verdict depends on g_ij only;
/// the affine kind is classified flat or non-constant from its own connection.
SpaceFormVerdict constant_curvature_fit(const GeometricObject& g, std::span<const Point> samples,
                                        const FitOptions& options = {});

struct MCConstants {
  Tensor4 c2;  // (i,r,j,k), mean over samples
  Tensor3 c1;  // (r,j,k), mean over samples
  double defect = 0.0;  // max spread of any component across samples
};

/// Frame-factored curvature expressions evaluated with the frame beta
/// (beta^T beta = g_ij) at each sample.
MCConstants mc_constants(const GeometricObject& g, const ExprMatrix& frame, std::span<const Point> samples,
                         const FitOptions& options = {});

}  // namespace jetgeo
