#pragma once

#include <vector>

#include "jetgeo/geom_object.hpp"

namespace jetgeo {

/// Jet of a vector field at a point, truncated at `order`:
///   X0(i) = X^i, X1(i,j) = X^i_j, X2(i,j,k) = X^i_jk, X3(i,m,j,k) = X^i_mjk.
/// Blocks above the order are empty.
struct JetVector {
  int order = 0;
  Vector X0;
  Matrix X1;
  Tensor3 X2;
  Tensor4 X3;

  static JetVector zero(int n, int order);
  int dim() const { return static_cast<int>(X0.size()); }
  /// Drops blocks above `k`.
  JetVector truncated(int k) const;

  JetVector& operator+=(const JetVector& o);
  JetVector& operator-=(const JetVector& o);
  JetVector& operator*=(double s);
};

JetVector operator+(JetVector a, const JetVector& b);
JetVector operator-(JetVector a, const JetVector& b);
JetVector operator*(double s, JetVector a);
double max_abs_diff(const JetVector& a, const JetVector& b);
double max_abs(const JetVector& a);

/// Order-1 coordinates (X0, X1) as one vector of length n + n^2, X1 row-major.
Vector order1_coefficients(const JetVector& x);
JetVector from_order1_coefficients(const Vector& z, int n);

/// Section of J_kT with symbolic entries.
struct JetVectorField {
  int order = 0;
  ExprVector X0;
  ExprMatrix X1;
  ExprTensor3 X2;
  ExprTensor4 X3;

  int dim() const { return X0.dim(); }
  JetVector at(std::span<const double> x) const;
  /// Multiplies every block by the scalar function f.
  JetVectorField scaled(const Expr& f) const;
};

JetVectorField operator+(const JetVectorField& a, const JetVectorField& b);

/// j_k X: the blocks are the symbolic derivatives of X (order 2 or 3).
JetVectorField prolong(const ExprVector& X, int order);

/// D(X3) = (d_j X^i - X^i_j, d_j X^i_k - X^i_jk, d_m X^i_jk - X^i_mjk).
struct SpencerDefect {
  ExprMatrix d0;   // (i,j)
  ExprTensor3 d1;  // (i,j,k)
  ExprTensor4 d2;  // (i,m,j,k)
};
SpencerDefect spencer_operator(const JetVectorField& X);

/// Spencer bracket of two order-2 sections in component form.
JetVectorField spencer_bracket(const JetVectorField& X, const JetVectorField& Y);

/// Residuals of the two linear defining equations at p.
struct AlgebroidResidual {
  double first = 0.0;
  double second = 0.0;
  double max() const { return std::max(first, second); }
};
AlgebroidResidual algebroid_membership(const GeometricObject& g, const JetVector& X, std::span<const double> p);

/// The splitting: the unique X2 making (X0, X1, X2) satisfy the second equation at p.
JetVector epsilon_lift(const GeometricObject& g, const JetVector& X, std::span<const double> p);
JetVector epsilon_lift(const LocalGeometry& l, const JetVector& X);

/// Orthonormal (coefficient norm) basis of the fiber at p, canonically chosen.
std::vector<JetVector> fiber_basis(const GeometricObject& g, std::span<const double> p);
/// The part of the fiber with X0 = 0.
std::vector<JetVector> stabilizer_fiber(const GeometricObject& g, std::span<const double> p);

/// Pointwise bracket of the order-3 lifts of two fiber elements, with the lifts
/// taken from the formally differentiated second defining equation.
JetVector algebraic_bracket_point(const JetVector& xi, const JetVector& eta, const GeometricObject& g,
                                  std::span<const double> p, double membership_tol = 1e-10);

/// The order-3 block forced by differentiating the second equation (index m first).
Tensor4 order3_lift(const LocalGeometry& l, const JetVector& X);

}  // namespace jetgeo
