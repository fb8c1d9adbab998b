#pragma once

#include "jetgeo/expr.hpp"

namespace jetgeo {

/// Laplace expansion; fine for the n <= 4 matrices used here.
Expr determinant(const ExprMatrix& m);

/// Adjugate over determinant.
ExprMatrix inverse(const ExprMatrix& m);

ExprMatrix transpose(const ExprMatrix& m);
ExprMatrix multiply(const ExprMatrix& a, const ExprMatrix& b);

ExprMatrix constant_matrix(const Matrix& m);
ExprTensor3 constant_tensor(const Tensor3& t);

/// Upper-triangular U with U^T U = g (symbolic Cholesky).
ExprMatrix cholesky_frame(const ExprMatrix& g);

/// Symmetrizes the lower pair of a third-order array.
ExprTensor3 symmetrize_lower(const ExprTensor3& t);

/// Levi-Civita symbols of `g` with the given inverse metric.
ExprTensor3 christoffel(const ExprMatrix& g, const ExprMatrix& ginv, Differentiator& d);

}  // namespace jetgeo
