#pragma once

#include <random>

#include "jetgeo/algebroid.hpp"
#include "jetgeo/jet_groups.hpp"

namespace jetgeo::gen {

using Rng = std::mt19937_64;

double uniform(Rng& rng, double lo = -1.0, double hi = 1.0);

/// a1 near the identity with |det a1| >= 0.2, a2 uniform in [-1,1].
Jet2Element jet2(Rng& rng, int n);
/// Symmetric (in the lower pair) array with entries in [-scale, scale].
Tensor3 symmetric_tensor(Rng& rng, int n, double scale = 1.0);
/// Haar-ish orthogonal matrix, reflections included.
Matrix orthogonal(Rng& rng, int n);
/// Invertible matrix with entries in [-1,1] and |det| >= 0.2.
Matrix invertible(Rng& rng, int n);

/// Jets (f', f'', f''') at 0 of a Moebius map (a+bx)/(c+dx) with random
/// well-conditioned coefficients; the constant term is dropped.
Jet3Element1d mobius_jet(Rng& rng, double* coeffs = nullptr);
Jet3Element1d jet3(Rng& rng);

/// Random polynomial of total degree <= degree in n variables.
Expr polynomial(Rng& rng, int n, int degree);
ExprVector polynomial_field(Rng& rng, int n, int degree);
/// Order-2 section with independent random polynomial blocks (not holonomic).
JetVectorField polynomial_jet_field(Rng& rng, int n, int degree);

}  // namespace jetgeo::gen
