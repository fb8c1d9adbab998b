#include "jetgeo_cli/generators.hpp"

#include <cmath>

namespace jetgeo::gen {

double uniform(Rng& rng, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }

Matrix invertible(Rng& rng, int n) {
  for (;;) {
    Matrix m(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) m(i, j) = uniform(rng) + (i == j ? 1.0 : 0.0);
    if (std::abs(m.determinant()) >= 0.2) return m;
  }
}

Tensor3 symmetric_tensor(Rng& rng, int n, double scale) {
  Tensor3 t(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = j; k < n; ++k) t(i, j, k) = t(i, k, j) = uniform(rng, -scale, scale);
  return t;
}

Jet2Element jet2(Rng& rng, int n) { return {invertible(rng, n), symmetric_tensor(rng, n)}; }

Matrix orthogonal(Rng& rng, int n) {
  std::normal_distribution<double> normal;
  Matrix m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = normal(rng);
  Eigen::HouseholderQR<Matrix> qr(m);
  Matrix q = qr.householderQ() * Matrix::Identity(n, n);
  if (uniform(rng) < 0.0) q.col(0) = -q.col(0);
  return q;
}

Jet3Element1d mobius_jet(Rng& rng, double* coeffs) {
  for (;;) {
    const double a = uniform(rng, -2, 2), b = uniform(rng, -2, 2), c = uniform(rng, 0.5, 2) * (uniform(rng) < 0 ? -1 : 1),
                 d = uniform(rng, -2, 2);
    const double D = b * c - a * d;
    if (std::abs(D) < 0.1) continue;
    if (coeffs) {
      coeffs[0] = a;
      coeffs[1] = b;
      coeffs[2] = c;
      coeffs[3] = d;
    }
    return {D / (c * c), -2.0 * d * D / (c * c * c), 6.0 * d * d * D / (c * c * c * c)};
  }
}

Jet3Element1d jet3(Rng& rng) {
  double a1 = 0.0;
  while (std::abs(a1) < 0.2) a1 = uniform(rng, -2, 2);
  return {a1, uniform(rng, -2, 2), uniform(rng, -2, 2)};
}

Expr polynomial(Rng& rng, int n, int degree) {
  // sum over exponent vectors with total degree <= degree
  Expr acc(0.0);
  std::vector<int> e(static_cast<std::size_t>(n), 0);
  for (;;) {
    int total = 0;
    for (int v : e) total += v;
    if (total <= degree) {
      Expr term(std::round(uniform(rng, -2, 2) * 4.0) / 4.0);
      for (int i = 0; i < n; ++i)
        for (int p = 0; p < e[i]; ++p) term = term * Expr::variable(i);
      acc += term;
    }
    int i = 0;
    while (i < n && ++e[i] > degree) e[i++] = 0;
    if (i == n) break;
  }
  return acc;
}

ExprVector polynomial_field(Rng& rng, int n, int degree) {
  ExprVector v(n);
  for (int i = 0; i < n; ++i) v(i) = polynomial(rng, n, degree);
  return v;
}

JetVectorField polynomial_jet_field(Rng& rng, int n, int degree) {
  JetVectorField f;
  f.order = 2;
  f.X0 = polynomial_field(rng, n, degree);
  f.X1 = ExprMatrix(n);
  for (auto& e : f.X1) e = polynomial(rng, n, degree);
  f.X2 = ExprTensor3(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = j; k < n; ++k) f.X2(i, j, k) = f.X2(i, k, j) = polynomial(rng, n, degree);
  return f;
}

}  // namespace jetgeo::gen
