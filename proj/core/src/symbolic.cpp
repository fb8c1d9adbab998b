#include "jetgeo/symbolic.hpp"

namespace jetgeo {

namespace {

Expr minor_determinant(const ExprMatrix& m, std::vector<int>& rows, std::vector<int>& cols) {
  if (rows.size() == 1) return m(rows[0], cols[0]);
  Expr acc(0.0);
  const int r = rows.front();
  rows.erase(rows.begin());
  for (std::size_t c = 0; c < cols.size(); ++c) {
    const int col = cols[c];
    if (m(r, col).is_constant(0.0)) continue;
    cols.erase(cols.begin() + static_cast<long>(c));
    const Expr sub = minor_determinant(m, rows, cols);
    cols.insert(cols.begin() + static_cast<long>(c), col);
    acc = (c % 2 == 0) ? acc + m(r, col) * sub : acc - m(r, col) * sub;
  }
  rows.insert(rows.begin(), r);
  return acc;
}

}  // namespace

Expr determinant(const ExprMatrix& m) {
  const int n = m.dim();
  if (n == 0) return Expr(1.0);
  std::vector<int> rows(n), cols(n);
  for (int i = 0; i < n; ++i) rows[i] = cols[i] = i;
  return minor_determinant(m, rows, cols);
}

ExprMatrix inverse(const ExprMatrix& m) {
  const int n = m.dim();
  const Expr det = determinant(m);
  ExprMatrix out(n);
  if (n == 1) {
    out(0, 0) = Expr(1.0) / det;
    return out;
  }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      // cofactor C_ji goes to entry (i, j)
      std::vector<int> rows, cols;
      for (int r = 0; r < n; ++r)
        if (r != j) rows.push_back(r);
      for (int c = 0; c < n; ++c)
        if (c != i) cols.push_back(c);
      const Expr minor = minor_determinant(m, rows, cols);
      out(i, j) = ((i + j) % 2 == 0 ? minor : -minor) / det;
    }
  return out;
}

ExprMatrix transpose(const ExprMatrix& m) {
  const int n = m.dim();
  ExprMatrix out(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) out(i, j) = m(j, i);
  return out;
}

ExprMatrix multiply(const ExprMatrix& a, const ExprMatrix& b) {
  const int n = a.dim();
  ExprMatrix out(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      Expr acc(0.0);
      for (int k = 0; k < n; ++k) acc += a(i, k) * b(k, j);
      out(i, j) = acc;
    }
  return out;
}

ExprMatrix constant_matrix(const Matrix& m) {
  const int n = static_cast<int>(m.rows());
  ExprMatrix out(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) out(i, j) = Expr(m(i, j));
  return out;
}

ExprTensor3 constant_tensor(const Tensor3& t) {
  const int n = t.dim();
  ExprTensor3 out(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) out(i, j, k) = Expr(t(i, j, k));
  return out;
}

ExprMatrix cholesky_frame(const ExprMatrix& g) {
  const int n = g.dim();
  ExprMatrix U(n, Expr(0.0));
  for (int i = 0; i < n; ++i) {
    Expr diag = g(i, i);
    for (int k = 0; k < i; ++k) diag -= U(k, i) * U(k, i);
    U(i, i) = sqrt(diag);
    for (int j = i + 1; j < n; ++j) {
      Expr acc = g(i, j);
      for (int k = 0; k < i; ++k) acc -= U(k, i) * U(k, j);
      U(i, j) = acc / U(i, i);
    }
  }
  return U;
}

ExprTensor3 symmetrize_lower(const ExprTensor3& t) {
  const int n = t.dim();
  ExprTensor3 out(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = j; k < n; ++k) {
        const Expr v = t(i, j, k).id() == t(i, k, j).id() ? t(i, j, k) : Expr(0.5) * (t(i, j, k) + t(i, k, j));
        out(i, j, k) = v;
        out(i, k, j) = v;
      }
  return out;
}

ExprTensor3 christoffel(const ExprMatrix& g, const ExprMatrix& ginv, Differentiator& d) {
  const int n = g.dim();
  // lowered(l, j, k) = 1/2 (d_j g_lk + d_k g_lj - d_l g_jk)
  ExprTensor3 lowered(n);
  for (int l = 0; l < n; ++l)
    for (int j = 0; j < n; ++j)
      for (int k = j; k < n; ++k) {
        const Expr v = Expr(0.5) * (d(g(l, k), j) + d(g(l, j), k) - d(g(j, k), l));
        lowered(l, j, k) = v;
        lowered(l, k, j) = v;
      }
  ExprTensor3 out(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = j; k < n; ++k) {
        Expr acc(0.0);
        for (int l = 0; l < n; ++l) acc += ginv(i, l) * lowered(l, j, k);
        out(i, j, k) = acc;
        out(i, k, j) = acc;
      }
  return out;
}

}  // namespace jetgeo
