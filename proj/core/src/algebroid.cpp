#include "jetgeo/algebroid.hpp"

#include <cmath>

namespace jetgeo {

// ---------------------------------------------------------------------------
// JetVector

JetVector JetVector::zero(int n, int order) {
  JetVector x;
  x.order = order;
  x.X0 = Vector::Zero(n);
  if (order >= 1) x.X1 = Matrix::Zero(n, n);
  if (order >= 2) x.X2 = Tensor3(n);
  if (order >= 3) x.X3 = Tensor4(n);
  return x;
}

JetVector JetVector::truncated(int k) const {
  JetVector x = *this;
  if (k >= order) return x;
  x.order = k;
  if (k < 1) x.X1 = Matrix();
  if (k < 2) x.X2 = Tensor3();
  if (k < 3) x.X3 = Tensor4();
  return x;
}

namespace {

template <class G>
void axpy(G& y, const G& x, double s) {
  auto iy = y.begin();
  for (auto ix = x.begin(); ix != x.end(); ++ix, ++iy) *iy += s * *ix;
}

void check_compatible(const JetVector& a, const JetVector& b) {
  if (a.order != b.order || a.dim() != b.dim()) throw std::invalid_argument("JetVector: incompatible operands");
}

}  // namespace

JetVector& JetVector::operator+=(const JetVector& o) {
  check_compatible(*this, o);
  X0 += o.X0;
  if (order >= 1) X1 += o.X1;
  if (order >= 2) axpy(X2, o.X2, 1.0);
  if (order >= 3) axpy(X3, o.X3, 1.0);
  return *this;
}

JetVector& JetVector::operator-=(const JetVector& o) {
  check_compatible(*this, o);
  X0 -= o.X0;
  if (order >= 1) X1 -= o.X1;
  if (order >= 2) axpy(X2, o.X2, -1.0);
  if (order >= 3) axpy(X3, o.X3, -1.0);
  return *this;
}

JetVector& JetVector::operator*=(double s) {
  X0 *= s;
  X1 *= s;
  for (double& v : X2) v *= s;
  for (double& v : X3) v *= s;
  return *this;
}

JetVector operator+(JetVector a, const JetVector& b) { return a += b; }
JetVector operator-(JetVector a, const JetVector& b) { return a -= b; }
JetVector operator*(double s, JetVector a) { return a *= s; }

double max_abs_diff(const JetVector& a, const JetVector& b) { return max_abs(a - b); }

double max_abs(const JetVector& a) {
  double m = max_abs(a.X0);
  if (a.order >= 1) m = std::max(m, max_abs(a.X1));
  if (a.order >= 2) m = std::max(m, max_abs(a.X2));
  if (a.order >= 3) m = std::max(m, max_abs(a.X3));
  return m;
}

Vector order1_coefficients(const JetVector& x) {
  const int n = x.dim();
  Vector z(n + n * n);
  for (int i = 0; i < n; ++i) z(i) = x.X0(i);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) z(n + i * n + j) = x.order >= 1 ? x.X1(i, j) : 0.0;
  return z;
}

JetVector from_order1_coefficients(const Vector& z, int n) {
  if (z.size() != n + n * n) throw std::invalid_argument("from_order1_coefficients: wrong length");
  JetVector x = JetVector::zero(n, 1);
  for (int i = 0; i < n; ++i) x.X0(i) = z(i);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) x.X1(i, j) = z(n + i * n + j);
  return x;
}

// ---------------------------------------------------------------------------
// JetVectorField

JetVector JetVectorField::at(std::span<const double> x) const {
  const int n = dim();
  std::vector<Expr> all(X0.begin(), X0.end());
  if (order >= 1) all.insert(all.end(), X1.begin(), X1.end());
  if (order >= 2) all.insert(all.end(), X2.begin(), X2.end());
  if (order >= 3) all.insert(all.end(), X3.begin(), X3.end());
  const std::vector<double> v = Program(all).run(x);
  JetVector out = JetVector::zero(n, order);
  std::size_t pos = 0;
  for (int i = 0; i < n; ++i) out.X0(i) = v[pos++];
  if (order >= 1)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) out.X1(i, j) = v[pos++];
  if (order >= 2)
    for (double& e : out.X2) e = v[pos++];
  if (order >= 3)
    for (double& e : out.X3) e = v[pos++];
  return out;
}

JetVectorField JetVectorField::scaled(const Expr& f) const {
  JetVectorField out = *this;
  for (auto& e : out.X0) e = f * e;
  for (auto& e : out.X1) e = f * e;
  for (auto& e : out.X2) e = f * e;
  for (auto& e : out.X3) e = f * e;
  return out;
}

JetVectorField operator+(const JetVectorField& a, const JetVectorField& b) {
  if (a.order != b.order || a.dim() != b.dim()) throw std::invalid_argument("JetVectorField: incompatible operands");
  JetVectorField out = a;
  auto add = [](auto& y, const auto& x) {
    auto iy = y.begin();
    for (auto ix = x.begin(); ix != x.end(); ++ix, ++iy) *iy = *iy + *ix;
  };
  add(out.X0, b.X0);
  add(out.X1, b.X1);
  add(out.X2, b.X2);
  add(out.X3, b.X3);
  return out;
}

JetVectorField prolong(const ExprVector& X, int order) {
  if (order < 0 || order > 3) throw std::invalid_argument("prolong: order must be in 0..3");
  const int n = X.dim();
  Differentiator d;
  JetVectorField out;
  out.order = order;
  out.X0 = X;
  if (order >= 1) {
    out.X1 = ExprMatrix(n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) out.X1(i, j) = d(X(i), j);
  }
  if (order >= 2) {
    out.X2 = ExprTensor3(n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = j; k < n; ++k) {
          const Expr v = d(out.X1(i, j), k);
          out.X2(i, j, k) = v;
          out.X2(i, k, j) = v;
        }
  }
  if (order >= 3) {
    out.X3 = ExprTensor4(n);
    for (int i = 0; i < n; ++i)
      for (int m = 0; m < n; ++m)
        for (int j = 0; j < n; ++j)
          for (int k = 0; k < n; ++k) out.X3(i, m, j, k) = d(out.X2(i, j, k), m);
  }
  return out;
}

SpencerDefect spencer_operator(const JetVectorField& X) {
  if (X.order != 3) throw std::invalid_argument("spencer_operator: needs an order-3 field");
  const int n = X.dim();
  Differentiator d;
  SpencerDefect D{ExprMatrix(n), ExprTensor3(n), ExprTensor4(n)};
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      D.d0(i, j) = d(X.X0(i), j) - X.X1(i, j);
      for (int k = 0; k < n; ++k) {
        D.d1(i, j, k) = d(X.X1(i, k), j) - X.X2(i, j, k);
        for (int m = 0; m < n; ++m) D.d2(i, m, j, k) = d(X.X2(i, j, k), m) - X.X3(i, m, j, k);
      }
    }
  return D;
}

JetVectorField spencer_bracket(const JetVectorField& X, const JetVectorField& Y) {
  if (X.order < 2 || Y.order < 2 || X.dim() != Y.dim())
    throw std::invalid_argument("spencer_bracket: needs order-2 sections of equal dimension");
  const int n = X.dim();
  Differentiator d;
  // X^a d_a (.) - Y^a d_a (.) applied to a pair of entries
  auto transport = [&](const Expr& y, const Expr& x) {
    Expr acc(0.0);
    for (int a = 0; a < n; ++a) acc += X.X0(a) * d(y, a) - Y.X0(a) * d(x, a);
    return acc;
  };
  JetVectorField out;
  out.order = 2;
  out.X0 = ExprVector(n);
  out.X1 = ExprMatrix(n);
  out.X2 = ExprTensor3(n);
  for (int i = 0; i < n; ++i) {
    out.X0(i) = transport(Y.X0(i), X.X0(i));
    for (int j = 0; j < n; ++j) {
      Expr acc = transport(Y.X1(i, j), X.X1(i, j));
      for (int a = 0; a < n; ++a) acc += X.X1(a, j) * Y.X1(i, a) - Y.X1(a, j) * X.X1(i, a);
      out.X1(i, j) = acc;
    }
    for (int j = 0; j < n; ++j)
      for (int k = j; k < n; ++k) {
        Expr acc = transport(Y.X2(i, j, k), X.X2(i, j, k));
        for (int a = 0; a < n; ++a) {
          acc += X.X2(a, j, k) * Y.X1(i, a) + X.X1(a, j) * Y.X2(i, k, a) + X.X1(a, k) * Y.X2(i, a, j);
          acc -= Y.X2(a, j, k) * X.X1(i, a) + Y.X1(a, j) * X.X2(i, k, a) + Y.X1(a, k) * X.X2(i, a, j);
        }
        out.X2(i, j, k) = acc;
        out.X2(i, k, j) = acc;
      }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Defining equations

namespace {

// Second equation without the X^i_jk term.
Tensor3 second_equation_lower(const LocalGeometry& l, const JetVector& X) {
  const int n = l.n;
  Tensor3 r(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        double acc = 0.0;
        for (int a = 0; a < n; ++a) {
          acc += l.gamma(i, a, k) * X.X1(a, j) + l.gamma(i, a, j) * X.X1(a, k) - l.gamma(a, j, k) * X.X1(i, a);
          acc += X.X0(a) * l.dgamma(i, j, k, a);
        }
        r(i, j, k) = acc;
      }
  return r;
}

Matrix first_equation(const LocalGeometry& l, const JetVector& X) {
  const int n = l.n;
  Matrix r = Matrix::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double acc = 0.0;
      for (int a = 0; a < n; ++a) acc += X.X0(a) * l.dg(i, j, a) + l.g(a, i) * X.X1(a, j) + l.g(a, j) * X.X1(a, i);
      r(i, j) = acc;
    }
  return r;
}

}  // namespace

AlgebroidResidual algebroid_membership(const GeometricObject& g, const JetVector& X, std::span<const double> p) {
  if (X.order < 2 || X.dim() != g.dim()) throw std::invalid_argument("algebroid_membership: needs an order-2 jet");
  const LocalGeometry l = g.at(p, 1);
  AlgebroidResidual r;
  if (g.riemannian()) r.first = max_abs(first_equation(l, X));
  Tensor3 second = second_equation_lower(l, X);
  for (std::size_t q = 0; q < second.size(); ++q) second.data()[q] += X.X2.data()[q];
  r.second = max_abs(second);
  return r;
}

JetVector epsilon_lift(const LocalGeometry& l, const JetVector& X) {
  if (X.order < 1) throw std::invalid_argument("epsilon_lift: needs an order-1 jet");
  JetVector out = X.truncated(1);
  out.order = 2;
  out.X2 = second_equation_lower(l, X);
  for (double& v : out.X2) v = -v;
  return out;
}

JetVector epsilon_lift(const GeometricObject& g, const JetVector& X, std::span<const double> p) {
  return epsilon_lift(g.at(p, 1), X);
}

namespace {

// Canonical orthonormal basis of the null space of A: project e_1, e_2, ... onto
// the null space and Gram-Schmidt them in order.
std::vector<Vector> canonical_null_basis(const Matrix& A, int cols, int expected) {
  Matrix N;
  if (A.rows() == 0) {
    N = Matrix::Identity(cols, cols);
  } else {
    const Matrix At = A.transpose();
    Eigen::ColPivHouseholderQR<Matrix> qr(At);
    qr.setThreshold(1e-10);
    const int rank = static_cast<int>(qr.rank());
    const Matrix Q = qr.householderQ() * Matrix::Identity(cols, cols);
    N = Q.rightCols(cols - rank);
  }
  if (N.cols() != expected)
    throw RankError("fiber dimension " + std::to_string(N.cols()) + " differs from the expected " +
                    std::to_string(expected) + " (degenerate metric?)");
  const Matrix P = N * N.transpose();
  std::vector<Vector> basis;
  for (int e = 0; e < cols && static_cast<int>(basis.size()) < expected; ++e) {
    Vector v = P.col(e);
    for (const auto& b : basis) v -= b.dot(v) * b;
    for (const auto& b : basis) v -= b.dot(v) * b;  // second pass for stability
    const double norm = v.norm();
    if (norm < 1e-6) continue;
    v /= norm;
    for (int q = 0; q < v.size(); ++q) {
      if (std::abs(v(q)) > 1e-12) {
        if (v(q) < 0) v = -v;
        break;
      }
    }
    basis.push_back(v);
  }
  if (static_cast<int>(basis.size()) != expected) throw RankError("fiber basis construction lost rank");
  return basis;
}

std::vector<JetVector> fiber_impl(const GeometricObject& g, std::span<const double> p, bool stabilizer) {
  if (!g.domain().contains(p)) throw std::invalid_argument("fiber_basis: point outside the domain");
  const int n = g.dim();
  const int cols = n + n * n;
  const LocalGeometry l = g.at(p, 1);
  if (g.riemannian()) {
    Eigen::LLT<Matrix> llt(l.g);
    if (llt.info() != Eigen::Success) throw SamplePointError("metric not positive-definite", Point(p.begin(), p.end()));
  }
  std::vector<Vector> rows;
  if (g.riemannian()) {
    const int m = n * (n + 1) / 2;
    Matrix A = Matrix::Zero(m, cols);
    // column c is the image of the c-th unit coefficient vector
    for (int c = 0; c < cols; ++c) {
      Vector z = Vector::Zero(cols);
      z(c) = 1.0;
      const Matrix r = first_equation(l, from_order1_coefficients(z, n));
      int row = 0;
      for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) A(row++, c) = r(i, j);
    }
    for (int r = 0; r < A.rows(); ++r) rows.push_back(A.row(r).transpose());
  }
  if (stabilizer)
    for (int i = 0; i < n; ++i) {
      Vector e = Vector::Zero(cols);
      e(i) = 1.0;
      rows.push_back(e);
    }
  Matrix A(static_cast<int>(rows.size()), cols);
  for (int r = 0; r < A.rows(); ++r) A.row(r) = rows[r].transpose();

  int expected = g.riemannian() ? n * (n + 1) / 2 : n + n * n;
  if (stabilizer) expected = g.riemannian() ? n * (n - 1) / 2 : n * n;
  std::vector<JetVector> out;
  for (const auto& z : canonical_null_basis(A, cols, expected)) out.push_back(epsilon_lift(l, from_order1_coefficients(z, n)));
  return out;
}

}  // namespace

std::vector<JetVector> fiber_basis(const GeometricObject& g, std::span<const double> p) {
  return fiber_impl(g, p, false);
}

std::vector<JetVector> stabilizer_fiber(const GeometricObject& g, std::span<const double> p) {
  return fiber_impl(g, p, true);
}

Tensor4 order3_lift(const LocalGeometry& l, const JetVector& X) {
  const int n = l.n;
  Tensor4 X3(n);
  for (int i = 0; i < n; ++i)
    for (int m = 0; m < n; ++m)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
          double acc = 0.0;
          for (int a = 0; a < n; ++a) {
            acc += l.dgamma(i, a, k, m) * X.X1(a, j) + l.gamma(i, a, k) * X.X2(a, j, m);
            acc += l.dgamma(i, a, j, m) * X.X1(a, k) + l.gamma(i, a, j) * X.X2(a, k, m);
            acc -= l.dgamma(a, j, k, m) * X.X1(i, a) + l.gamma(a, j, k) * X.X2(i, a, m);
            acc += X.X1(a, m) * l.dgamma(i, j, k, a) + X.X0(a) * l.ddgamma(i, j, k, a, m);
          }
          X3(i, m, j, k) = -acc;
        }
  return X3;
}

JetVector algebraic_bracket_point(const JetVector& xi, const JetVector& eta, const GeometricObject& g,
                                  std::span<const double> p, double membership_tol) {
  for (const JetVector* v : {&xi, &eta}) {
    const double r = algebroid_membership(g, *v, p).max();
    if (r > membership_tol * (1.0 + max_abs(*v)))
      throw PreconditionError("algebraic_bracket_point: input not in the fiber (residual " + std::to_string(r) + ")");
  }
  const int n = g.dim();
  const LocalGeometry l = g.at(p, 2);
  const Tensor4 X3 = order3_lift(l, xi);
  const Tensor4 Y3 = order3_lift(l, eta);
  const JetVector& X = xi;
  const JetVector& Y = eta;
  JetVector out = JetVector::zero(n, 2);
  for (int i = 0; i < n; ++i) {
    double acc = 0.0;
    for (int a = 0; a < n; ++a) acc += X.X0(a) * Y.X1(i, a) - Y.X0(a) * X.X1(i, a);
    out.X0(i) = acc;
    for (int j = 0; j < n; ++j) {
      double s = 0.0;
      for (int a = 0; a < n; ++a)
        s += X.X1(a, j) * Y.X1(i, a) + X.X0(a) * Y.X2(i, a, j) - Y.X1(a, j) * X.X1(i, a) - Y.X0(a) * X.X2(i, a, j);
      out.X1(i, j) = s;
      for (int k = 0; k < n; ++k) {
        double t = 0.0;
        for (int a = 0; a < n; ++a) {
          t += X.X2(a, j, k) * Y.X1(i, a) + X.X1(a, j) * Y.X2(i, a, k) + X.X1(a, k) * Y.X2(i, a, j) +
               X.X0(a) * Y3(i, a, j, k);
          t -= Y.X2(a, j, k) * X.X1(i, a) + Y.X1(a, j) * X.X2(i, a, k) + Y.X1(a, k) * X.X2(i, a, j) +
               Y.X0(a) * X3(i, a, j, k);
        }
        out.X2(i, j, k) = t;
      }
    }
  }
  return out;
}

}  // namespace jetgeo
