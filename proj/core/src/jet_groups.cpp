#include "jetgeo/jet_groups.hpp"

#include <cmath>

namespace jetgeo {

namespace {

void require_invertible(const Matrix& m, const char* where) {
  Eigen::FullPivLU<Matrix> lu(m);
  if (!lu.isInvertible()) throw SingularMatrixError(std::string(where) + ": singular first-order block");
}

}  // namespace

Jet2Element::Jet2Element(Matrix first, Tensor3 second) : a1(std::move(first)), a2(std::move(second)) {
  const int n = static_cast<int>(a1.rows());
  if (a1.cols() != n || a2.dim() != n) throw std::invalid_argument("Jet2Element: inconsistent block sizes");
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = j + 1; k < n; ++k) {
        const double avg = 0.5 * (a2(i, j, k) + a2(i, k, j));
        a2(i, j, k) = avg;
        a2(i, k, j) = avg;
      }
}

Jet2Element Jet2Element::identity(int n) { return {Matrix::Identity(n, n), Tensor3(n)}; }

Jet2Element Jet2Element::kernel(const Tensor3& k) { return {Matrix::Identity(k.dim(), k.dim()), k}; }

Jet2Element compose2(const Jet2Element& a, const Jet2Element& b) {
  const int n = a.dim();
  if (b.dim() != n) throw std::invalid_argument("compose2: dimension mismatch");
  Tensor3 c2(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = j; k < n; ++k) {
        double acc = 0.0;
        for (int s = 0; s < n; ++s) {
          acc += a.a1(i, s) * b.a2(s, j, k);
          for (int t = 0; t < n; ++t) acc += a.a2(i, s, t) * b.a1(s, j) * b.a1(t, k);
        }
        c2(i, j, k) = acc;
        c2(i, k, j) = acc;
      }
  return {a.a1 * b.a1, std::move(c2)};
}

Jet2Element inverse2(const Jet2Element& a) {
  require_invertible(a.a1, "inverse2");
  const int n = a.dim();
  const Matrix inv = a.a1.inverse();
  // (a1^-1, -a1^-1 a2 (a1^-1, a1^-1))
  Tensor3 c2(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = j; k < n; ++k) {
        double acc = 0.0;
        for (int s = 0; s < n; ++s)
          for (int p = 0; p < n; ++p)
            for (int q = 0; q < n; ++q) acc += inv(i, s) * a.a2(s, p, q) * inv(p, j) * inv(q, k);
        c2(i, j, k) = -acc;
        c2(i, k, j) = -acc;
      }
  return {inv, std::move(c2)};
}

Matrix project(const Jet2Element& a) { return a.a1; }

Jet2Element split_epsilon(const Matrix& a1) {
  require_invertible(a1, "split_epsilon");
  return {a1, Tensor3(static_cast<int>(a1.rows()))};
}

double jet_distance(const Jet2Element& a, const Jet2Element& b) {
  return std::max(max_abs_diff(a.a1, b.a1), max_abs_diff(a.a2, b.a2));
}

Grid<double, 2> to_grid(const Matrix& m) {
  const int n = static_cast<int>(m.rows());
  Grid<double, 2> g(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) g(i, j) = m(i, j);
  return g;
}

Matrix to_matrix(const Grid<double, 2>& g) {
  const int n = g.dim();
  Matrix m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = g(i, j);
  return m;
}

CosetInvariant coset_invariant(const Jet2Element& a, StructureKind kind) {
  require_invertible(a.a1, "coset_invariant");
  const int n = a.dim();
  const Matrix inv = a.a1.inverse();
  CosetInvariant F;
  F.kind = kind;
  if (kind == StructureKind::kRiemannian) F.F1 = a.a1.transpose() * a.a1;
  F.F2 = Tensor3(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        double acc = 0.0;
        for (int s = 0; s < n; ++s) acc += inv(i, s) * a.a2(s, j, k);
        F.F2(i, j, k) = acc;
      }
  return F;
}

CosetInvariant coset_transport(const CosetInvariant& Fa, const Jet2Element& b) {
  require_invertible(b.a1, "coset_transport");
  const auto b1 = to_grid(b.a1);
  const auto b1inv = to_grid(b.a1.inverse());
  CosetInvariant out;
  out.kind = Fa.kind;
  if (Fa.kind == StructureKind::kRiemannian) out.F1 = to_matrix(transport_first(to_grid(Fa.F1), b1));
  out.F2 = transport_second(Fa.F2, b1, b1inv, b.a2);
  return out;
}

Tensor3 recover_conjugator(const std::function<Jet2Element(const Matrix&)>& sigma,
                           std::span<const Matrix> samples, double lambda, double tol) {
  if (lambda == 0.0 || lambda == 1.0 || !std::isfinite(lambda))
    throw std::invalid_argument("recover_conjugator: lambda must be finite and not 0 or 1");
  if (samples.empty()) throw std::invalid_argument("recover_conjugator: no samples to verify against");
  const int n = static_cast<int>(samples.front().rows());
  const Matrix scalar = lambda * Matrix::Identity(n, n);
  const Jet2Element at_scalar = sigma(scalar);
  if (max_abs_diff(at_scalar.a1, scalar) > tol * std::abs(lambda))
    throw VerificationError("recover_conjugator: sigma is not a right inverse of the projection at lambda*I");

  Tensor3 k = at_scalar.a2;
  for (double& v : k) v /= lambda * lambda - lambda;

  const Jet2Element left = Jet2Element::kernel(k);
  Tensor3 minus_k = k;
  for (double& v : minus_k) v = -v;
  const Jet2Element right = Jet2Element::kernel(minus_k);
  for (const Matrix& b : samples) {
    const Jet2Element got = sigma(b);
    const Jet2Element want = compose2(compose2(left, split_epsilon(b)), right);
    const double scale = 1.0 + std::max(max_abs(want.a1), max_abs(want.a2));
    if (jet_distance(got, want) > tol * scale)
      throw VerificationError("recover_conjugator: sigma is not conjugate to the trivial splitting");
  }
  return k;
}

Jet3Element1d compose3_1d(const Jet3Element1d& a, const Jet3Element1d& b) {
  return {a.a1 * b.a1, a.a1 * b.a2 + a.a2 * b.a1 * b.a1,
          a.a1 * b.a3 + 3.0 * a.a2 * b.a1 * b.a2 + a.a3 * b.a1 * b.a1 * b.a1};
}

Jet3Element1d inverse3_1d(const Jet3Element1d& a) {
  if (a.a1 == 0.0) throw SingularMatrixError("inverse3_1d: a1 = 0");
  const double c1 = 1.0 / a.a1;
  const double c2 = -a.a2 * c1 * c1 * c1;
  const double c3 = -(3.0 * a.a2 * c1 * c2 + a.a3 * c1 * c1 * c1) * c1;
  return {c1, c2, c3};
}

Jet3Element1d split_epsilon3(double a1, double a2) {
  if (a1 == 0.0) throw SingularMatrixError("split_epsilon3: a1 = 0");
  return {a1, a2, 1.5 * a2 * a2 / a1};
}

SchwarzianSplit split_schwarzian(const Jet3Element1d& a) {
  SchwarzianSplit s;
  s.head = split_epsilon3(a.a1, a.a2);
  s.schwarzian = a.a3 - s.head.a3;
  return s;
}

}  // namespace jetgeo
