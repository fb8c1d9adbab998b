#include "jetgeo/curvature.hpp"

#include <cmath>
#include <limits>

namespace jetgeo {

Tensor4 fraud_riemann(const LocalGeometry& l) {
  const int n = l.n;
  if (l.dgamma.dim() != n) throw std::invalid_argument("fraud_riemann: first derivatives of the connection needed");
  Tensor4 R(n);
  for (int i = 0; i < n; ++i)
    for (int r = 0; r < n; ++r)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
          double acc = l.dgamma(i, j, k, r) - l.dgamma(i, r, k, j);
          for (int b = 0; b < n; ++b) acc += -l.gamma(b, r, k) * l.gamma(i, j, b) + l.gamma(b, j, k) * l.gamma(i, r, b);
          R(i, r, j, k) = acc;
        }
  return R;
}

Tensor4 fraud_riemann(const GeometricObject& g, std::span<const double> x) { return fraud_riemann(g.at(x, 1)); }

Tensor4 constant_curvature_shape(const Matrix& g) {
  const int n = static_cast<int>(g.rows());
  Tensor4 B(n);
  for (int i = 0; i < n; ++i)
    for (int r = 0; r < n; ++r)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) B(i, r, j, k) = (i == r ? g(j, k) : 0.0) - (i == j ? g(r, k) : 0.0);
  return B;
}

// ---------------------------------------------------------------------------
// Algebroid curvature

Tensor4 algebroid_hat2(const LocalGeometry& l, const JetVector& X) {
  const int n = l.n;
  const auto& G = l.gamma;
  const auto& dG = l.dgamma;    // dG(i,j,k,a) = d_a G^i_jk
  const auto& ddG = l.ddgamma;  // ddG(i,j,k,a,b)
  Tensor4 h(n);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k)
      for (int r = 0; r < n; ++r)
        for (int j = 0; j < n; ++j) {
          double acc = 0.0;
          for (int a = 0; a < n; ++a) acc += X.X1(a, k) * dG(i, a, j, r);
          for (int b = 0; b < n; ++b) {
            double t = ddG(i, j, k, r, b);
            for (int a = 0; a < n; ++a) t += G(a, j, k) * dG(i, r, a, b) - G(i, a, k) * dG(a, j, r, b);
            acc += X.X0(b) * t;

            double u = dG(i, b, k, r);
            for (int a = 0; a < n; ++a) u -= G(i, a, k) * G(a, b, r);
            acc += X.X1(b, j) * u;

            double v = dG(i, j, k, b);
            for (int a = 0; a < n; ++a) v += -G(i, a, k) * G(a, b, j) + G(a, j, k) * G(i, b, a);
            acc += X.X1(b, r) * v;

            double w = dG(b, j, k, r);
            for (int a = 0; a < n; ++a) w += G(a, j, k) * G(b, r, a);
            acc -= X.X1(i, b) * w;
          }
          h(i, k, r, j) = acc;
        }
  return h;
}

Tensor3 algebroid_hat1(const LocalGeometry& l, const JetVector& X) {
  const int n = l.n;
  Tensor3 h(n);
  if (l.g.size() == 0) return h;
  const auto& g = l.g;
  const auto& dg = l.dg;    // dg(i,j,a) = d_a g_ij
  const auto& ddg = l.ddg;  // ddg(i,j,a,b)
  const auto& G = l.gamma;
  const auto& dG = l.dgamma;
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        double acc = 0.0;
        for (int a = 0; a < n; ++a) {
          acc += X.X1(a, k) * dg(i, j, a) + X.X0(a) * ddg(i, j, k, a);
          acc += X.X1(a, j) * dg(a, i, k) + X.X1(a, i) * dg(a, j, k);
          for (int b = 0; b < n; ++b) {
            acc -= X.X1(b, j) * g(a, i) * G(a, b, k) + X.X1(b, k) * g(a, i) * G(a, b, j);
            acc += X.X1(a, b) * g(a, i) * G(b, j, k) - X.X0(b) * g(a, i) * dG(a, j, k, b);
          }
        }
        h(k, i, j) = acc;
      }
  return h;
}

AlgebroidCurvature algebroid_curvature(const GeometricObject& g, std::span<const double> x) {
  const int n = g.dim();
  const int cols = n + n * n;
  const LocalGeometry l = g.at(x, 2);
  AlgebroidCurvature N;
  N.n = n;
  N.N2 = Matrix::Zero(n * n * n * n, cols);
  N.N1 = Matrix::Zero(n * n * n, cols);
  // Column c is the value on the c-th unit jet, so evaluation is exactly linear.
  for (int c = 0; c < cols; ++c) {
    Vector z = Vector::Zero(cols);
    z(c) = 1.0;
    const JetVector e = from_order1_coefficients(z, n);
    const Tensor4 h2 = algebroid_hat2(l, e);
    int q = 0;
    for (int i = 0; i < n; ++i)
      for (int k = 0; k < n; ++k)
        for (int r = 0; r < n; ++r)
          for (int j = 0; j < n; ++j) N.N2(q++, c) = h2(i, k, r, j) - h2(i, r, k, j);
    if (!g.riemannian()) continue;
    const Tensor3 h1 = algebroid_hat1(l, e);
    q = 0;
    for (int k = 0; k < n; ++k)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) N.N1(q++, c) = h1(k, i, j) - h1(i, k, j);
  }
  return N;
}

AlgebroidCurvature::Value AlgebroidCurvature::operator()(const JetVector& x) const {
  const Vector z = order1_coefficients(x);
  const Vector v2 = N2 * z;
  const Vector v1 = N1 * z;
  Value out{Tensor4(n), Tensor3(n)};
  std::copy(v2.data(), v2.data() + v2.size(), out.N2.data());
  std::copy(v1.data(), v1.data() + v1.size(), out.N1.data());
  return out;
}

// ---------------------------------------------------------------------------
// Groupoid curvature

GroupoidCurvature groupoid_curvature(const GeometricObject& g, std::span<const double> x, std::span<const double> y,
                                     const Matrix& phi1) {
  const int n = g.dim();
  Eigen::FullPivLU<Matrix> lu(phi1);
  if (phi1.rows() != n || !lu.isInvertible()) throw SingularMatrixError("groupoid_curvature: singular 1-arrow");
  const Matrix& phi = phi1;
  const Matrix bar = lu.inverse();
  const LocalGeometry lx = g.at(x, 1);
  const LocalGeometry ly = g.at(y, 1);
  const Tensor4 Rx = fraud_riemann(lx);
  const Tensor4 Ry = fraud_riemann(ly);

  GroupoidCurvature out{Tensor4(n), Tensor3(n)};
  // R2 = phi^i_d R^d_ab,c(x) bar^a_r bar^b_j bar^c_k - R^i_rj,k(y), contracted one slot at a time
  Tensor4 t1(n), t2(n);
  for (int i = 0; i < n; ++i)
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        for (int c = 0; c < n; ++c) {
          double acc = 0.0;
          for (int d = 0; d < n; ++d) acc += phi(i, d) * Rx(d, a, b, c);
          t1(i, a, b, c) = acc;
        }
  for (int i = 0; i < n; ++i)
    for (int r = 0; r < n; ++r)
      for (int b = 0; b < n; ++b)
        for (int c = 0; c < n; ++c) {
          double acc = 0.0;
          for (int a = 0; a < n; ++a) acc += t1(i, a, b, c) * bar(a, r);
          t2(i, r, b, c) = acc;
        }
  for (int i = 0; i < n; ++i)
    for (int r = 0; r < n; ++r)
      for (int j = 0; j < n; ++j)
        for (int c = 0; c < n; ++c) {
          double acc = 0.0;
          for (int b = 0; b < n; ++b) acc += t2(i, r, b, c) * bar(b, j);
          t1(i, r, j, c) = acc;
        }
  for (int i = 0; i < n; ++i)
    for (int r = 0; r < n; ++r)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
          double acc = 0.0;
          for (int c = 0; c < n; ++c) acc += t1(i, r, j, c) * bar(c, k);
          out.R2(i, r, j, k) = acc - Ry(i, r, j, k);
        }

  if (!g.riemannian()) return out;
  const Matrix ginv_y = ly.g.inverse();
  const auto& Gx = lx.gamma;
  const auto& Gy = ly.gamma;
  // hat(i,k,j), alternated in (k,j) below
  Tensor3 hat(n);
  // m(a,j) = g_ab(y) phi^b_j
  const Matrix m = ly.g * phi;
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k)
      for (int j = 0; j < n; ++j) {
        double acc = 0.0;
        for (int a = 0; a < n; ++a)
          for (int b = 0; b < n; ++b) {
            acc += bar(b, a) * lx.dg(b, j, k) * ginv_y(a, i);
            for (int c = 0; c < n; ++c) acc -= phi(a, k) * phi(b, j) * ly.dg(c, b, a) * ginv_y(c, i);
          }
        for (int d = 0; d < n; ++d)
          for (int c = 0; c < n; ++c)
            for (int a = 0; a < n; ++a) {
              double s = 0.0;
              for (int e = 0; e < n; ++e) s += bar(e, d) * Gx(c, k, e);
              acc -= s * phi(a, c) * m(a, j) * ginv_y(d, i);
              acc += m(a, j) * Gy(a, c, d) * phi(c, k) * ginv_y(d, i);
            }
        hat(i, k, j) = acc;
      }
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k)
      for (int j = 0; j < n; ++j) out.R1(i, k, j) = hat(i, k, j) - hat(i, j, k);
  return out;
}

// ---------------------------------------------------------------------------
// Constant curvature

std::string to_string(SpaceForm s) {
  switch (s) {
    case SpaceForm::kSpherical: return "spherical";
    case SpaceForm::kFlat: return "flat";
    case SpaceForm::kHyperbolic: return "hyperbolic";
    case SpaceForm::kNonConstant: return "non_constant";
  }
  return "?";
}

SpaceFormVerdict constant_curvature_fit(const GeometricObject& g, std::span<const Point> samples,
                                        const FitOptions& options) {
  if (samples.empty()) throw std::invalid_argument("constant_curvature_fit: empty sample list");
  if (samples.size() < 5) throw PreconditionError("constant_curvature_fit: at least 5 sample points are required");
  SpaceFormVerdict v;
  if (!g.riemannian()) {
    for (const auto& p : samples) v.residual = std::max(v.residual, max_abs(fraud_riemann(g, p)));
    v.form = v.residual <= options.tolerance ? SpaceForm::kFlat : SpaceForm::kNonConstant;
    return v;
  }
  const GeometricObject lc =
      g.is_levi_civita() ? g : GeometricObject::from_metric(g.metric(), std::nullopt, g.domain(), g.base_point());
  std::vector<Tensor4> R, B;
  double num = 0.0, den = 0.0;
  for (const auto& p : samples) {
    const LocalGeometry l = lc.at(p, 1);
    R.push_back(fraud_riemann(l));
    B.push_back(constant_curvature_shape(l.g));
    for (std::size_t q = 0; q < R.back().size(); ++q) {
      num += R.back().data()[q] * B.back().data()[q];
      den += B.back().data()[q] * B.back().data()[q];
    }
  }
  // n = 1 has no curvature at all
  const double c = den > 0.0 ? num / den : 0.0;
  for (std::size_t s = 0; s < R.size(); ++s)
    for (std::size_t q = 0; q < R[s].size(); ++q)
      v.residual = std::max(v.residual, std::abs(R[s].data()[q] - c * B[s].data()[q]));
  v.c = options.sign * c;
  if (v.residual > options.tolerance) v.form = SpaceForm::kNonConstant;
  else if (std::abs(v.c) <= 10.0 * options.tolerance) v.form = SpaceForm::kFlat;
  else v.form = v.c > 0.0 ? SpaceForm::kSpherical : SpaceForm::kHyperbolic;
  return v;
}

MCConstants mc_constants(const GeometricObject& g, const ExprMatrix& frame, std::span<const Point> samples,
                         const FitOptions& options) {
  const int n = g.dim();
  if (frame.dim() != n) throw std::invalid_argument("mc_constants: frame dimension mismatch");
  const SpaceFormVerdict fit = constant_curvature_fit(g, samples, options);
  if (fit.form == SpaceForm::kNonConstant)
    throw PreconditionError("mc_constants: curvature is not constant (fit residual " + std::to_string(fit.residual) +
                            ")");
  const Program frame_prog(std::vector<Expr>(frame.begin(), frame.end()));

  std::vector<Tensor4> c2s;
  std::vector<Tensor3> c1s;
  for (const auto& p : samples) {
    const LocalGeometry l = g.at(p, 1);
    const std::vector<double> fv = frame_prog.run(p);
    Matrix beta(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) beta(i, j) = fv[static_cast<std::size_t>(i * n + j)];
    if (g.riemannian() && max_abs(Matrix(beta.transpose() * beta - l.g)) > 1e-10 * (1.0 + max_abs(l.g)))
      throw std::invalid_argument("mc_constants: frame does not reproduce the metric");
    Eigen::FullPivLU<Matrix> lu(beta);
    if (!lu.isInvertible()) throw SingularMatrixError("mc_constants: singular frame");
    const Matrix bar = lu.inverse();
    const Tensor4 R = fraud_riemann(l);

    Tensor4 c2(n);
    for (int i = 0; i < n; ++i)
      for (int r = 0; r < n; ++r)
        for (int j = 0; j < n; ++j)
          for (int k = 0; k < n; ++k) {
            double acc = 0.0;
            for (int d = 0; d < n; ++d)
              for (int a = 0; a < n; ++a)
                for (int b = 0; b < n; ++b)
                  for (int c = 0; c < n; ++c) acc += R(d, a, b, c) * beta(i, d) * bar(a, r) * bar(b, j) * bar(c, k);
            c2(i, r, j, k) = acc;
          }
    c2s.push_back(std::move(c2));

    Tensor3 c1(n);
    if (g.riemannian()) {
      // u(a,b,c) = d_a g_bc + g_da G^d_bc
      Tensor3 u(n);
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
          for (int c = 0; c < n; ++c) {
            double acc = l.dg(b, c, a);
            for (int d = 0; d < n; ++d) acc += l.g(d, a) * l.gamma(d, b, c);
            u(a, b, c) = acc;
          }
      Tensor3 raw(n);
      for (int r = 0; r < n; ++r)
        for (int j = 0; j < n; ++j)
          for (int k = 0; k < n; ++k) {
            double acc = 0.0;
            for (int a = 0; a < n; ++a)
              for (int b = 0; b < n; ++b)
                for (int c = 0; c < n; ++c) acc += bar(a, r) * bar(b, k) * bar(c, j) * u(a, b, c);
            raw(r, j, k) = acc;
          }
      for (int r = 0; r < n; ++r)
        for (int j = 0; j < n; ++j)
          for (int k = 0; k < n; ++k) c1(r, j, k) = raw(r, j, k) - raw(j, r, k);
    }
    c1s.push_back(std::move(c1));
  }

  MCConstants out{Tensor4(n), Tensor3(n), 0.0};
  auto reduce = [&](auto& mean, const auto& all) {
    for (std::size_t q = 0; q < mean.size(); ++q) {
      double lo = std::numeric_limits<double>::infinity(), hi = -lo, sum = 0.0;
      for (const auto& t : all) {
        const double v = t.data()[q];
        lo = std::min(lo, v);
        hi = std::max(hi, v);
        sum += v;
      }
      mean.data()[q] = sum / static_cast<double>(all.size());
      out.defect = std::max(out.defect, hi - lo);
    }
  };
  reduce(out.c2, c2s);
  reduce(out.c1, c1s);
  return out;
}

}  // namespace jetgeo
