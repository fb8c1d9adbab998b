#include "jetgeo/integrator.hpp"

#include <cmath>
#include <numbers>

namespace jetgeo {

// ---------------------------------------------------------------------------
// Paths

Point PathSpec::Segment::position(double t) const {
  if (kind == Kind::kLine) {
    Point p(from.size());
    for (std::size_t i = 0; i < p.size(); ++i) p[i] = from[i] + t * (to[i] - from[i]);
    return p;
  }
  const double th = angle0 + t * (angle1 - angle0);
  Point p = center;
  p[static_cast<std::size_t>(axis0)] += radius * std::cos(th);
  p[static_cast<std::size_t>(axis1)] += radius * std::sin(th);
  return p;
}

Point PathSpec::Segment::velocity(double t) const {
  if (kind == Kind::kLine) {
    Point v(from.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = to[i] - from[i];
    return v;
  }
  const double w = angle1 - angle0;
  const double th = angle0 + t * w;
  Point v(center.size(), 0.0);
  v[static_cast<std::size_t>(axis0)] = -radius * w * std::sin(th);
  v[static_cast<std::size_t>(axis1)] = radius * w * std::cos(th);
  return v;
}

double PathSpec::Segment::length() const {
  if (kind == Kind::kArc) return std::abs(radius * (angle1 - angle0));
  double s = 0.0;
  for (std::size_t i = 0; i < from.size(); ++i) s += (to[i] - from[i]) * (to[i] - from[i]);
  return std::sqrt(s);
}

PathSpec PathSpec::polyline(const std::vector<Point>& points, double step) {
  if (points.size() < 2) throw std::invalid_argument("PathSpec::polyline: need at least two points");
  if (!(step > 0.0)) throw std::invalid_argument("PathSpec: step must be positive");
  PathSpec path;
  path.step = step;
  for (std::size_t s = 0; s + 1 < points.size(); ++s) {
    Segment seg;
    seg.from = points[s];
    seg.to = points[s + 1];
    path.segments.push_back(std::move(seg));
  }
  return path;
}

PathSpec PathSpec::arc(const Point& center, double radius, double angle0, double angle1, double step, int axis0,
                       int axis1) {
  if (!(step > 0.0)) throw std::invalid_argument("PathSpec: step must be positive");
  if (axis0 == axis1 || axis0 < 0 || axis1 < 0 || std::max(axis0, axis1) >= static_cast<int>(center.size()))
    throw std::invalid_argument("PathSpec::arc: bad axes");
  PathSpec path;
  path.step = step;
  Segment seg;
  seg.kind = Segment::Kind::kArc;
  seg.center = center;
  seg.radius = radius;
  seg.angle0 = angle0;
  seg.angle1 = angle1;
  seg.axis0 = axis0;
  seg.axis1 = axis1;
  path.segments.push_back(std::move(seg));
  return path;
}

PathSpec PathSpec::loop_circle(const Point& start, double radius, double step, int axis0, int axis1) {
  Point center = start;
  center[static_cast<std::size_t>(axis0)] -= radius;
  return arc(center, radius, 0.0, 2.0 * std::numbers::pi, step, axis0, axis1);
}

PathSpec PathSpec::loop_square(const Point& start, double side, double step, int axis0, int axis1) {
  std::vector<Point> pts(5, start);
  pts[1][static_cast<std::size_t>(axis0)] += side;
  pts[2][static_cast<std::size_t>(axis0)] += side;
  pts[2][static_cast<std::size_t>(axis1)] += side;
  pts[3][static_cast<std::size_t>(axis1)] += side;
  return polyline(pts, step);
}

Point PathSpec::start() const { return segments.front().position(0.0); }
Point PathSpec::end() const { return segments.back().position(1.0); }

// ---------------------------------------------------------------------------
// Transport

namespace {

double first_equation_residual(const LocalGeometry& l, const JetVector& X) {
  const int n = l.n;
  double m = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      double acc = 0.0;
      for (int a = 0; a < n; ++a) acc += X.X0(a) * l.dg(i, j, a) + l.g(a, i) * X.X1(a, j) + l.g(a, j) * X.X1(a, i);
      m = std::max(m, std::abs(acc));
    }
  return m;
}

// d/dt (X0, X1) along velocity v.
JetVector killing_rhs(const LocalGeometry& l, const JetVector& X, const Point& v) {
  const int n = l.n;
  JetVector d = JetVector::zero(n, 1);
  for (int i = 0; i < n; ++i) {
    double acc = 0.0;
    for (int k = 0; k < n; ++k) acc += X.X1(i, k) * v[k];
    d.X0(i) = acc;
  }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double acc = 0.0;
      for (int k = 0; k < n; ++k) {
        if (v[k] == 0.0) continue;
        double f = 0.0;
        for (int a = 0; a < n; ++a) {
          f += -l.gamma(i, a, k) * X.X1(a, j) - l.gamma(i, a, j) * X.X1(a, k) + l.gamma(a, j, k) * X.X1(i, a);
          f -= X.X0(a) * l.dgamma(i, j, k, a);
        }
        acc += f * v[k];
      }
      d.X1(i, j) = acc;
    }
  return d;
}

LocalGeometry geometry_on_path(const GeometricObject& g, const Point& x) {
  if (!g.domain().contains(x)) throw DomainExitError("path leaves the chart domain");
  return g.at(x, 1);
}

}  // namespace

IntegrationResult integrate_killing(const GeometricObject& g, std::span<const JetVector> init, const PathSpec& path) {
  if (path.segments.empty()) throw std::invalid_argument("integrate_killing: empty path");
  if (!(path.step > 0.0)) throw std::invalid_argument("integrate_killing: step must be positive");
  const int n = g.dim();
  IntegrationResult out;
  out.end.reserve(init.size());
  for (const auto& x : init) {
    if (x.order < 1 || x.dim() != n) throw std::invalid_argument("integrate_killing: needs order-1 jets");
    out.end.push_back(x.truncated(1));
  }
  const bool metric = g.riemannian();
  {
    const LocalGeometry l = geometry_on_path(g, path.start());
    if (metric)
      for (const auto& x : out.end) {
        const double r = first_equation_residual(l, x);
        if (r > 1e-8 * (1.0 + max_abs(x)))
          throw PreconditionError("integrate_killing: initial jet violates the first equation (residual " +
                                  std::to_string(r) + ")");
      }
  }
  std::vector<JetVector> k1, k2, k3, k4, tmp;
  for (const auto& seg : path.segments) {
    const long steps = std::max<long>(1, static_cast<long>(std::ceil(seg.length() / path.step - 1e-9)));
    const double h = 1.0 / static_cast<double>(steps);
    for (long s = 0; s < steps; ++s) {
      const double t = static_cast<double>(s) * h;
      const Point x0 = seg.position(t), xm = seg.position(t + 0.5 * h), x1 = seg.position(t + h);
      const Point v0 = seg.velocity(t), vm = seg.velocity(t + 0.5 * h), v1 = seg.velocity(t + h);
      const LocalGeometry l0 = geometry_on_path(g, x0);
      const LocalGeometry lm = geometry_on_path(g, xm);
      const LocalGeometry l1 = geometry_on_path(g, x1);
      for (auto& X : out.end) {
        const JetVector a = killing_rhs(l0, X, v0);
        const JetVector b = killing_rhs(lm, X + (0.5 * h) * a, vm);
        const JetVector c = killing_rhs(lm, X + (0.5 * h) * b, vm);
        const JetVector d = killing_rhs(l1, X + h * c, v1);
        X += (h / 6.0) * (a + 2.0 * b + 2.0 * c + d);
        if (metric) out.max_constraint = std::max(out.max_constraint, first_equation_residual(l1, X));
      }
      ++out.steps;
      if (out.max_constraint > kConstraintDriftLimit)
        throw ConstraintDriftError("integrate_killing: constraint drift beyond the limit", out.max_constraint);
    }
  }
  return out;
}

JetVector integrate_killing(const GeometricObject& g, const JetVector& init, const PathSpec& path) {
  return integrate_killing(g, std::span<const JetVector>(&init, 1), path).end.front();
}

double monodromy_defect(const GeometricObject& g, std::span<const double> p, std::span<const PathSpec> loops) {
  std::vector<JetVector> basis;
  for (const auto& b : fiber_basis(g, p)) basis.push_back(b.truncated(1));
  double defect = 0.0;
  for (const auto& loop : loops) {
    const Point s = loop.start(), e = loop.end();
    for (std::size_t i = 0; i < p.size(); ++i)
      if (std::abs(s[i] - p[i]) > 1e-12 || std::abs(e[i] - p[i]) > 1e-12)
        throw std::invalid_argument("monodromy_defect: loop not based at p");
    const IntegrationResult r = integrate_killing(g, basis, loop);
    for (std::size_t k = 0; k < basis.size(); ++k) defect = std::max(defect, max_abs_diff(r.end[k], basis[k]));
  }
  return defect;
}

// ---------------------------------------------------------------------------
// Killing algebra

double jacobi_residual(const Grid<double, 3>& f) {
  const int d = f.dim();
  double worst = 0.0;
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b)
      for (int c = 0; c < d; ++c)
        for (int e = 0; e < d; ++e) {
          double acc = 0.0;
          for (int m = 0; m < d; ++m) acc += f(m, a, b) * f(e, m, c) + f(m, b, c) * f(e, m, a) + f(m, c, a) * f(e, m, b);
          worst = std::max(worst, std::abs(acc));
        }
  return worst;
}

std::array<int, 3> signature(const Matrix& symmetric, double rel_tol) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(symmetric);
  const Vector ev = es.eigenvalues();
  const double scale = ev.size() ? ev.cwiseAbs().maxCoeff() : 0.0;
  std::array<int, 3> s{0, 0, 0};
  for (int i = 0; i < ev.size(); ++i) {
    if (std::abs(ev(i)) <= rel_tol * scale || scale == 0.0) ++s[1];
    else if (ev(i) > 0) ++s[0];
    else ++s[2];
  }
  return s;
}

KillingBasis killing_algebra(const GeometricObject& g, std::span<const double> p, const FitOptions& options) {
  const auto samples = g.domain().shrunk(0.9).random_points(20, 0x4b11);
  const SpaceFormVerdict fit = constant_curvature_fit(g, samples, options);
  if (fit.form == SpaceForm::kNonConstant)
    throw PreconditionError("killing_algebra: curvature is not constant (fit residual " + std::to_string(fit.residual) +
                            ")");
  KillingBasis kb;
  kb.p.assign(p.begin(), p.end());
  const std::vector<JetVector> fiber = fiber_basis(g, p);
  const int d = static_cast<int>(fiber.size());
  std::vector<Vector> coeff;
  for (const auto& b : fiber) {
    kb.basis.push_back(b.truncated(1));
    coeff.push_back(order1_coefficients(b));
  }
  kb.structure = Grid<double, 3>(d);
  for (int a = 0; a < d; ++a)
    for (int b = a + 1; b < d; ++b) {
      const JetVector br = algebraic_bracket_point(fiber[a], fiber[b], g, p);
      const Vector z = order1_coefficients(br);
      Vector rest = z;
      for (int c = 0; c < d; ++c) {
        const double f = coeff[c].dot(z);
        kb.structure(c, a, b) = f;
        kb.structure(c, b, a) = -f;
        rest -= f * coeff[c];
      }
      kb.closure_residual = std::max(kb.closure_residual, max_abs(rest));
    }
  kb.killing_form = Matrix::Zero(d, d);
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b) {
      double acc = 0.0;
      for (int c = 0; c < d; ++c)
        for (int e = 0; e < d; ++e) acc += kb.structure(e, a, c) * kb.structure(c, b, e);
      kb.killing_form(a, b) = acc;
    }
  kb.signature = signature(kb.killing_form);
  kb.jacobi_residual = jacobi_residual(kb.structure);
  return kb;
}

// ---------------------------------------------------------------------------
// Flow check

double killing_verify(const GeometricObject& g, const ExprVector& X, double t, int samples, double fd_step) {
  if (!g.riemannian()) throw std::invalid_argument("killing_verify: needs a metric");
  const int n = g.dim();
  if (X.dim() != n) throw std::invalid_argument("killing_verify: field dimension mismatch");
  const Program field(std::vector<Expr>(X.begin(), X.end()));
  const long steps = std::max<long>(1, static_cast<long>(std::ceil(std::abs(t) / 1e-3)));
  const double h = t / static_cast<double>(steps);
  auto flow = [&](Point x) {
    auto f = [&](const Point& y) {
      if (!g.domain().contains(y)) throw DomainExitError("killing_verify: flow leaves the chart domain");
      return field.run(y);
    };
    auto axpy = [&](const Point& y, const std::vector<double>& k, double s) {
      Point z = y;
      for (int i = 0; i < n; ++i) z[i] += s * k[i];
      return z;
    };
    for (long s = 0; s < steps; ++s) {
      const auto k1 = f(x);
      const auto k2 = f(axpy(x, k1, 0.5 * h));
      const auto k3 = f(axpy(x, k2, 0.5 * h));
      const auto k4 = f(axpy(x, k3, h));
      for (int i = 0; i < n; ++i) x[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
    if (!g.domain().contains(x)) throw DomainExitError("killing_verify: flow leaves the chart domain");
    return x;
  };
  const Box inner = g.domain().shrunk(0.5);
  std::vector<Point> pts{inner.center()};
  const auto extra = inner.random_points(samples, 0x7e57);
  pts.insert(pts.end(), extra.begin(), extra.end());
  double worst = 0.0;
  for (const auto& x : pts) {
    Matrix J(n, n);
    for (int i = 0; i < n; ++i) {
      Point xp = x, xm = x;
      xp[i] += fd_step;
      xm[i] -= fd_step;
      const Point fp = flow(xp), fm = flow(xm);
      for (int a = 0; a < n; ++a) J(a, i) = (fp[a] - fm[a]) / (2.0 * fd_step);
    }
    const Matrix pulled = J.transpose() * g.metric_at(flow(x)) * J;
    worst = std::max(worst, max_abs(Matrix(pulled - g.metric_at(x))));
  }
  return worst;
}

}  // namespace jetgeo
