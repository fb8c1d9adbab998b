#include "jetgeo/geom_object.hpp"

#include <cmath>
#include <random>

#include "jetgeo/symbolic.hpp"

namespace jetgeo {

// ---------------------------------------------------------------------------
// Box

Box::Box(std::vector<double> lower, std::vector<double> upper) : lo(std::move(lower)), hi(std::move(upper)) {
  if (lo.size() != hi.size() || lo.empty()) throw std::invalid_argument("Box: bounds must have equal nonzero length");
  for (std::size_t i = 0; i < lo.size(); ++i)
    if (!(lo[i] < hi[i])) throw std::invalid_argument("Box: degenerate interval on axis " + std::to_string(i + 1));
}

Box Box::cube(int n, double l, double h) {
  return Box(std::vector<double>(static_cast<std::size_t>(n), l), std::vector<double>(static_cast<std::size_t>(n), h));
}

bool Box::contains(std::span<const double> x) const {
  if (x.size() != lo.size()) return false;
  for (std::size_t i = 0; i < lo.size(); ++i)
    if (!(x[i] >= lo[i] && x[i] <= hi[i])) return false;
  return true;
}

Point Box::center() const {
  Point c(lo.size());
  for (std::size_t i = 0; i < lo.size(); ++i) c[i] = 0.5 * (lo[i] + hi[i]);
  return c;
}

Box Box::shrunk(double factor) const {
  Box b = *this;
  for (std::size_t i = 0; i < lo.size(); ++i) {
    const double mid = 0.5 * (lo[i] + hi[i]);
    const double half = 0.5 * (hi[i] - lo[i]) * factor;
    b.lo[i] = mid - half;
    b.hi[i] = mid + half;
  }
  return b;
}

std::vector<Point> Box::random_points(int count, std::uint64_t seed) const {
  std::mt19937_64 rng(seed);
  std::vector<Point> pts;
  pts.reserve(static_cast<std::size_t>(count));
  for (int c = 0; c < count; ++c) {
    Point p(lo.size());
    for (std::size_t i = 0; i < lo.size(); ++i) p[i] = std::uniform_real_distribution<double>(lo[i], hi[i])(rng);
    pts.push_back(std::move(p));
  }
  return pts;
}

std::vector<Point> Box::grid_points(int m) const {
  const int n = dim();
  std::size_t total = 1;
  for (int i = 0; i < n; ++i) total *= static_cast<std::size_t>(m);
  std::vector<Point> pts;
  pts.reserve(total);
  for (std::size_t idx = 0; idx < total; ++idx) {
    Point p(static_cast<std::size_t>(n));
    std::size_t rest = idx;
    for (int i = 0; i < n; ++i) {
      const auto cell = static_cast<double>(rest % static_cast<std::size_t>(m));
      rest /= static_cast<std::size_t>(m);
      p[i] = lo[i] + (cell + 0.5) / m * (hi[i] - lo[i]);
    }
    pts.push_back(std::move(p));
  }
  return pts;
}

// ---------------------------------------------------------------------------
// GeometricObject

namespace {

constexpr std::uint64_t kValidationSeed = 0x5eed0001;
constexpr int kValidationGrid = 5;
constexpr int kValidationRandom = 100;

std::vector<Point> validation_points(const Box& box) {
  auto pts = box.grid_points(kValidationGrid);
  auto extra = box.random_points(kValidationRandom, kValidationSeed);
  pts.insert(pts.end(), extra.begin(), extra.end());
  return pts;
}

std::string format_point(std::span<const double> x) {
  std::string s = "(";
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (i) s += ", ";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", x[i]);
    s += buf;
  }
  return s + ")";
}

void check_square(const ExprMatrix& m, int n, const char* what) {
  if (m.dim() != n) throw std::invalid_argument(std::string(what) + ": dimension mismatch");
}

}  // namespace

GeometricObject GeometricObject::from_metric(const ExprMatrix& g, const std::optional<ExprTensor3>& connection,
                                             Box domain, Point base_point) {
  GeometricObject obj;
  obj.n_ = g.dim();
  obj.kind_ = StructureKind::kRiemannian;
  obj.g_ = g;
  if (connection) {
    if (connection->dim() != obj.n_) throw std::invalid_argument("from_metric: connection dimension mismatch");
    obj.gamma_ = *connection;
  } else {
    Differentiator d;
    obj.gamma_ = christoffel(g, inverse(g), d);
    obj.levi_civita_ = true;
  }
  obj.domain_ = std::move(domain);
  obj.base_ = std::move(base_point);
  obj.compile();
  obj.validate();
  return obj;
}

GeometricObject GeometricObject::from_section(const ExprMatrix& s1, const ExprTensor3& s2, Box domain,
                                              Point base_point) {
  const int n = s1.dim();
  if (s2.dim() != n) throw std::invalid_argument("from_section: block dimension mismatch");
  {
    const Expr det = determinant(s1);
    for (const auto& p : validation_points(domain)) {
      double v = 0.0;
      try {
        v = eval(det, p);
      } catch (const DomainError& e) {
        throw SamplePointError(std::string("from_section: frame undefined at ") + format_point(p), p);
      }
      if (std::abs(v) < 1e-12) throw SamplePointError("from_section: singular frame at " + format_point(p), p);
    }
  }
  const ExprMatrix inv = inverse(s1);
  ExprTensor3 g2(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        Expr acc(0.0);
        for (int s = 0; s < n; ++s) acc += inv(i, s) * s2(s, j, k);
        g2(i, j, k) = acc;
      }
  return from_metric(multiply(transpose(s1), s1), symmetrize_lower(g2), std::move(domain), std::move(base_point));
}

GeometricObject GeometricObject::affine(const ExprTensor3& connection, Box domain, Point base_point) {
  GeometricObject obj;
  obj.n_ = connection.dim();
  obj.kind_ = StructureKind::kAffine;
  obj.gamma_ = connection;
  obj.domain_ = std::move(domain);
  obj.base_ = std::move(base_point);
  obj.compile();
  obj.validate();
  return obj;
}

void GeometricObject::compile() {
  const int n = n_;
  if (domain_.dim() != n) throw std::invalid_argument("GeometricObject: domain dimension mismatch");
  if (static_cast<int>(base_.size()) != n) throw std::invalid_argument("GeometricObject: base point dimension mismatch");
  if (!domain_.contains(base_)) throw std::invalid_argument("GeometricObject: base point outside the domain");
  const bool metric = riemannian();
  if (metric) check_square(g_, n, "GeometricObject: metric");

  Differentiator d;
  std::vector<Expr> order0, order1, order2;
  if (metric)
    for (const auto& e : g_) order0.push_back(e);
  for (const auto& e : gamma_) order0.push_back(e);
  if (metric)
    for (const auto& e : g_)
      for (int a = 0; a < n; ++a) order1.push_back(d(e, a));
  for (const auto& e : gamma_)
    for (int a = 0; a < n; ++a) order1.push_back(d(e, a));
  if (metric)
    for (const auto& e : g_)
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) order2.push_back(d(d(e, a), b));
  for (const auto& e : gamma_)
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) order2.push_back(d(d(e, a), b));

  auto progs = std::make_shared<std::array<Program, 3>>();
  std::vector<Expr> all = order0;
  (*progs)[0] = Program(all);
  all.insert(all.end(), order1.begin(), order1.end());
  (*progs)[1] = Program(all);
  all.insert(all.end(), order2.begin(), order2.end());
  (*progs)[2] = Program(all);
  programs_ = std::move(progs);
}

LocalGeometry GeometricObject::at(std::span<const double> x, int order) const {
  if (order < 0 || order > 2) throw std::invalid_argument("GeometricObject::at: order must be 0, 1 or 2");
  if (static_cast<int>(x.size()) != n_) throw std::invalid_argument("GeometricObject::at: point dimension mismatch");
  const std::vector<double> v = (*programs_)[order].run(x);
  const int n = n_;
  const bool metric = riemannian();
  LocalGeometry out;
  out.n = n;
  std::size_t pos = 0;
  auto next = [&]() { return v[pos++]; };
  if (metric) {
    out.g.resize(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) out.g(i, j) = next();
  }
  out.gamma = Tensor3(n);
  for (double& e : out.gamma) e = next();
  if (order >= 1) {
    if (metric) {
      out.dg = Tensor3(n);
      for (double& e : out.dg) e = next();
    }
    out.dgamma = Tensor4(n);
    for (double& e : out.dgamma) e = next();
  }
  if (order >= 2) {
    if (metric) {
      out.ddg = Tensor4(n);
      for (double& e : out.ddg) e = next();
    }
    out.ddgamma = Tensor5(n);
    for (double& e : out.ddgamma) e = next();
  }
  return out;
}

Matrix GeometricObject::metric_at(std::span<const double> x) const {
  if (!riemannian()) return Matrix();
  return at(x, 0).g;
}

Tensor3 GeometricObject::connection_at(std::span<const double> x) const { return at(x, 0).gamma; }

void GeometricObject::validate() const {
  const int n = n_;
  for (const auto& p : validation_points(domain_)) {
    LocalGeometry l;
    try {
      l = at(p, 0);
    } catch (const DomainError& e) {
      throw SamplePointError(std::string("geometric object undefined at ") + format_point(p) + ": " + e.what(), p);
    }
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = j + 1; k < n; ++k)
          if (std::abs(l.gamma(i, j, k) - l.gamma(i, k, j)) > 1e-12 * (1.0 + std::abs(l.gamma(i, j, k))))
            throw SamplePointError("connection not symmetric in its lower indices at " + format_point(p), p);
    if (!riemannian()) continue;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        if (std::abs(l.g(i, j) - l.g(j, i)) > 1e-12 * (1.0 + std::abs(l.g(i, j))))
          throw SamplePointError("metric not symmetric at " + format_point(p), p);
    Eigen::LLT<Matrix> llt(l.g);
    if (llt.info() != Eigen::Success)
      throw SamplePointError("metric not positive-definite at " + format_point(p), p);
  }
}

// ---------------------------------------------------------------------------
// Chart changes

GeometricObject transform_chart(const GeometricObject& g, const ExprVector& x_of_y, Box new_domain,
                                Point new_base_point) {
  const int n = g.dim();
  if (x_of_y.dim() != n) throw std::invalid_argument("transform_chart: chart dimension mismatch");
  std::vector<Expr> subs(x_of_y.begin(), x_of_y.end());

  Differentiator d;
  Grid<Expr, 2> J(n);
  Grid<Expr, 3> H(n);
  for (int a = 0; a < n; ++a)
    for (int i = 0; i < n; ++i) {
      J(a, i) = d(x_of_y(a), i);
      for (int j = 0; j < n; ++j) H(a, i, j) = d(J(a, i), j);
    }

  // The chart image must stay in the old domain and the Jacobian must be invertible.
  {
    std::vector<Expr> check = subs;
    check.push_back(determinant(J));
    const Program prog(check);
    for (const auto& p : validation_points(new_domain)) {
      std::vector<double> v;
      try {
        v = prog.run(p);
      } catch (const DomainError&) {
        throw SamplePointError("transform_chart: chart undefined at " + format_point(p), p);
      }
      const double det = v.back();
      v.pop_back();
      if (std::abs(det) < 1e-12) throw SamplePointError("transform_chart: singular Jacobian at " + format_point(p), p);
      if (!g.domain().contains(v))
        throw SamplePointError("transform_chart: chart image leaves the domain at " + format_point(p), p);
    }
  }

  const ExprMatrix Jinv = inverse(J);
  ExprTensor3 gamma(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) gamma(i, j, k) = substitute(g.connection()(i, j, k), subs);
  const ExprTensor3 new_gamma = transport_second(gamma, J, Jinv, H);
  if (!g.riemannian()) return GeometricObject::affine(new_gamma, std::move(new_domain), std::move(new_base_point));

  ExprMatrix metric(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) metric(i, j) = substitute(g.metric()(i, j), subs);
  return GeometricObject::from_metric(transport_first(metric, J), new_gamma, std::move(new_domain),
                                      std::move(new_base_point));
}

ExprVector quadratic_chart(std::span<const double> p, const Jet2Element& h) {
  const int n = h.dim();
  ExprVector x(n);
  for (int a = 0; a < n; ++a) {
    Expr acc(p[a]);
    for (int i = 0; i < n; ++i) acc += Expr(h.a1(a, i)) * Expr::variable(i);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) acc += Expr(0.5 * h.a2(a, i, j)) * Expr::variable(i) * Expr::variable(j);
    x(a) = acc;
  }
  return x;
}

namespace {

Matrix frame_first(const GeometricObject& g, const LocalGeometry& l, std::span<const double> x) {
  if (!g.riemannian()) return Matrix::Identity(g.dim(), g.dim());
  Eigen::LLT<Matrix> llt(l.g);
  if (llt.info() != Eigen::Success)
    throw SamplePointError("metric not positive-definite at " + format_point(x), Point(x.begin(), x.end()));
  return llt.matrixU();  // U^T U = L L^T = g
}

}  // namespace

Jet2Element regular_normalization(const GeometricObject& g, std::span<const double> p) {
  if (!g.domain().contains(p)) throw std::invalid_argument("regular_normalization: point outside the domain");
  const int n = g.dim();
  const LocalGeometry l = g.at(p, 0);
  const Matrix h1 = frame_first(g, l, p).inverse();  // (L^T)^-1
  Tensor3 h2(n);
  for (int a = 0; a < n; ++a)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        double acc = 0.0;
        for (int b = 0; b < n; ++b)
          for (int c = 0; c < n; ++c) acc += l.gamma(a, b, c) * h1(b, j) * h1(c, k);
        h2(a, j, k) = -acc;
      }
  return {h1, std::move(h2)};
}

Jet2Element frame_jet(const GeometricObject& g, std::span<const double> x) {
  const int n = g.dim();
  const LocalGeometry l = g.at(x, 0);
  const Matrix b1 = frame_first(g, l, x);
  Tensor3 b2(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        double acc = 0.0;
        for (int s = 0; s < n; ++s) acc += b1(i, s) * l.gamma(s, j, k);
        b2(i, j, k) = acc;
      }
  return {b1, std::move(b2)};
}

Arrow2 frame_arrow(const GeometricObject& g, std::span<const double> x, std::span<const double> y) {
  const Jet2Element phi = compose2(inverse2(frame_jet(g, y)), frame_jet(g, x));
  return {Point(x.begin(), x.end()), Point(y.begin(), y.end()), phi.a1, phi.a2};
}

Tensor3 complete_arrow(const GeometricObject& g, std::span<const double> x, std::span<const double> y,
                       const Matrix& phi1) {
  const int n = g.dim();
  const Tensor3 gx = g.connection_at(x);
  const Tensor3 gy = g.connection_at(y);
  Tensor3 phi2(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        double acc = 0.0;
        for (int a = 0; a < n; ++a) acc += phi1(i, a) * gx(a, j, k);
        for (int b = 0; b < n; ++b)
          for (int c = 0; c < n; ++c) acc -= gy(i, b, c) * phi1(b, j) * phi1(c, k);
        phi2(i, j, k) = acc;
      }
  return phi2;
}

MembershipResidual arrow_membership(const GeometricObject& g, const Arrow2& arrow) {
  const LocalGeometry lx = g.at(arrow.x, 0);
  const LocalGeometry ly = g.at(arrow.y, 0);
  const Matrix& phi = arrow.phi1;
  MembershipResidual r;
  if (g.riemannian()) r.first = max_abs(Matrix(lx.g - phi.transpose() * ly.g * phi));
  const Tensor3 want = complete_arrow(g, arrow.x, arrow.y, phi);
  r.second = max_abs_diff(want, arrow.phi2);
  return r;
}

}  // namespace jetgeo
