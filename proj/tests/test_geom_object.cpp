#include <cmath>
#include <complex>

#include <gtest/gtest.h>

#include "jetgeo/catalog.hpp"
#include "jetgeo/errors.hpp"
#include "jetgeo/geom_object.hpp"
#include "jetgeo/symbolic.hpp"
#include "oracles.hpp"

using namespace jetgeo;

namespace {

ExprMatrix metric(int n, std::initializer_list<const char*> rows) {
  ExprMatrix g(n);
  auto it = rows.begin();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) g(i, j) = parse_expr(*it++, n);
  return g;
}

GeometricObject object(const ExprMatrix& g, Box box) {
  Point base = box.center();
  return GeometricObject::from_metric(g, std::nullopt, std::move(box), std::move(base));
}

oracle::MetricFn numeric(const GeometricObject& g) {
  return [&g](const oracle::Vec& x) { return Matrix(g.metric_at(x)); };
}

// A metric with nonzero off-diagonal terms and no symmetry.
GeometricObject skewed() {
  return object(metric(2, {"2 + x1^2", "0.3*sin(x1*x2)", "0.3*sin(x1*x2)", "1 + exp(x2)/2"}), Box::cube(2, -1, 1));
}

GeometricObject skewed3() {
  return object(metric(3, {"2 + x1^2", "0.2*x2", "0", "0.2*x2", "1.5 + cos(x3)", "0.1*x1*x3", "0", "0.1*x1*x3",
                           "1 + x2^2/4"}),
                Box::cube(3, -1, 1));
}

}  // namespace

TEST(FromMetric, EuclideanHasZeroConnection) {
  const auto e = catalog_metric("euclidean", 2);
  for (const auto& p : e.object.domain().random_points(5, 1)) EXPECT_EQ(max_abs(e.object.connection_at(p)), 0.0);
  EXPECT_TRUE(e.object.is_levi_civita());
}

TEST(FromMetric, SphereMatchesConformalClosedForm) {
  const auto e = catalog_metric("sphere", 2);
  EXPECT_EQ(max_abs(e.object.connection_at(Point{0.0, 0.0})), 0.0);
  for (const auto& p : e.object.domain().random_points(10, 2)) {
    const Tensor3 G = e.object.connection_at(p);
    const auto want = oracle::conformal_christoffel(p, 1.0);
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j)
        for (int k = 0; k < 2; ++k) EXPECT_NEAR(G(i, j, k), want[i](j, k), 1e-13);
  }
}

TEST(FromMetric, PolarChristoffels) {
  const auto e = catalog_metric("polar_flat", 2);
  for (const auto& p : e.object.domain().random_points(5, 3)) {
    const Tensor3 G = e.object.connection_at(p);
    EXPECT_NEAR(G(0, 1, 1), -p[0], 1e-15);
    EXPECT_NEAR(G(1, 0, 1), 1.0 / p[0], 1e-15);
    EXPECT_NEAR(G(1, 1, 0), 1.0 / p[0], 1e-15);
    EXPECT_EQ(G(0, 0, 0), 0.0);
  }
}

TEST(FromMetric, ChristoffelsMatchFiniteDifferences) {
  for (const GeometricObject& g : {skewed(), skewed3()})
    for (const auto& p : g.domain().shrunk(0.8).random_points(5, 4)) {
      const Tensor3 G = g.connection_at(p);
      const auto want = oracle::christoffel(numeric(g), p);
      const int n = g.dim();
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          for (int k = 0; k < n; ++k) EXPECT_NEAR(G(i, j, k), want[i](j, k), 1e-9);
    }
}

TEST(FromMetric, DerivativeBlocksMatchFiniteDifferences) {
  const GeometricObject g = skewed();
  const Point p{0.3, -0.2};
  const LocalGeometry l = g.at(p, 2);
  auto gamma_flat = [&](const oracle::Vec& y) {
    const Tensor3 G = g.connection_at(y);
    return Eigen::VectorXd(Eigen::Map<const Eigen::VectorXd>(G.data(), static_cast<Eigen::Index>(G.size())));
  };
  for (int a = 0; a < 2; ++a) {
    const Eigen::VectorXd d = oracle::central(gamma_flat, p, a, 1e-3);
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j)
        for (int k = 0; k < 2; ++k) EXPECT_NEAR(l.dgamma(i, j, k, a), d((i * 2 + j) * 2 + k), 1e-9);
    const Eigen::MatrixXd dg = oracle::central([&](const oracle::Vec& y) { return Matrix(g.metric_at(y)); }, p, a, 1e-3);
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) EXPECT_NEAR(l.dg(i, j, a), dg(i, j), 1e-10);
  }
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) {
      auto dgamma_a = [&](const oracle::Vec& y) {
        const LocalGeometry ly = g.at(y, 1);
        Eigen::VectorXd v(8);
        for (int i = 0; i < 2; ++i)
          for (int j = 0; j < 2; ++j)
            for (int k = 0; k < 2; ++k) v((i * 2 + j) * 2 + k) = ly.dgamma(i, j, k, a);
        return v;
      };
      const Eigen::VectorXd d = oracle::central(dgamma_a, p, b, 1e-3);
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
          for (int k = 0; k < 2; ++k) EXPECT_NEAR(l.ddgamma(i, j, k, a, b), d((i * 2 + j) * 2 + k), 1e-8);
    }
}

TEST(FromMetric, RejectsNonSymmetric) {
  EXPECT_THROW(object(metric(2, {"1", "x1", "0", "1"}), Box::cube(2, -0.5, 0.5)), SamplePointError);
}

TEST(FromMetric, ReportsIndefinitePoint) {
  try {
    object(metric(2, {"1", "0", "0", "x1"}), Box::cube(2, -1, 1));
    FAIL();
  } catch (const SamplePointError& e) {
    ASSERT_EQ(e.point().size(), 2u);
    EXPECT_LE(e.point()[0], 0.0);
  }
}

TEST(FromMetric, RejectsBaseOutsideDomain) {
  EXPECT_THROW(GeometricObject::from_metric(metric(2, {"1", "0", "0", "1"}), std::nullopt, Box::cube(2, -1, 1),
                                            Point{2.0, 0.0}),
               std::invalid_argument);
}

TEST(FromSection, IdentityFrameIsEuclidean) {
  const Box box = Box::cube(2, -1, 1);
  const auto g = GeometricObject::from_section(constant_matrix(Matrix::Identity(2, 2)), ExprTensor3(2, Expr(0.0)), box,
                                               box.center());
  const Point p{0.4, -0.3};
  EXPECT_EQ(max_abs_diff(g.metric_at(p), Matrix(Matrix::Identity(2, 2))), 0.0);
  EXPECT_EQ(max_abs(g.connection_at(p)), 0.0);
}

TEST(FromSection, CholeskySectionReproducesMetric) {
  for (const GeometricObject& ref : {catalog_metric("sphere", 2).object, skewed()}) {
    const int n = ref.dim();
    const ExprMatrix s1 = cholesky_frame(ref.metric());
    ExprTensor3 s2(n, Expr(0.0));
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k)
          for (int a = 0; a < n; ++a) s2(i, j, k) += s1(i, a) * ref.connection()(a, j, k);
    const auto g = GeometricObject::from_section(s1, s2, ref.domain(), ref.base_point());
    // Left factor by a constant rotation changes the section but not the object.
    const double c = std::cos(0.7), s = std::sin(0.7);
    Matrix h(2, 2);
    h << c, -s, s, c;
    const ExprMatrix hs1 = multiply(constant_matrix(h), s1);
    ExprTensor3 hs2(n, Expr(0.0));
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k)
          for (int a = 0; a < n; ++a) hs2(i, j, k) += Expr(h(i, a)) * s2(a, j, k);
    const auto gh = GeometricObject::from_section(hs1, hs2, ref.domain(), ref.base_point());
    for (const auto& p : ref.domain().shrunk(0.9).random_points(20, 5)) {
      EXPECT_LE(max_abs_diff(g.metric_at(p), ref.metric_at(p)), 1e-10);
      EXPECT_LE(max_abs_diff(g.connection_at(p), ref.connection_at(p)), 1e-10);
      EXPECT_LE(max_abs_diff(gh.metric_at(p), ref.metric_at(p)), 1e-10);
      EXPECT_LE(max_abs_diff(gh.connection_at(p), ref.connection_at(p)), 1e-10);
    }
  }
}

TEST(FromSection, SingularFrame) {
  const Box box = Box::cube(2, -1, 1);
  EXPECT_THROW(GeometricObject::from_section(metric(2, {"x1", "0", "0", "1"}), ExprTensor3(2, Expr(0.0)), box,
                                             box.center()),
               SamplePointError);
}

TEST(TransformChart, Identity) {
  const GeometricObject g = skewed();
  ExprVector id(2);
  id(0) = Expr::variable(0);
  id(1) = Expr::variable(1);
  const auto h = transform_chart(g, id, g.domain().shrunk(0.9), g.base_point());
  for (const auto& p : h.domain().random_points(10, 6)) {
    EXPECT_LE(max_abs_diff(h.metric_at(p), g.metric_at(p)), 1e-14);
    EXPECT_LE(max_abs_diff(h.connection_at(p), g.connection_at(p)), 1e-14);
  }
}

TEST(TransformChart, ConstantLinearMap) {
  const auto e = catalog_metric("euclidean", 2);
  Matrix A(2, 2);
  A << 0.5, 0.2, -0.1, 0.4;
  ExprVector x(2);
  for (int i = 0; i < 2; ++i) x(i) = Expr(A(i, 0)) * Expr::variable(0) + Expr(A(i, 1)) * Expr::variable(1);
  const auto h = transform_chart(e.object, x, Box::cube(2, -1, 1), Point{0, 0});
  for (const auto& p : h.domain().random_points(5, 7)) {
    EXPECT_LE(max_abs_diff(h.metric_at(p), Matrix(A.transpose() * A)), 1e-15);
    EXPECT_EQ(max_abs(h.connection_at(p)), 0.0);
  }
}

TEST(TransformChart, CartesianToPolar) {
  const auto e = catalog_metric("euclidean", 2);
  ExprVector x(2);
  x(0) = Expr::variable(0) * cos(Expr::variable(1));
  x(1) = Expr::variable(0) * sin(Expr::variable(1));
  const Box box({0.5, -1.0}, {0.9, 1.0});
  const auto h = transform_chart(e.object, x, box, box.center());
  const auto polar = object(metric(2, {"1", "0", "0", "x1^2"}), box);
  for (const auto& p : box.random_points(10, 8)) {
    EXPECT_LE(max_abs_diff(h.metric_at(p), polar.metric_at(p)), 1e-14);
    EXPECT_LE(max_abs_diff(h.connection_at(p), polar.connection_at(p)), 1e-14);
  }
}

TEST(TransformChart, ChartErrors) {
  const auto e = catalog_metric("euclidean", 2);
  ExprVector fold(2);
  fold(0) = Expr::variable(0) * Expr::variable(0);
  fold(1) = Expr::variable(1);
  EXPECT_THROW(transform_chart(e.object, fold, Box::cube(2, -0.5, 0.5), Point{0.1, 0.1}), SamplePointError);
  ExprVector stretch(2);
  stretch(0) = Expr(3.0) * Expr::variable(0);
  stretch(1) = Expr::variable(1);
  EXPECT_THROW(transform_chart(e.object, stretch, Box::cube(2, -1, 1), Point{0, 0}), SamplePointError);
}

TEST(RegularNormalization, Examples) {
  const auto euclid = catalog_metric("euclidean", 3);
  EXPECT_EQ(jet_distance(regular_normalization(euclid.object, Point{0.2, 0.1, -0.3}), Jet2Element::identity(3)), 0.0);
  const auto sphere = catalog_metric("sphere", 2);
  const Jet2Element h = regular_normalization(sphere.object, Point{0, 0});
  EXPECT_NEAR(max_abs_diff(h.a1, Matrix(0.5 * Matrix::Identity(2, 2))), 0.0, 1e-15);
  EXPECT_EQ(max_abs(h.a2), 0.0);
}

TEST(RegularNormalization, ProducesRegularCoordinates) {
  for (const GeometricObject& g : {skewed(), skewed3(), catalog_metric("sphere", 3).object,
                                   catalog_metric("polar_flat", 3).object}) {
    for (const auto& p : g.domain().shrunk(0.5).random_points(3, 9)) {
      const Jet2Element h = regular_normalization(g, p);
      const auto r = transform_chart(g, quadratic_chart(p, h), Box::cube(g.dim(), -0.05, 0.05), Point(g.dim(), 0.0));
      const Point o(g.dim(), 0.0);
      EXPECT_LE(max_abs_diff(r.metric_at(o), Matrix(Matrix::Identity(g.dim(), g.dim()))), 1e-10);
      EXPECT_LE(max_abs(r.connection_at(o)), 1e-10);
    }
  }
}

TEST(ArrowMembership, Examples) {
  const auto e = catalog_metric("euclidean", 2);
  const Point x{0.1, 0.2}, y{-0.4, 0.5};
  const double c = std::cos(1.1), s = std::sin(1.1);
  Matrix R(2, 2);
  R << c, -s, s, c;
  const MembershipResidual ok = arrow_membership(e.object, {x, y, R, Tensor3(2)});
  EXPECT_EQ(ok.max(), 0.0);
  const MembershipResidual bad = arrow_membership(e.object, {x, y, 2.0 * Matrix::Identity(2, 2), Tensor3(2)});
  EXPECT_DOUBLE_EQ(bad.first, 3.0);

  const auto sphere = catalog_metric("sphere", 2).object;
  const Point p{0.3, -0.2}, o{0, 0};
  const auto regular =
      transform_chart(sphere, quadratic_chart(p, regular_normalization(sphere, p)), Box::cube(2, -0.1, 0.1), o);
  EXPECT_LE(arrow_membership(regular, {o, o, Matrix::Identity(2, 2), Tensor3(2)}).max(), 1e-14);
}

TEST(ArrowMembership, MobiusIsometries) {
  for (double s : {1.0, -1.0}) {
    const auto g = catalog_metric(s > 0 ? "sphere" : "poincare", 2).object;
    const std::complex<double> a(0.15, -0.1);
    for (const auto& x : g.domain().shrunk(0.5).random_points(10, 10)) {
      const auto m = oracle::mobius_isometry(x, a, s);
      if (!g.domain().contains(m.y)) continue;
      Tensor3 phi2(2);
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
          for (int k = 0; k < 2; ++k) phi2(i, j, k) = m.phi2[i](j, k);
      const MembershipResidual r = arrow_membership(g, {x, m.y, m.phi1, phi2});
      EXPECT_LE(r.max(), 1e-12);
      // the same arrow with a perturbed second block fails the second equation only
      phi2(0, 1, 1) += 1e-3;
      phi2(0, 0, 0) += 1e-3;
      const MembershipResidual bad = arrow_membership(g, {x, m.y, m.phi1, phi2});
      EXPECT_LE(bad.first, 1e-12);
      EXPECT_GE(bad.second, 1e-4);
    }
  }
}

TEST(FrameArrow, IsAMemberOnConstantCurvature) {
  for (const char* name : {"sphere", "poincare", "polar_flat"}) {
    const auto g = catalog_metric(name, 2).object;
    const auto pts = g.domain().shrunk(0.8).random_points(6, 11);
    for (std::size_t i = 1; i < pts.size(); ++i) {
      const Arrow2 a = frame_arrow(g, pts[0], pts[i]);
      // first equation holds by construction of the frame, the second by completion
      EXPECT_LE(arrow_membership(g, a).first, 1e-12) << name;
      EXPECT_LE(max_abs_diff(complete_arrow(g, a.x, a.y, a.phi1), a.phi2), 1e-12) << name;
    }
  }
}
