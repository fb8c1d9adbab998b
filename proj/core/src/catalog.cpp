#include "jetgeo/catalog.hpp"

#include <stdexcept>

namespace jetgeo {

namespace {

Expr x(int i) { return Expr::variable(i); }

Expr radius_squared(int n) {
  Expr r2(0.0);
  for (int i = 0; i < n; ++i) r2 += x(i) * x(i);
  return r2;
}

ExprMatrix diagonal(const std::vector<Expr>& d) {
  const int n = static_cast<int>(d.size());
  ExprMatrix m(n, Expr(0.0));
  for (int i = 0; i < n; ++i) m(i, i) = d[static_cast<std::size_t>(i)];
  return m;
}

ExprMatrix scalar_matrix(int n, const Expr& f) { return diagonal(std::vector<Expr>(static_cast<std::size_t>(n), f)); }

// 4 delta / (1 + s r^2)^2 with frame 2/(1 + s r^2)
CatalogEntry conformal(const std::string& name, int n, double s, double half_width) {
  const Expr denom = Expr(1.0) + Expr(s) * radius_squared(n);
  const Expr lambda = Expr(4.0) / pow(denom, Expr(2.0));
  return {name,
          GeometricObject::from_metric(scalar_matrix(n, lambda), std::nullopt, Box::cube(n, -half_width, half_width),
                                       Point(static_cast<std::size_t>(n), 0.0)),
          s, conformally_flat_killing_fields(n, s), scalar_matrix(n, Expr(2.0) / denom)};
}

}  // namespace

std::vector<std::string> catalog_names() { return {"euclidean", "polar_flat", "sphere", "poincare", "ellipsoid"}; }

std::vector<ExprVector> conformally_flat_killing_fields(int n, double s) {
  std::vector<ExprVector> out;
  const Expr r2 = radius_squared(n);
  for (int b = 0; b < n; ++b) {
    ExprVector v(n);
    for (int i = 0; i < n; ++i) {
      Expr e = Expr(2.0 * s) * x(b) * x(i);
      if (i == b) e = e + Expr(1.0) - Expr(s) * r2;
      v(i) = e;
    }
    out.push_back(v);
  }
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      ExprVector v(n, Expr(0.0));
      v(i) = -x(j);
      v(j) = x(i);
      out.push_back(v);
    }
  return out;
}

CatalogEntry catalog_metric(std::string_view name, int n) {
  if (n != 2 && n != 3) throw std::invalid_argument("catalog_metric: dimension must be 2 or 3");
  const Point origin(static_cast<std::size_t>(n), 0.0);
  if (name == "euclidean") {
    return {"euclidean",
            GeometricObject::from_metric(scalar_matrix(n, Expr(1.0)), std::nullopt, Box::cube(n, -1.0, 1.0), origin),
            0.0, conformally_flat_killing_fields(n, 0.0), scalar_matrix(n, Expr(1.0))};
  }
  if (name == "polar_flat") {
    if (n == 2) {
      return {"polar_flat",
              GeometricObject::from_metric(diagonal({Expr(1.0), x(0) * x(0)}), std::nullopt,
                                           Box({0.5, -1.0}, {2.0, 1.0}), {1.0, 0.0}),
              0.0,
              {},
              diagonal({Expr(1.0), x(0)})};
    }
    const Expr st = sin(x(1));
    return {"polar_flat",
            GeometricObject::from_metric(diagonal({Expr(1.0), x(0) * x(0), x(0) * x(0) * st * st}), std::nullopt,
                                         Box({0.5, 0.6, -1.0}, {2.0, 2.5, 1.0}), {1.0, 1.5, 0.0}),
            0.0,
            {},
            diagonal({Expr(1.0), x(0), x(0) * st})};
  }
  if (name == "sphere") return conformal("sphere", n, 1.0, 1.0);
  if (name == "poincare") return conformal("poincare", n, -1.0, 0.5);
  if (name == "ellipsoid") {
    std::vector<Expr> d{Expr(1.0), Expr(1.0) + Expr(0.5) * x(0) * x(0)};
    if (n == 3) d.push_back(Expr(1.0) + Expr(0.5) * x(0) * x(0) + Expr(0.5) * x(1) * x(1));
    return {"ellipsoid", GeometricObject::from_metric(diagonal(d), std::nullopt, Box::cube(n, -1.0, 1.0), origin),
            std::nullopt, {}, std::nullopt};
  }
  throw std::invalid_argument("catalog_metric: unknown geometry '" + std::string(name) + "'");
}

}  // namespace jetgeo
