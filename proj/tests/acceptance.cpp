// Acceptance run: one PASS/FAIL line per criterion, exit status 0 iff all pass.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>

#include "jetgeo/catalog.hpp"
#include "jetgeo/integrator.hpp"
#include "jetgeo/symbolic.hpp"
#include "jetgeo_cli/commands.hpp"
#include "jetgeo_cli/generators.hpp"
#include "oracles.hpp"

using namespace jetgeo;

namespace {

// Tolerances, pinned.
constexpr double kGroupTol = 1e-10;
constexpr double kConjugatorTol = 1e-10;
constexpr double kMobiusTol = 1e-10;
constexpr double kSeriesTol = 1e-12;
constexpr double kBracketTol = 1e-9;
constexpr double kClosureTol = 1e-8;
constexpr double kVanishTol = 1e-6;
constexpr double kWitnessMin = 1e-3;
constexpr double kFitResidualMin = 1e-2;
constexpr double kUnitCurvatureTol = 1e-6;
constexpr double kFlatCurvatureTol = 1e-8;
constexpr double kMcSpreadTol = 1e-6;
constexpr double kJacobiTol = 1e-8;
constexpr double kFlowTol = 1e-6;
constexpr double kRatioLo = 12.0;
constexpr double kRatioHi = 20.0;

struct Outcome {
  bool pass = true;
  std::string detail;
};

class Tally {
 public:
  void le(double v, double tol) {
    worst_le_ = std::max(worst_le_, v);
    ok_ = ok_ && v <= tol;
  }
  void ge(double v, double min) {
    least_ge_ = std::min(least_ge_, v);
    ok_ = ok_ && v >= min;
  }
  void require(bool cond, const std::string& why) {
    if (!cond && ok_) first_ = why;
    ok_ = ok_ && cond;
  }
  double worst() const { return worst_le_; }
  bool ok() const { return ok_; }
  const std::string& first() const { return first_; }

 private:
  double worst_le_ = 0.0;
  double least_ge_ = INFINITY;
  bool ok_ = true;
  std::string first_;
};

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
  char buf[200];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

std::vector<Point> points(const GeometricObject& g, int count, std::uint64_t seed) {
  return g.domain().shrunk(0.9).random_points(count, seed);
}

Tensor3 negated(Tensor3 t) {
  for (double& v : t) v = -v;
  return t;
}

// ---------------------------------------------------------------------------

Outcome group_laws() {
  gen::Rng rng(101);
  Tally t;
  for (int n = 1; n <= 3; ++n)
    for (int s = 0; s < 1000; ++s) {
      const Jet2Element a = gen::jet2(rng, n), b = gen::jet2(rng, n), c = gen::jet2(rng, n);
      t.le(jet_distance(compose2(compose2(a, b), c), compose2(a, compose2(b, c))), kGroupTol);
      const Jet2Element id = Jet2Element::identity(n);
      t.le(jet_distance(compose2(a, inverse2(a)), id), kGroupTol);
      t.le(jet_distance(compose2(inverse2(a), a), id), kGroupTol);
      t.le(max_abs_diff(project(split_epsilon(a.a1)), a.a1), kGroupTol);
      // orthogonal left factor leaves the invariant alone
      const CosetInvariant Fa = coset_invariant(a);
      const CosetInvariant Fh = coset_invariant(compose2(split_epsilon(gen::orthogonal(rng, n)), a));
      t.le(std::max(max_abs_diff(Fa.F1, Fh.F1), max_abs_diff(Fa.F2, Fh.F2)), kGroupTol);
      // equal invariants force a b^-1 into the orthogonal image: rebuild a representative from F(a)
      const Matrix r1 = Eigen::LLT<Matrix>(Fa.F1).matrixU();
      Tensor3 r2(n);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          for (int k = 0; k < n; ++k) {
            double acc = 0.0;
            for (int m = 0; m < n; ++m) acc += r1(i, m) * Fa.F2(m, j, k);
            r2(i, j, k) = acc;
          }
      const Jet2Element q = compose2(a, inverse2(Jet2Element(r1, r2)));
      t.le(max_abs_diff(Matrix(q.a1.transpose() * q.a1), Matrix(Matrix::Identity(n, n))), kGroupTol);
      t.le(max_abs(q.a2), kGroupTol);
    }
  return {t.ok(), fmt("3000 samples, max residual %.2e (tol %.0e)", t.worst(), kGroupTol)};
}

Outcome conjugator() {
  gen::Rng rng(202);
  Tally t;
  for (int s = 0; s < 100; ++s) {
    const int n = 1 + s % 3;
    const Tensor3 k0 = gen::symmetric_tensor(rng, n);
    const Tensor3 minus = negated(k0);
    auto sigma = [&](const Matrix& b) {
      return compose2(compose2(Jet2Element::kernel(k0), split_epsilon(b)), Jet2Element::kernel(minus));
    };
    const Matrix samples[] = {gen::invertible(rng, n), gen::invertible(rng, n), gen::invertible(rng, n)};
    const Tensor3 k2 = recover_conjugator(sigma, samples, 2.0), k3 = recover_conjugator(sigma, samples, 3.0),
                  km = recover_conjugator(sigma, samples, -0.5);
    t.le(max_abs_diff(k2, k0), kConjugatorTol);
    t.le(max_abs_diff(k2, k3), kConjugatorTol);
    t.le(max_abs_diff(k2, km), kConjugatorTol);
  }
  return {t.ok(), fmt("100 conjugators, max error %.2e (tol %.0e)", t.worst(), kConjugatorTol)};
}

Outcome schwarzian() {
  gen::Rng rng(303);
  Tally mob, ser;
  for (int s = 0; s < 50; ++s) {
    const Jet3Element1d m = gen::mobius_jet(rng);
    mob.le(std::abs(split_schwarzian(m).schwarzian) / (1.0 + std::abs(m.a3)), kMobiusTol);
  }
  for (int s = 0; s < 200; ++s) {
    const Jet3Element1d a = gen::jet3(rng), b = gen::jet3(rng);
    const Jet3Element1d c = compose3_1d(a, b);
    double d1, d2, d3;
    oracle::to_jets(oracle::compose(oracle::from_jets(a.a1, a.a2, a.a3), oracle::from_jets(b.a1, b.a2, b.a3)), d1, d2,
                    d3);
    ser.le(std::max({std::abs(c.a1 - d1), std::abs(c.a2 - d2), std::abs(c.a3 - d3)}), kSeriesTol);
  }
  return {mob.ok() && ser.ok(), fmt("50 Moebius maps, max |S| %.2e (tol %.0e); ", mob.worst(), kMobiusTol) +
                                     fmt("composition vs series %.2e (tol %.0e)", ser.worst(), kSeriesTol)};
}

Outcome fiber_rank() {
  Tally t;
  int evaluated = 0;
  for (int n : {2, 3})
    for (const auto& name : catalog_names()) {
      const auto e = catalog_metric(name, n);
      for (const auto& p : points(e.object, 20, 404)) {
        const int d = static_cast<int>(fiber_basis(e.object, p).size());
        t.require(d == n * (n + 1) / 2, name + " rank " + std::to_string(d));
        ++evaluated;
      }
    }
  return {t.ok(), std::to_string(evaluated) + " points on 5 metrics x n in {2,3}" +
                      (t.ok() ? ", ranks 3 and 6" : ", " + t.first())};
}

ExprVector lie_bracket(const ExprVector& u, const ExprVector& v) {
  ExprVector w(u.dim());
  for (int i = 0; i < u.dim(); ++i) {
    Expr acc(0.0);
    for (int a = 0; a < u.dim(); ++a) acc += u(a) * diff(v(i), a) - v(a) * diff(u(i), a);
    w(i) = acc;
  }
  return w;
}

Outcome spencer() {
  gen::Rng rng(505);
  Tally t;
  const int n = 2;
  const auto pts = Box::cube(n, -1, 1).random_points(2, 506);
  for (int s = 0; s < 200; ++s) {
    const JetVectorField X = gen::polynomial_jet_field(rng, n, 2), Y = gen::polynomial_jet_field(rng, n, 2),
                         Z = gen::polynomial_jet_field(rng, n, 2);
    const JetVectorField XY = spencer_bracket(X, Y), YX = spencer_bracket(Y, X);
    const JetVectorField jac = spencer_bracket(XY, Z) + spencer_bracket(spencer_bracket(Y, Z), X) +
                               spencer_bracket(spencer_bracket(Z, X), Y);
    const ExprVector base = lie_bracket(X.X0, Y.X0);
    const ExprVector u = gen::polynomial_field(rng, n, 3), v = gen::polynomial_field(rng, n, 3);
    const JetVectorField lhs = prolong(lie_bracket(u, v), 2), rhs = spencer_bracket(prolong(u, 2), prolong(v, 2));
    for (const auto& p : pts) {
      const JetVector xy = XY.at(p);
      const double scale = 1.0 + max_abs(xy);
      t.le(max_abs(xy + YX.at(p)) / scale, kBracketTol);
      t.le(max_abs(jac.at(p)) / scale, kBracketTol);
      double proj = 0.0;
      for (int i = 0; i < n; ++i) proj = std::max(proj, std::abs(xy.X0(i) - eval(base(i), p)));
      t.le(proj / scale, kBracketTol);
      const JetVector l = lhs.at(p);
      t.le(max_abs_diff(l, rhs.at(p)) / (1.0 + max_abs(l)), kBracketTol);
    }
  }
  // sections of the sphere's algebroid with polynomial coefficients
  Tally c;
  const auto e = catalog_metric("sphere", 2);
  for (int s = 0; s < 10; ++s) {
    auto section = [&] {
      JetVectorField S = prolong(e.killing_fields[0], 2).scaled(gen::polynomial(rng, n, 2));
      for (std::size_t a = 1; a < e.killing_fields.size(); ++a)
        S = S + prolong(e.killing_fields[a], 2).scaled(gen::polynomial(rng, n, 2));
      return S;
    };
    const JetVectorField B = spencer_bracket(section(), section());
    for (const auto& p : points(e.object, 3, 507)) {
      const JetVector b = B.at(p);
      c.le(algebroid_membership(e.object, b, p).max() / (1.0 + max_abs(b)), kClosureTol);
    }
  }
  return {t.ok() && c.ok(), fmt("200 triples, max law residual %.2e (tol %.0e); ", t.worst(), kBracketTol) +
                                fmt("sphere closure %.2e (tol %.0e)", c.worst(), kClosureTol)};
}

Outcome equivalence() {
  Tally t;
  std::string notes;
  for (int n : {2, 3})
    for (const auto& name : catalog_names()) {
      const auto e = catalog_metric(name, n);
      const GeometricObject& g = e.object;
      const auto pts = points(g, 8, 606);
      double N = 0.0, R = 0.0;
      for (const auto& p : pts) {
        const AlgebroidCurvature curv = algebroid_curvature(g, p);
        for (const auto& b : fiber_basis(g, p)) N = std::max(N, curv(b).max());
        R = std::max(R, groupoid_curvature(g, pts[0], p, frame_arrow(g, pts[0], p).phi1).max());
      }
      const double fit = constant_curvature_fit(g, pts).residual;
      const double mono = monodromy_defect(g, g.base_point(), cli::default_loops(g, g.base_point(), 1e-2));
      const double preds[] = {N, R, fit, mono};
      if (e.curvature) {
        for (double v : preds) t.le(v, kVanishTol);
      } else {
        const double top = *std::max_element(std::begin(preds), std::end(preds));
        t.require(top >= kWitnessMin, name + " has no witness");
        t.require(fit >= kFitResidualMin, name + " fit residual too small");
        for (double v : preds) t.require(v <= kVanishTol || v >= kWitnessMin, name + " predicate in the gap");
        if (n == 2) notes = fmt("; ellipsoid N=%.2e R=%.2e", N, R) + fmt(" fit=%.2e monodromy=%.2e", fit, mono);
      }
    }
  return {t.ok(), fmt("constant-curvature max %.2e (tol %.0e)", t.worst(), kVanishTol) + notes +
                      (t.ok() ? "" : "; " + t.first())};
}

Outcome space_forms() {
  Tally t, zero;
  double cs = 0, cp = 0;
  for (int n : {2, 3}) {
    const auto sp = catalog_metric("sphere", n).object, po = catalog_metric("poincare", n).object;
    const auto vs = constant_curvature_fit(sp, points(sp, 10, 707));
    const auto vp = constant_curvature_fit(po, points(po, 10, 707));
    t.le(std::abs(std::abs(vs.c) - 1.0), kUnitCurvatureTol);
    t.le(std::abs(std::abs(vp.c) - 1.0), kUnitCurvatureTol);
    t.require(vs.c * vp.c < 0, "signs agree");
    t.require(vs.form == SpaceForm::kSpherical && vp.form == SpaceForm::kHyperbolic, "classes");
    cs = vs.c;
    cp = vp.c;
    for (const char* flat : {"euclidean", "polar_flat"}) {
      const auto g = catalog_metric(flat, n).object;
      const auto v = constant_curvature_fit(g, points(g, 10, 707));
      zero.le(std::abs(v.c), kFlatCurvatureTol);
      t.require(v.form == SpaceForm::kFlat, std::string(flat) + " class");
    }
  }
  return {t.ok() && zero.ok(), fmt("sphere c=%.12f, Poincare c=%.12f, ", cs, cp) +
                                   fmt("max ||c|-1| %.2e, flat |c| %.2e", t.worst(), zero.worst())};
}

Outcome maurer_cartan() {
  Tally t;
  for (int n : {2, 3})
    for (const char* name : {"sphere", "euclidean", "poincare"}) {
      const auto e = catalog_metric(name, n);
      const auto pts = points(e.object, 6, 808);
      t.le(mc_constants(e.object, *e.frame, pts).defect, kMcSpreadTol);
      if (std::string(name) == "euclidean") {
        const MCConstants mc = mc_constants(e.object, constant_matrix(Matrix::Identity(n, n)), pts);
        t.require(max_abs(mc.c2) == 0.0 && max_abs(mc.c1) == 0.0 && mc.defect == 0.0, "euclidean not zero");
      }
    }
  return {t.ok(), fmt("6 samples each, max spread %.2e (tol %.0e); Euclidean identity frame exactly zero", t.worst(),
                      kMcSpreadTol)};
}

Outcome killing() {
  Tally t;
  struct Case {
    const char* name;
    std::array<int, 3> signature;
  };
  std::string sigs;
  for (const Case& c : {Case{"sphere", {0, 0, 3}}, Case{"euclidean", {0, 2, 1}}, Case{"poincare", {2, 0, 1}}}) {
    const auto e = catalog_metric(c.name, 2);
    const KillingBasis kb = killing_algebra(e.object, e.object.base_point());
    t.require(kb.dim() == 3, std::string(c.name) + " dimension");
    t.require(kb.signature == c.signature, std::string(c.name) + " signature");
    t.le(kb.jacobi_residual, kJacobiTol);
    sigs += std::string(sigs.empty() ? "" : " ") + c.name + "(" + std::to_string(kb.signature[0]) + "," +
            std::to_string(kb.signature[1]) + "," + std::to_string(kb.signature[2]) + ")";
  }
  Tally flow;
  for (const char* name : {"sphere", "poincare", "euclidean"}) {
    const auto e = catalog_metric(name, 2);
    for (const auto& X : e.killing_fields) flow.le(killing_verify(e.object, X, 0.1), kFlowTol);
  }
  return {t.ok() && flow.ok(), "signatures " + sigs + fmt(", Jacobi %.2e, flow deviation %.2e", t.worst(), flow.worst())};
}

double arc_error(double step) {
  const auto g = catalog_metric("euclidean", 2).object;
  JetVector init = JetVector::zero(2, 1);
  init.X0 << 0.0, 0.5;
  init.X1 << 0, -1, 1, 0;
  const PathSpec path = PathSpec::arc(Point{0, 0}, 0.5, 0.0, 1.0, step);
  const Point q = path.end();
  JetVector exact = JetVector::zero(2, 1);
  exact.X0 << -q[1], q[0];
  exact.X1 = init.X1;
  return max_abs_diff(integrate_killing(g, init, path), exact);
}

Outcome convergence() {
  const double e1 = arc_error(0.1), e2 = arc_error(0.05), e3 = arc_error(0.025);
  const double r1 = e1 / e2, r2 = e2 / e3;
  const bool ok = r1 >= kRatioLo && r1 <= kRatioHi && r2 >= kRatioLo && r2 <= kRatioHi;
  return {ok, fmt("error ratios %.2f, %.2f over steps 0.1, 0.05, 0.025 ", r1, r2) +
                  fmt("(range [%.0f, %.0f])", kRatioLo, kRatioHi)};
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    double budget_s;
    std::function<Outcome()> run;
  };
  const Criterion criteria[] = {
      {1, "jet group laws", 5, group_laws},
      {2, "conjugator recovery", 1, conjugator},
      {3, "Schwarzian splitting", 1, schwarzian},
      {4, "algebroid rank", 5, fiber_rank},
      {5, "Spencer bracket calculus", 10, spencer},
      {6, "curvature equivalence suite", 30, equivalence},
      {7, "space-form constants", 10, space_forms},
      {8, "Maurer-Cartan constancy", 5, maurer_cartan},
      {9, "Killing algebra", 20, killing},
      {10, "RK4 convergence", 5, convergence},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool in_budget = secs <= c.budget_s;
    const bool pass = o.pass && in_budget;
    if (!pass) ++failures;
    std::printf("%s criterion %2d: %-28s %s [%.2fs of %.0fs]\n", pass ? "PASS" : "FAIL", c.id, c.name,
                o.detail.c_str(), secs, c.budget_s);
  }
  std::printf("%d of 10 criteria passed\n", 10 - failures);
  return failures == 0 ? 0 : 1;
}
