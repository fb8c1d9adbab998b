#include "jetgeo_cli/selftest.hpp"

#include <cmath>
#include <cstdio>
#include <functional>

#include "jetgeo/catalog.hpp"
#include "jetgeo/integrator.hpp"
#include "jetgeo_cli/commands.hpp"
#include "jetgeo_cli/generators.hpp"

namespace jetgeo::cli {

namespace {

class Suite {
 public:
  explicit Suite(std::string name) { result_.name = std::move(name); }

  void check(const std::string& what, double residual, double threshold) {
    ++result_.checks;
    result_.worst = std::max(result_.worst, residual);
    if (!(residual <= threshold)) {
      if (result_.failures++ == 0) result_.first_failure = what;
    }
  }
  void expect(const std::string& what, bool ok) { check(what, ok ? 0.0 : 1.0, 0.0); }
  SuiteResult result() const { return result_; }

 private:
  SuiteResult result_;
};

template <class F>
SuiteResult guarded(const std::string& name, F&& body) {
  Suite s(name);
  try {
    body(s);
  } catch (const std::exception& e) {
    s.check(std::string("exception: ") + e.what(), 1.0, 0.0);
  }
  return s.result();
}

double relative(double err, double scale) { return err / (1.0 + scale); }

SuiteResult group_axioms(gen::Rng& rng) {
  return guarded("group_axioms", [&](Suite& s) {
    for (int n = 1; n <= 3; ++n)
      for (int t = 0; t < 100; ++t) {
        const Jet2Element a = gen::jet2(rng, n), b = gen::jet2(rng, n), c = gen::jet2(rng, n);
        const Jet2Element l = compose2(compose2(a, b), c), r = compose2(a, compose2(b, c));
        s.check("associativity", relative(jet_distance(l, r), max_abs(l.a2)), 1e-10);
        const Jet2Element id = Jet2Element::identity(n);
        s.check("inverse", std::max(jet_distance(compose2(a, inverse2(a)), id), jet_distance(compose2(inverse2(a), a), id)),
                1e-10);
        s.check("projection", max_abs_diff(project(split_epsilon(a.a1)), a.a1), 0.0);
        const Matrix h = gen::orthogonal(rng, n);
        const CosetInvariant Fa = coset_invariant(a), Fha = coset_invariant(compose2(split_epsilon(h), a));
        s.check("coset_invariance", std::max(max_abs_diff(Fa.F1, Fha.F1), max_abs_diff(Fa.F2, Fha.F2)), 1e-10);
        const CosetInvariant T = coset_transport(Fa, b), D = coset_invariant(compose2(a, b));
        s.check("transport", relative(std::max(max_abs_diff(T.F1, D.F1), max_abs_diff(T.F2, D.F2)), max_abs(D.F2)),
                1e-10);
      }
  });
}

SuiteResult conjugator(gen::Rng& rng) {
  return guarded("conjugator", [&](Suite& s) {
    for (int t = 0; t < 20; ++t) {
      const int n = 1 + t % 3;
      const Tensor3 k0 = gen::symmetric_tensor(rng, n);
      Tensor3 minus = k0;
      for (double& v : minus) v = -v;
      auto sigma = [&](const Matrix& b) {
        return compose2(compose2(Jet2Element::kernel(k0), split_epsilon(b)), Jet2Element::kernel(minus));
      };
      std::vector<Matrix> samples;
      for (int q = 0; q < 3; ++q) samples.push_back(gen::invertible(rng, n));
      const Tensor3 k2 = recover_conjugator(sigma, samples, 2.0);
      const Tensor3 k3 = recover_conjugator(sigma, samples, 3.0);
      s.check("recovery", max_abs_diff(k2, k0), 1e-10);
      s.check("lambda_independence", max_abs_diff(k2, k3), 1e-10);
    }
  });
}

SuiteResult schwarzian(gen::Rng& rng) {
  return guarded("schwarzian", [&](Suite& s) {
    for (int t = 0; t < 50; ++t) {
      const Jet3Element1d m = gen::mobius_jet(rng);
      s.check("mobius_zero", relative(std::abs(split_schwarzian(m).schwarzian), std::abs(m.a3)), 1e-10);
      const Jet3Element1d a = gen::jet3(rng);
      const SchwarzianSplit sp = split_schwarzian(a);
      const Jet3Element1d back = compose3_1d(sp.head, sp.kernel());
      s.check("reconstruction", std::max({std::abs(back.a1 - a.a1), std::abs(back.a2 - a.a2), std::abs(back.a3 - a.a3)}),
              1e-12);
    }
  });
}

SuiteResult bracket_laws(gen::Rng& rng) {
  return guarded("bracket_laws", [&](Suite& s) {
    const int n = 2;
    const auto pts = Box::cube(n, -1, 1).random_points(3, rng());
    for (int t = 0; t < 10; ++t) {
      const JetVectorField X = gen::polynomial_jet_field(rng, n, 2), Y = gen::polynomial_jet_field(rng, n, 2),
                           Z = gen::polynomial_jet_field(rng, n, 2);
      const JetVectorField XY = spencer_bracket(X, Y), YX = spencer_bracket(Y, X);
      const JetVectorField jac = spencer_bracket(spencer_bracket(X, Y), Z) + spencer_bracket(spencer_bracket(Y, Z), X) +
                                 spencer_bracket(spencer_bracket(Z, X), Y);
      const ExprVector u = gen::polynomial_field(rng, n, 3), v = gen::polynomial_field(rng, n, 3);
      const JetVectorField pu = prolong(u, 2), pv = prolong(v, 2);
      ExprVector classical(n);
      for (int i = 0; i < n; ++i) {
        Expr acc(0.0);
        for (int a = 0; a < n; ++a) acc += u(a) * diff(v(i), a) - v(a) * diff(u(i), a);
        classical(i) = acc;
      }
      for (const auto& p : pts) {
        const JetVector xy = XY.at(p);
        s.check("antisymmetry", max_abs(xy + YX.at(p)), 1e-9);
        s.check("jacobi", relative(max_abs(jac.at(p)), max_abs(xy)), 1e-9);
        const JetVector lhs = prolong(classical, 2).at(p), rhs = spencer_bracket(pu, pv).at(p);
        s.check("prolongation", relative(max_abs_diff(lhs, rhs), max_abs(lhs)), 1e-9);
      }
    }
  });
}

SuiteResult fiber_rank() {
  return guarded("fiber_rank", [&](Suite& s) {
    for (int n : {2, 3})
      for (const auto& name : catalog_names()) {
        const auto e = catalog_metric(name, n);
        for (const auto& p : e.object.domain().shrunk(0.9).random_points(5, 11)) {
          const auto basis = fiber_basis(e.object, p);
          s.check(name + " rank", std::abs(static_cast<double>(basis.size()) - n * (n + 1) / 2), 0.0);
          for (const auto& b : basis) s.check(name + " membership", algebroid_membership(e.object, b, p).max(), 1e-10);
        }
      }
  });
}

SuiteResult equivalence(const FitOptions& fit) {
  return guarded("equivalence", [&](Suite& s) {
    for (const auto& name : catalog_names()) {
      const auto e = catalog_metric(name, 2);
      const GeometricObject& g = e.object;
      const auto pts = g.domain().shrunk(0.9).random_points(8, 5);
      double N = 0.0, R = 0.0;
      for (const auto& p : pts) {
        const AlgebroidCurvature curv = algebroid_curvature(g, p);
        for (const auto& b : fiber_basis(g, p)) N = std::max(N, curv(b).max());
        R = std::max(R, groupoid_curvature(g, pts[0], p, frame_arrow(g, pts[0], p).phi1).max());
      }
      const double fit_residual = constant_curvature_fit(g, pts, fit).residual;
      const double mono = monodromy_defect(g, g.base_point(), default_loops(g, g.base_point(), 1e-2));
      const bool flat_expected = e.curvature.has_value();
      const std::array<double, 4> preds{N, R, fit_residual, mono};
      for (double v : preds) {
        if (flat_expected) s.check(name + " vanishing", v, 1e-6);
        else s.expect(name + " gap", v <= 1e-6 || v >= 1e-3);
      }
      if (!flat_expected) {
        s.expect(name + " witness", *std::max_element(preds.begin(), preds.end()) >= 1e-3);
        s.expect(name + " fit residual", fit_residual >= 1e-2);
      }
    }
  });
}

SuiteResult space_forms(const FitOptions& fit) {
  return guarded("space_forms", [&](Suite& s) {
    const std::pair<const char*, SpaceForm> expected[] = {{"euclidean", SpaceForm::kFlat},
                                                          {"polar_flat", SpaceForm::kFlat},
                                                          {"sphere", SpaceForm::kSpherical},
                                                          {"poincare", SpaceForm::kHyperbolic},
                                                          {"ellipsoid", SpaceForm::kNonConstant}};
    for (int n : {2, 3})
      for (const auto& [name, form] : expected) {
        const auto e = catalog_metric(name, n);
        const auto v = constant_curvature_fit(e.object, e.object.domain().shrunk(0.9).random_points(10, 3), fit);
        s.expect(std::string(name) + " class", v.form == form);
        if (e.curvature) s.check(std::string(name) + " constant", std::abs(v.c - *e.curvature), 1e-6);
      }
  });
}

SuiteResult killing(const FitOptions& fit) {
  return guarded("killing_algebra", [&](Suite& s) {
    const std::pair<const char*, std::array<int, 3>> expected[] = {
        {"sphere", {0, 0, 3}}, {"euclidean", {0, 2, 1}}, {"poincare", {2, 0, 1}}};
    for (const auto& [name, sig] : expected) {
      const auto e = catalog_metric(name, 2);
      const KillingBasis kb = killing_algebra(e.object, e.object.base_point(), fit);
      s.expect(std::string(name) + " dimension", kb.dim() == 3);
      s.expect(std::string(name) + " signature", kb.signature == sig);
      s.check(std::string(name) + " jacobi", kb.jacobi_residual, 1e-8);
      for (const auto& X : e.killing_fields) s.check(std::string(name) + " flow", killing_verify(e.object, X, 0.1), 1e-6);
    }
  });
}

}  // namespace

std::vector<SuiteResult> run_selftest(const SelftestOptions& options) {
  gen::Rng rng(options.seed);
  std::vector<SuiteResult> out;
  out.push_back(group_axioms(rng));
  out.push_back(conjugator(rng));
  out.push_back(schwarzian(rng));
  out.push_back(bracket_laws(rng));
  out.push_back(fiber_rank());
  out.push_back(equivalence(options.fit));
  out.push_back(space_forms(options.fit));
  out.push_back(killing(options.fit));
  return out;
}

int cmd_selftest(const SelftestOptions& options, std::ostream& out) {
  const auto results = run_selftest(options);
  char line[160];
  std::snprintf(line, sizeof line, "%-16s %7s %7s %12s  %s\n", "suite", "checks", "failed", "worst", "status");
  out << line;
  bool ok = true;
  for (const auto& r : results) {
    std::snprintf(line, sizeof line, "%-16s %7d %7d %12.3e  %s\n", r.name.c_str(), r.checks, r.failures, r.worst,
                  r.pass() ? "ok" : "FAIL");
    out << line;
    if (!r.pass()) {
      out << "    first failure: " << r.first_failure << '\n';
      ok = false;
    }
  }
  out << (ok ? "selftest passed\n" : "selftest FAILED\n");
  return ok ? kExitOk : kExitSelftestFailed;
}

}  // namespace jetgeo::cli
