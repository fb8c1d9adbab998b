#include "jetgeo_cli/commands.hpp"

#include <algorithm>
#include <cstdint>
#include <limits>

#include "jetgeo/symbolic.hpp"
#include "jetgeo_cli/metric_file.hpp"

namespace jetgeo::cli {

namespace {

constexpr std::uint64_t kSampleSeed = 0x9e3779b9;
constexpr double kVanish = 1e-6;

struct Loaded {
  MetricFile file;
  GeometricObject object;
};

// Returns the exit code on failure.
int load(const std::string& path, std::optional<Loaded>& out, std::ostream& err) {
  MetricFile file;
  try {
    file = load_metric_file(path);
  } catch (const MetricFileError& e) {
    err << path << ": " << e.what() << '\n';
    return kExitParseError;
  }
  try {
    out.emplace(Loaded{file, build_object(file)});
  } catch (const GeometryError& e) {
    err << path << ": " << e.what() << '\n';
    return kExitPrecondition;
  } catch (const std::invalid_argument& e) {
    err << path << ": " << e.what() << '\n';
    return kExitPrecondition;
  }
  return kExitOk;
}

std::vector<Point> samples_for(const Loaded& l) {
  return l.file.domain.shrunk(0.9).random_points(l.file.samples, kSampleSeed);
}

}  // namespace

std::vector<PathSpec> default_loops(const GeometricObject& g, std::span<const double> p, double step) {
  const int n = g.dim();
  const Box& box = g.domain();
  double room = std::numeric_limits<double>::infinity();
  for (int i = 0; i < n; ++i) room = std::min({room, p[i] - box.lo[i], box.hi[i] - p[i]});
  std::vector<PathSpec> loops;
  if (n < 2) return loops;
  if (!(room > 0.0)) throw PreconditionError("base point lies on the domain boundary; no room for loops");
  const double r = 0.4 * room;
  const Point start(p.begin(), p.end());
  for (int i = 0; i + 1 < n; ++i) {
    loops.push_back(PathSpec::loop_circle(start, r, step, i, i + 1));
    loops.push_back(PathSpec::loop_square(start, r, step, i, i + 1));
  }
  return loops;
}

int cmd_classify(const std::string& path, const CommandOptions& options, std::ostream& out, std::ostream& err) {
  std::optional<Loaded> l;
  if (int code = load(path, l, err)) return code;
  try {
    Report r;
    r.command = "classify";
    r.source = path;
    r.verdict = constant_curvature_fit(l->object, samples_for(*l), options.fit);
    r.write(out, options.format);
  } catch (const GeometryError& e) {
    err << path << ": " << e.what() << '\n';
    return kExitPrecondition;
  }
  return kExitOk;
}

int cmd_killing(const std::string& path, const CommandOptions& options, std::ostream& out, std::ostream& err) {
  std::optional<Loaded> l;
  if (int code = load(path, l, err)) return code;
  const GeometricObject& g = l->object;
  const Point& p = l->file.base_point;
  const int n = g.dim();
  Report r;
  r.command = "killing";
  r.source = path;
  try {
    const auto samples = samples_for(*l);
    r.verdict = constant_curvature_fit(g, samples, options.fit);
    r.fiber_dimension = static_cast<int>(fiber_basis(g, p).size());
    const auto loops = default_loops(g, p, l->file.rk_step);
    r.monodromy_defect = monodromy_defect(g, p, loops);
    r.checks.push_back({"monodromy", *r.monodromy_defect, kVanish});
    if (r.verdict->form == SpaceForm::kNonConstant) {
      r.checks.push_back({"constant_curvature", r.verdict->residual, options.fit.tolerance});
      r.write(out, options.format);
      err << path << ": curvature is not constant (fit residual " << format_real(r.verdict->residual)
          << ", monodromy defect " << format_real(*r.monodromy_defect) << ")\n";
      return kExitPrecondition;
    }
    const KillingBasis kb = killing_algebra(g, p, options.fit);
    r.killing_dimension = kb.dim();
    r.signature = kb.signature;
    r.jacobi_residual = kb.jacobi_residual;
    r.checks.push_back({"jacobi", kb.jacobi_residual, 1e-8});
    r.checks.push_back({"closure", kb.closure_residual, 1e-8});
    const ExprMatrix frame = g.riemannian() ? cholesky_frame(g.metric()) : ExprMatrix(n, Expr(0.0));
    ExprMatrix beta = frame;
    if (!g.riemannian())
      for (int i = 0; i < n; ++i) beta(i, i) = Expr(1.0);
    r.mc_defect = mc_constants(g, beta, samples, options.fit).defect;
    r.checks.push_back({"maurer_cartan", *r.mc_defect, kVanish});
    const int expected = g.riemannian() ? n * (n + 1) / 2 : n + n * n;
    r.checks.push_back({"fiber_dimension", static_cast<double>(std::abs(*r.fiber_dimension - expected)), 0.0});
  } catch (const GeometryError& e) {
    err << path << ": " << e.what() << '\n';
    return kExitPrecondition;
  }
  r.write(out, options.format);
  return kExitOk;
}

}  // namespace jetgeo::cli
