#include <iostream>

#include <CLI11.hpp>

#include "jetgeo_cli/commands.hpp"
#include "jetgeo_cli/selftest.hpp"

int main(int argc, char** argv) {
  using namespace jetgeo::cli;
  CLI::App app{"jetgeo: local Riemannian and affine geometry from jets"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string format = "human";
  bool corrupt = false;
  app.add_option("--format", format, "Output format")->check(CLI::IsMember({"human", "kv"}));
  // Negative control for the selftest: flips the curvature sign convention.
  app.add_flag("--corrupt-convention", corrupt)->group("");

  std::string path;
  auto* classify = app.add_subcommand("classify", "Classify the space form of a metric file");
  classify->add_option("file", path, "Metric definition file")->required();
  auto* killing = app.add_subcommand("killing", "Killing algebra and monodromy of a metric file");
  killing->add_option("file", path, "Metric definition file")->required();
  auto* selftest = app.add_subcommand("selftest", "Run the built-in property suites");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitParseError;
  }

  CommandOptions options;
  options.format = format == "kv" ? Format::kKeyValue : Format::kHuman;
  if (corrupt) options.fit.sign = -jetgeo::kCurvatureSign;

  if (*classify) return cmd_classify(path, options, std::cout, std::cerr);
  if (*killing) return cmd_killing(path, options, std::cout, std::cerr);
  if (*selftest) {
    SelftestOptions st;
    st.fit = options.fit;
    return cmd_selftest(st, std::cout);
  }
  return kExitParseError;
}
