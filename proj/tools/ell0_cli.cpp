// ell0: run, compare and check l0-regularized descent experiments.

#include "ell0/io/commands.hpp"
#include "ell0/selftest.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <map>
#include <string>

int main(int argc, char** argv) {
  CLI::App app{"l0-regularized descent and Gerstewitz scalarization experiments"};
  app.require_subcommand(1);

  std::string out_dir;
  app.add_option("--out-dir", out_dir, "output directory (default: $ELL0_OUT_DIR, else the current directory)");

  std::string config;
  auto* solve = app.add_subcommand("solve", "run one algorithm from a config file");
  solve->add_option("config", config, "JSON run config")->required()->check(CLI::ExistingFile);

  auto* compare = app.add_subcommand("compare", "run two algorithm blocks side by side");
  compare->add_option("config", config, "JSON compare config")->required()->check(CLI::ExistingFile);

  bool allow_large = false;
  auto* oracle = app.add_subcommand("oracle", "enumerate every support of a quadratic");
  oracle->add_option("config", config, "JSON oracle config")->required()->check(CLI::ExistingFile);
  oracle->add_flag("--allow-large", allow_large, "raise the dimension cap from 12 to 20");

  std::string trace_csv, plot_svg;
  ell0::io::PlotMode mode = ell0::io::PlotMode::path;
  const std::map<std::string, ell0::io::PlotMode> modes{{"path", ell0::io::PlotMode::path},
                                                         {"value", ell0::io::PlotMode::value}};
  auto* plot = app.add_subcommand("plot", "render a trace CSV as SVG");
  plot->add_option("trace_csv", trace_csv, "trace written by solve")->required();
  plot->add_option("plot_svg", plot_svg, "output SVG path")->required();
  plot->add_option("--mode", mode, "path (n <= 2) or value")->transform(CLI::CheckedTransformer(modes, CLI::ignore_case));

  auto* selftest = app.add_subcommand("selftest", "run the acceptance suite and print a pass/fail table");

  CLI11_PARSE(app, argc, argv);

  ell0::io::CommandContext ctx;
  if (!out_dir.empty()) ctx.out_dir = out_dir;
  ctx.allow_large_oracle = allow_large;

  if (*solve) return ell0::io::cmd_solve(config, ctx);
  if (*compare) return ell0::io::cmd_compare(config, ctx);
  if (*oracle) return ell0::io::cmd_oracle(config, ctx);
  if (*plot) return ell0::io::cmd_plot(trace_csv, plot_svg, mode, ctx);
  if (*selftest) {
    try {
      const auto dir = ell0::io::detail::output_dir(ctx) / "selftest";
      const auto results = ell0::selftest::run_all(dir);
      ell0::selftest::print_table(std::cout, results);
      for (const auto& r : results)
        if (!r.pass) return 1;
      return 0;
    } catch (const std::exception& e) {
      std::cerr << "error: " << e.what() << "\n";
      return 1;
    }
  }
  return 1;
}
