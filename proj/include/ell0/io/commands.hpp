#pragma once

// Subcommand implementations behind the `ell0` executable. Each returns the
// process exit code: 0 Converged, 2 MaxIter, 3 EscapesExhausted, 1 error.

#include "ell0/io/config.hpp"
#include "ell0/io/csv.hpp"
#include "ell0/io/svg_plot.hpp"
#include "ell0/oracle.hpp"
#include "ell0/problems.hpp"
#include "ell0/solvers.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <optional>
#include <string>

namespace ell0::io {

namespace fs = std::filesystem;

inline constexpr int exit_error = 1;
inline constexpr Eigen::Index oracle_default_cap = 12;
inline constexpr double oracle_verdict_tolerance = 1e-4;
inline constexpr double equivalence_tolerance = 1e-10;

inline int exit_code(Terminal t) {
  switch (t) {
    case Terminal::Converged: return 0;
    case Terminal::MaxIter: return 2;
    case Terminal::EscapesExhausted: return 3;
  }
  return exit_error;
}

struct CommandContext {
  std::optional<std::string> out_dir;  // --out-dir, else $ELL0_OUT_DIR, else "."
  std::ostream* out = &std::cout;
  std::ostream* err = &std::cerr;
  bool allow_large_oracle = false;
};

namespace detail {

inline fs::path output_dir(const CommandContext& ctx) {
  fs::path dir = ".";
  if (ctx.out_dir) {
    dir = *ctx.out_dir;
  } else if (const char* env = std::getenv("ELL0_OUT_DIR"); env && *env) {
    dir = env;
  }
  fs::create_directories(dir);
  return dir;
}

inline fs::path resolve(const fs::path& dir, const std::string& p) {
  const fs::path path(p);
  return path.is_absolute() ? path : dir / path;
}

inline void write_text(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path.string() + "'");
  out << text;
}

inline json point_json(const Point& x) {
  json a = json::array();
  for (Eigen::Index i = 0; i < x.size(); ++i) a.push_back(x[i]);
  return a;
}

inline QuadraticObjective combine(const ProblemSpec& p, const Point& coeffs, double offset) {
  Matrix q = Matrix::Zero(p.dim(), p.dim());
  Point b = Point::Zero(p.dim());
  double c = offset;
  for (Eigen::Index i = 0; i < p.num_objectives(); ++i) {
    const auto& o = p.objectives[static_cast<std::size_t>(i)];
    q += coeffs[i] * o.q();
    b += coeffs[i] * o.b();
    c += coeffs[i] * o.c();
  }
  return QuadraticObjective::symmetrized(q, b, c);
}

inline SolverTrace run_block(const ProblemSpec& problem, const AlgorithmBlock& block, const Point& x0) {
  switch (block.algorithm) {
    case Algorithm::descent: return solve_l0_descent(problem.objectives.front(), x0, block.solver);
    case Algorithm::multistart: return solve_l0_multistart(problem.objectives.front(), x0, block.solver);
    case Algorithm::weight_sum: return solve_weight_sum(problem.vector_objective(), *block.weights, x0, block.solver);
    case Algorithm::gerstewitz: return solve_gerstewitz(problem.vector_objective(), *block.scalarizer, x0, block.solver);
  }
  throw Error("unknown algorithm");
}

// Independent check of the answer: support catalog for anything reducible
// to one quadratic, grid Pareto falsifier otherwise (n <= 3).
inline json oracle_verdict(const ProblemSpec& problem, const AlgorithmBlock& block, const Point& best) {
  json v{{"checked", false}};
  if (problem.dim() > oracle_default_cap) {
    v["reason"] = "dimension above " + std::to_string(oracle_default_cap);
    return v;
  }
  std::optional<QuadraticObjective> scalar;
  switch (block.algorithm) {
    case Algorithm::descent:
    case Algorithm::multistart: scalar = problem.objectives.front(); break;
    case Algorithm::weight_sum: scalar = combine(problem, block.weights->values(), 0.0); break;
    case Algorithm::gerstewitz: {
      const auto& s = *block.scalarizer;
      if (s.halfspaces().size() == 1 && s.pareto_safe() && s.k0().isOnes()) {
        const auto& h = s.halfspaces().front();
        const double d = h.a.dot(s.k0());
        scalar = combine(problem, h.a / d, -h.b / d);
      }
      break;
    }
  }
  if (scalar) {
    const SupportCatalog cat = enumerate_supports(*scalar, oracle_default_cap);
    v["checked"] = true;
    v["method"] = "support_catalog";
    v["verdict"] = verify_local_min(cat, best, oracle_verdict_tolerance, block.solver.zero_mode);
    v["global_best_total"] = cat.global_best_total();
    return v;
  }
  if (problem.dim() <= pareto_grid_cap && block.scalarizer->pareto_safe()) {
    v["checked"] = true;
    v["method"] = "pareto_grid";
    v["verdict"] = pareto_grid_check(problem.vector_objective(), best, 0.2, 0.01);
    return v;
  }
  v["reason"] = "no applicable oracle";
  return v;
}

inline json trace_summary(const SolverTrace& t) {
  json s;
  s["terminal"] = to_string(t.terminal);
  s["exit_code"] = exit_code(t.terminal);
  s["iterations"] = t.iterations();
  s["escapes"] = t.escapes;
  s["best_point"] = point_json(t.best_point);
  s["best_value"] = t.best_value;
  s["final_point"] = point_json(t.last().x);
  s["final_total"] = t.last().total;
  s["warnings"] = t.warnings;
  return s;
}

inline std::string dump(const json& j) { return j.dump(2) + "\n"; }

inline std::string trace_text(const SolverTrace& t) {
  std::ostringstream ss;
  write_trace_csv(ss, t);
  return ss.str();
}

}  // namespace detail

inline int cmd_solve(const std::string& config_path, const CommandContext& ctx = {}) {
  RunConfig cfg;
  fs::path dir;
  try {
    cfg = parse_run_config(load_json_file(config_path));
    dir = detail::output_dir(ctx);
  } catch (const std::exception& e) {
    *ctx.err << "error: " << e.what() << "\n";
    return exit_error;
  }

  json summary{{"problem", cfg.problem.name}, {"algorithm", to_string(cfg.run.algorithm)}, {"x0", detail::point_json(cfg.x0)}};
  try {
    SolverTrace trace = detail::run_block(cfg.problem, cfg.run, cfg.x0);
    summary.update(detail::trace_summary(trace));
    summary["oracle"] = detail::oracle_verdict(cfg.problem, cfg.run, trace.best_point);
    detail::write_text(detail::resolve(dir, cfg.outputs.trace_csv), detail::trace_text(trace));
    if (cfg.outputs.plot_svg) {
      const PlotMode mode = cfg.problem.dim() <= 2 ? PlotMode::path : PlotMode::value;
      detail::write_text(detail::resolve(dir, *cfg.outputs.plot_svg), render_trace_svg(trace.rows, mode));
    }
    detail::write_text(detail::resolve(dir, cfg.outputs.summary_json), detail::dump(summary));
    for (const auto& w : trace.warnings) *ctx.err << "warning: " << w << "\n";
    *ctx.out << to_string(trace.terminal) << " after " << trace.iterations() << " iterations; best value "
             << format_double(trace.best_value) << "\n";
    return exit_code(trace.terminal);
  } catch (const SolverNumericError& e) {
    *ctx.err << "error: " << e.what() << "\n";
    try {
      summary["error"] = e.what();
      summary["iterations"] = e.trace().iterations();
      summary["exit_code"] = exit_error;
      detail::write_text(detail::resolve(dir, cfg.outputs.trace_csv), detail::trace_text(e.trace()));
      detail::write_text(detail::resolve(dir, cfg.outputs.summary_json), detail::dump(summary));
    } catch (const std::exception& inner) {
      *ctx.err << "error: " << inner.what() << "\n";
    }
    return exit_error;
  } catch (const std::exception& e) {
    *ctx.err << "error: " << e.what() << "\n";
    return exit_error;
  }
}

struct ComparisonResult {
  std::size_t compared = 0;  // common trace prefix length
  double max_difference = 0.0;
  std::vector<double> differences;
  bool equivalent = false;
};

// Per-iterate sup-norm distance over the common prefix of the two traces.
inline ComparisonResult compare_traces(const SolverTrace& a, const SolverTrace& b) {
  ComparisonResult r;
  r.compared = std::min(a.rows.size(), b.rows.size());
  for (std::size_t k = 0; k < r.compared; ++k) {
    const double d = (a.rows[k].x - b.rows[k].x).cwiseAbs().maxCoeff();
    r.differences.push_back(d);
    r.max_difference = std::max(r.max_difference, d);
  }
  r.equivalent = r.compared > 0 && r.max_difference < equivalence_tolerance;
  return r;
}

inline int cmd_compare(const std::string& config_path, const CommandContext& ctx = {}) {
  CompareConfig cfg;
  fs::path dir;
  try {
    cfg = parse_compare_config(load_json_file(config_path));
    dir = detail::output_dir(ctx);
  } catch (const std::exception& e) {
    *ctx.err << "error: " << e.what() << "\n";
    return exit_error;
  }
  try {
    auto run = [&cfg](std::size_t i) { return detail::run_block(cfg.problem, cfg.runs[i], cfg.x0); };
    auto fa = std::async(std::launch::async, run, 0);
    auto fb = std::async(std::launch::async, run, 1);
    const SolverTrace a = fa.get();
    const SolverTrace b = fb.get();
    const ComparisonResult cmp = compare_traces(a, b);

    std::ostringstream csv;
    const Eigen::Index n = cfg.problem.dim();
    csv << "k";
    for (const char* tag : {"a", "b"}) {
      for (Eigen::Index i = 1; i <= n; ++i) csv << ',' << tag << "_x_" << i;
      csv << ',' << tag << "_total";
    }
    csv << ",max_coord_diff\n";
    for (std::size_t k = 0; k < cmp.compared; ++k) {
      csv << k;
      for (const SolverTrace* t : {&a, &b}) {
        for (Eigen::Index i = 0; i < n; ++i) csv << ',' << format_double(t->rows[k].x[i]);
        csv << ',' << format_double(t->rows[k].total);
      }
      csv << ',' << format_double(cmp.differences[k]) << '\n';
    }

    json summary{{"problem", cfg.problem.name},
                 {"verdict", cmp.equivalent ? "EQUIVALENT" : "NOT_EQUIVALENT"},
                 {"equivalent", cmp.equivalent},
                 {"tolerance", equivalence_tolerance},
                 {"compared_iterations", cmp.compared},
                 {"max_difference", cmp.max_difference},
                 {"best_point_distance", (a.best_point - b.best_point).cwiseAbs().maxCoeff()}};
    summary["runs"] = json::array();
    for (std::size_t i = 0; i < 2; ++i) {
      json r = detail::trace_summary(i == 0 ? a : b);
      r["algorithm"] = to_string(cfg.runs[i].algorithm);
      summary["runs"].push_back(r);
    }
    detail::write_text(detail::resolve(dir, cfg.outputs.compare_csv), csv.str());
    detail::write_text(detail::resolve(dir, cfg.outputs.summary_json), detail::dump(summary));
    *ctx.out << (cmp.equivalent ? "EQUIVALENT" : "NOT EQUIVALENT") << " over " << cmp.compared
             << " iterates (max difference " << format_double(cmp.max_difference) << ")\n";
    return 0;
  } catch (const std::exception& e) {
    *ctx.err << "error: " << e.what() << "\n";
    return exit_error;
  }
}

inline int cmd_oracle(const std::string& config_path, const CommandContext& ctx = {}) {
  try {
    const OracleConfig cfg = parse_oracle_config(load_json_file(config_path));
    const Eigen::Index cap = ctx.allow_large_oracle ? oracle_hard_cap : oracle_default_cap;
    if (cfg.problem.dim() > cap) {
      throw ConfigError("oracle: dimension " + std::to_string(cfg.problem.dim()) + " exceeds " + std::to_string(cap) +
                        (ctx.allow_large_oracle ? "" : " (pass --allow-large to raise the cap to 20)"));
    }
    const fs::path dir = detail::output_dir(ctx);
    const SupportCatalog cat = enumerate_supports(cfg.problem.objectives.front(), cap);

    std::ostringstream csv;
    write_catalog_csv(csv, cat);
    json summary{{"problem", cfg.problem.name},
                 {"entries", cat.entries.size()},
                 {"global_best_total", cat.global_best_total()}};
    summary["global_best"] = json::array();
    for (std::size_t i : cat.global_best) {
      summary["global_best"].push_back(
          {{"support", cat.entries[i].support.to_bitstring()}, {"point", detail::point_json(cat.entries[i].minimizer)}});
    }
    summary["local_minimizers"] = json::array();
    for (const Point& p : cat.local_minimizers()) summary["local_minimizers"].push_back(detail::point_json(p));

    detail::write_text(detail::resolve(dir, cfg.outputs.catalog_csv), csv.str());
    detail::write_text(detail::resolve(dir, cfg.outputs.summary_json), detail::dump(summary));
    *ctx.out << cat.entries.size() << " supports; global best total " << format_double(cat.global_best_total())
             << "\n";
    return 0;
  } catch (const std::exception& e) {
    *ctx.err << "error: " << e.what() << "\n";
    return exit_error;
  }
}

inline int cmd_plot(const std::string& trace_csv, const std::string& plot_svg, PlotMode mode,
                    const CommandContext& ctx = {}) {
  try {
    std::ifstream in(trace_csv);
    if (!in) throw ConfigError("plot: cannot open '" + trace_csv + "'");
    const std::vector<TraceRow> rows = read_trace_csv(in);
    detail::write_text(plot_svg, render_trace_svg(rows, mode));
    *ctx.out << "wrote " << plot_svg << "\n";
    return 0;
  } catch (const std::exception& e) {
    *ctx.err << "error: " << e.what() << "\n";
    return exit_error;
  }
}

}  // namespace ell0::io
