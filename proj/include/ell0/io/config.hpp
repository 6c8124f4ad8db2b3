#pragma once

// Run configuration files: a single JSON object per run.
//
//   {
//     "problem":   "ex1_scalar" | {"objectives": [{"Q": [[...]], "b": [...], "c": 0}]}
//                               | {"random": {"seed": 1, "n": 4, "m": 1, "condition_bound": 10}},
//     "algorithm": "descent" | "multistart" | "weight_sum" | "gerstewitz",
//     "weights":   [0.5, 0.5],                                   (weight_sum)
//     "scalarizer": {"halfspaces": [[a_1, ..., a_m, b], ...], "k0": [...]},   (gerstewitz)
//     "x0":        [3, 0],
//     "solver":    {"step_t": 0.1, "eps_stop": 1e-6, "max_iter": 10000,
//                   "zero_mode": "exact" | "tol", "eps_zero": 1e-6, "snap": true,
//                   "escape_limit": 4, "step_box": {"lo": [...], "hi": [...]}},
//     "outputs":   {"trace_csv": "trace.csv", "summary_json": "summary.json", "plot_svg": "plot.svg"}
//   }
//
// `compare` configs replace algorithm/weights/scalarizer/solver with
// "runs": [block, block]; a top-level "solver" acts as the shared default.

#include "ell0/core.hpp"
#include "ell0/problems.hpp"
#include "ell0/scalarize.hpp"
#include "ell0/solvers.hpp"

#include <json.hpp>

#include <array>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

namespace ell0::io {

using nlohmann::json;

enum class Algorithm { descent, multistart, weight_sum, gerstewitz };

inline const char* to_string(Algorithm a) {
  switch (a) {
    case Algorithm::descent: return "descent";
    case Algorithm::multistart: return "multistart";
    case Algorithm::weight_sum: return "weight_sum";
    case Algorithm::gerstewitz: return "gerstewitz";
  }
  return "?";
}

struct AlgorithmBlock {
  Algorithm algorithm = Algorithm::descent;
  std::optional<WeightVector> weights;
  std::optional<PolyhedralScalarizer> scalarizer;
  SolverConfig solver;
};

struct OutputPaths {
  std::string trace_csv = "trace.csv";
  std::string summary_json = "summary.json";
  std::optional<std::string> plot_svg;
  std::string catalog_csv = "catalog.csv";
  std::string compare_csv = "compare.csv";
};

struct RunConfig {
  ProblemSpec problem;
  AlgorithmBlock run;
  Point x0;
  OutputPaths outputs;
};

struct CompareConfig {
  ProblemSpec problem;
  Point x0;
  std::array<AlgorithmBlock, 2> runs;
  OutputPaths outputs;
};

struct OracleConfig {
  ProblemSpec problem;
  OutputPaths outputs;
};

namespace detail {

[[noreturn]] inline void fail(const std::string& field, const std::string& msg) {
  throw ConfigError("field '" + field + "': " + msg);
}

inline const json& require(const json& obj, const std::string& key, const std::string& path) {
  auto it = obj.find(key);
  if (it == obj.end()) fail(path.empty() ? key : path + "." + key, "missing");
  return *it;
}

inline std::string join(const std::string& path, const std::string& key) { return path.empty() ? key : path + "." + key; }

inline void reject_unknown(const json& obj, const std::set<std::string>& allowed, const std::string& path) {
  for (auto it = obj.begin(); it != obj.end(); ++it)
    if (!allowed.contains(it.key())) fail(join(path, it.key()), "unknown or not used here");
}

inline double number(const json& v, const std::string& field) {
  if (!v.is_number()) fail(field, "expected a number");
  const double d = v.get<double>();
  if (!std::isfinite(d)) fail(field, "must be finite");
  return d;
}

inline std::uint64_t count(const json& v, const std::string& field) {
  if (!v.is_number_integer() || v.get<long long>() < 0) fail(field, "expected a nonnegative integer");
  return v.get<std::uint64_t>();
}

inline Point vector(const json& v, const std::string& field) {
  if (!v.is_array() || v.empty()) fail(field, "expected a non-empty array of numbers");
  Point p(static_cast<Eigen::Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) p[static_cast<Eigen::Index>(i)] = number(v[i], field + "[" + std::to_string(i) + "]");
  return p;
}

inline Matrix matrix(const json& v, const std::string& field) {
  if (!v.is_array() || v.empty()) fail(field, "expected a non-empty array of rows");
  const auto n = static_cast<Eigen::Index>(v.size());
  Matrix m(n, n);
  for (Eigen::Index r = 0; r < n; ++r) {
    Point row = vector(v[static_cast<std::size_t>(r)], field + "[" + std::to_string(r) + "]");
    if (row.size() != n) fail(field, "matrix must be square");
    m.row(r) = row.transpose();
  }
  return m;
}

inline ProblemSpec parse_problem(const json& v) {
  if (v.is_string()) return builtin(v.get<std::string>());
  if (!v.is_object()) fail("problem", "expected a builtin name or an object");
  if (v.contains("random")) {
    reject_unknown(v, {"random"}, "problem");
    const json& r = v["random"];
    reject_unknown(r, {"seed", "n", "m", "condition_bound"}, "problem.random");
    const auto seed = count(require(r, "seed", "problem.random"), "problem.random.seed");
    const auto n = count(require(r, "n", "problem.random"), "problem.random.n");
    const auto m = r.contains("m") ? count(r["m"], "problem.random.m") : 1;
    const double cond = r.contains("condition_bound") ? number(r["condition_bound"], "problem.random.condition_bound") : 10.0;
    return random_quadratic(seed, static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(m), cond);
  }
  reject_unknown(v, {"name", "objectives"}, "problem");
  const json& objs = require(v, "objectives", "problem");
  if (!objs.is_array() || objs.empty()) fail("problem.objectives", "expected a non-empty array");
  ProblemSpec p;
  p.name = v.contains("name") ? v["name"].get<std::string>() : "inline";
  for (std::size_t i = 0; i < objs.size(); ++i) {
    const std::string path = "problem.objectives[" + std::to_string(i) + "]";
    reject_unknown(objs[i], {"Q", "b", "c"}, path);
    Matrix q = matrix(require(objs[i], "Q", path), path + ".Q");
    Point b = vector(require(objs[i], "b", path), path + ".b");
    if (b.size() != q.rows()) fail(path + ".b", "length must match Q");
    const double c = objs[i].contains("c") ? number(objs[i]["c"], path + ".c") : 0.0;
    p.objectives.push_back(QuadraticObjective::symmetrized(q, std::move(b), c));
    if (p.objectives.back().dim() != p.objectives.front().dim()) fail(path, "all objectives must share a dimension");
  }
  return p;
}

inline Algorithm parse_algorithm(const json& v, const std::string& field) {
  if (!v.is_string()) fail(field, "expected a string");
  const auto s = v.get<std::string>();
  if (s == "descent") return Algorithm::descent;
  if (s == "multistart") return Algorithm::multistart;
  if (s == "weight_sum") return Algorithm::weight_sum;
  if (s == "gerstewitz") return Algorithm::gerstewitz;
  fail(field, "unknown algorithm '" + s + "' (descent, multistart, weight_sum, gerstewitz)");
}

inline PolyhedralScalarizer parse_scalarizer(const json& v, const std::string& path) {
  if (!v.is_object()) fail(path, "expected an object");
  reject_unknown(v, {"halfspaces", "k0"}, path);
  const json& hs = require(v, "halfspaces", path);
  if (!hs.is_array() || hs.empty()) fail(path + ".halfspaces", "expected a non-empty array of [a..., b]");
  std::vector<Halfspace> halfspaces;
  for (std::size_t i = 0; i < hs.size(); ++i) {
    const std::string f = path + ".halfspaces[" + std::to_string(i) + "]";
    Point row = vector(hs[i], f);
    if (row.size() < 2) fail(f, "expected [a_1, ..., a_m, b]");
    halfspaces.push_back({row.head(row.size() - 1), row[row.size() - 1]});
  }
  const Eigen::Index m = halfspaces.front().a.size();
  Point k0 = v.contains("k0") ? vector(v["k0"], path + ".k0") : Point::Ones(m);
  try {
    return PolyhedralScalarizer(std::move(halfspaces), std::move(k0));
  } catch (const Error& e) {
    fail(path, e.what());
  }
}

inline void merge_solver(SolverConfig& cfg, const json& v, const std::string& path, Algorithm algo, bool& has_step,
                         std::optional<std::pair<Point, Point>>& step_box) {
  if (!v.is_object()) fail(path, "expected an object");
  std::set<std::string> allowed{"step_t", "eps_stop", "max_iter", "zero_mode", "eps_zero", "snap"};
  if (algo == Algorithm::multistart) allowed.insert("escape_limit");
  if (algo == Algorithm::gerstewitz) allowed.insert("step_box");
  reject_unknown(v, allowed, path);
  if (v.contains("step_t")) {
    cfg.step_t = number(v["step_t"], path + ".step_t");
    has_step = true;
  }
  if (v.contains("eps_stop")) cfg.eps_stop = number(v["eps_stop"], path + ".eps_stop");
  if (v.contains("max_iter")) cfg.max_iter = count(v["max_iter"], path + ".max_iter");
  if (v.contains("zero_mode")) {
    const json& z = v["zero_mode"];
    if (z == "exact") cfg.zero_mode = ZeroMode::exact();
    else if (z == "tol") cfg.zero_mode = ZeroMode::tol(cfg.zero_mode.eps);
    else fail(path + ".zero_mode", "expected \"exact\" or \"tol\"");
  }
  if (v.contains("eps_zero")) {
    cfg.zero_mode.eps = number(v["eps_zero"], path + ".eps_zero");
    if (!cfg.zero_mode.is_tol()) fail(path + ".eps_zero", "only used with zero_mode \"tol\"");
  }
  if (v.contains("snap")) {
    if (!v["snap"].is_boolean()) fail(path + ".snap", "expected true or false");
    cfg.snap = v["snap"].get<bool>();
  }
  if (v.contains("escape_limit")) cfg.escape_limit = count(v["escape_limit"], path + ".escape_limit");
  if (v.contains("step_box")) {
    const json& box = v["step_box"];
    reject_unknown(box, {"lo", "hi"}, path + ".step_box");
    step_box = std::make_pair(vector(require(box, "lo", path + ".step_box"), path + ".step_box.lo"),
                              vector(require(box, "hi", path + ".step_box"), path + ".step_box.hi"));
  }
}

// Parses one algorithm block from `obj` (the whole config for solve, one run for compare).
inline AlgorithmBlock parse_block(const json& obj, const std::string& path, const ProblemSpec& problem,
                                  const json* shared_solver) {
  AlgorithmBlock block;
  block.algorithm = parse_algorithm(require(obj, "algorithm", path), join(path, "algorithm"));
  const Algorithm algo = block.algorithm;
  const Eigen::Index m = problem.num_objectives();

  const bool wants_weights = algo == Algorithm::weight_sum;
  const bool wants_scalarizer = algo == Algorithm::gerstewitz;
  if (obj.contains("weights") && !wants_weights) fail(join(path, "weights"), std::string("not used by algorithm '") + to_string(algo) + "'");
  if (obj.contains("scalarizer") && !wants_scalarizer) fail(join(path, "scalarizer"), std::string("not used by algorithm '") + to_string(algo) + "'");
  if ((algo == Algorithm::descent || algo == Algorithm::multistart) && m != 1)
    fail(join(path, "algorithm"), "single-objective algorithm on a problem with " + std::to_string(m) + " objectives");

  if (wants_weights) {
    Point w = vector(require(obj, "weights", path), join(path, "weights"));
    if (w.size() != m) fail(join(path, "weights"), "expected " + std::to_string(m) + " weights");
    try {
      block.weights.emplace(std::move(w));
    } catch (const Error& e) {
      fail(join(path, "weights"), e.what());
    }
  }
  if (wants_scalarizer) {
    block.scalarizer.emplace(parse_scalarizer(require(obj, "scalarizer", path), join(path, "scalarizer")));
    if (block.scalarizer->dim() != m)
      fail(join(path, "scalarizer"), "dimension " + std::to_string(block.scalarizer->dim()) + " does not match " +
                                         std::to_string(m) + " objectives");
  }

  bool has_step = false;
  std::optional<std::pair<Point, Point>> step_box;
  if (shared_solver) merge_solver(block.solver, *shared_solver, "solver", algo, has_step, step_box);
  if (obj.contains("solver")) merge_solver(block.solver, obj["solver"], join(path, "solver"), algo, has_step, step_box);
  if (!shared_solver && !obj.contains("solver")) fail(join(path, "solver"), "missing");

  if (!has_step) {
    if (algo != Algorithm::gerstewitz || !step_box)
      fail(join(path, "solver.step_t"), algo == Algorithm::gerstewitz ? "missing (or give solver.step_box)" : "missing");
    const auto& [lo, hi] = *step_box;
    if (lo.size() != problem.dim() || hi.size() != problem.dim()) fail(join(path, "solver.step_box"), "dimension mismatch");
    std::vector<double> bounds;
    for (const auto& q : problem.objectives) bounds.push_back(quadratic_gradient_bound(q, lo, hi));
    block.solver.step_t = default_gerstewitz_step(*block.scalarizer, bounds);
  }
  try {
    block.solver.validate();
  } catch (const Error& e) {
    fail(join(path, "solver"), e.what());
  }
  return block;
}

inline Point parse_x0(const json& obj, const ProblemSpec& problem) {
  Point x0 = vector(require(obj, "x0", ""), "x0");
  if (x0.size() != problem.dim()) fail("x0", "expected " + std::to_string(problem.dim()) + " coordinates");
  return x0;
}

inline void parse_outputs(const json& obj, OutputPaths& out, const std::set<std::string>& allowed) {
  if (!obj.contains("outputs")) return;
  const json& o = obj["outputs"];
  if (!o.is_object()) fail("outputs", "expected an object");
  reject_unknown(o, allowed, "outputs");
  auto str = [&](const char* key, std::string& dst) {
    if (!o.contains(key)) return;
    if (!o[key].is_string()) fail(std::string("outputs.") + key, "expected a path string");
    dst = o[key].get<std::string>();
  };
  str("trace_csv", out.trace_csv);
  str("summary_json", out.summary_json);
  str("catalog_csv", out.catalog_csv);
  str("compare_csv", out.compare_csv);
  if (o.contains("plot_svg")) {
    std::string p;
    str("plot_svg", p);
    out.plot_svg = p;
  }
}

inline std::pair<std::size_t, std::size_t> line_and_column(const std::string& text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i + 1 < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

}  // namespace detail

inline json parse_json_text(const std::string& text) {
  try {
    json doc = json::parse(text);
    if (!doc.is_object()) throw ConfigError("config: top level must be an object");
    return doc;
  } catch (const json::parse_error& e) {
    const auto [line, col] = detail::line_and_column(text, e.byte);
    throw ConfigError("config: parse error at line " + std::to_string(line) + ", column " + std::to_string(col) +
                      ": " + e.what());
  }
}

inline json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_json_text(ss.str());
}

inline RunConfig parse_run_config(const json& doc) {
  detail::reject_unknown(doc, {"problem", "algorithm", "weights", "scalarizer", "x0", "solver", "outputs"}, "");
  RunConfig cfg{detail::parse_problem(detail::require(doc, "problem", "")), {}, {}, {}};
  cfg.run = detail::parse_block(doc, "", cfg.problem, nullptr);
  cfg.x0 = detail::parse_x0(doc, cfg.problem);
  detail::parse_outputs(doc, cfg.outputs, {"trace_csv", "summary_json", "plot_svg"});
  return cfg;
}

inline CompareConfig parse_compare_config(const json& doc) {
  detail::reject_unknown(doc, {"problem", "x0", "solver", "runs", "outputs"}, "");
  CompareConfig cfg{detail::parse_problem(detail::require(doc, "problem", "")), {}, {}, {}};
  cfg.x0 = detail::parse_x0(doc, cfg.problem);
  const json& runs = detail::require(doc, "runs", "");
  if (!runs.is_array() || runs.size() != 2) detail::fail("runs", "expected exactly two algorithm blocks");
  const json* shared = doc.contains("solver") ? &doc["solver"] : nullptr;
  for (std::size_t i = 0; i < 2; ++i) {
    const std::string path = "runs[" + std::to_string(i) + "]";
    if (!runs[i].is_object()) detail::fail(path, "expected an object");
    detail::reject_unknown(runs[i], {"algorithm", "weights", "scalarizer", "solver"}, path);
    cfg.runs[i] = detail::parse_block(runs[i], path, cfg.problem, shared);
  }
  detail::parse_outputs(doc, cfg.outputs, {"compare_csv", "summary_json"});
  return cfg;
}

inline OracleConfig parse_oracle_config(const json& doc) {
  detail::reject_unknown(doc, {"problem", "outputs"}, "");
  OracleConfig cfg{detail::parse_problem(detail::require(doc, "problem", "")), {}};
  if (cfg.problem.num_objectives() != 1) detail::fail("problem", "the oracle needs a single-objective problem");
  detail::parse_outputs(doc, cfg.outputs, {"catalog_csv", "summary_json"});
  return cfg;
}

}  // namespace ell0::io
