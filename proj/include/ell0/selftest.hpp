#pragma once

// The acceptance suite, runnable from the CLI (`ell0 selftest`) and from
// ctest. Each criterion returns pass/fail plus a one-line detail.

#include "ell0/io/commands.hpp"
#include "ell0/oracle.hpp"
#include "ell0/problems.hpp"
#include "ell0/scalarize.hpp"
#include "ell0/solvers.hpp"

#include <chrono>
#include <filesystem>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

namespace ell0::selftest {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string detail;
  double seconds = 0.0;
};

namespace detail {

inline std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

inline Point pt(std::initializer_list<double> v) { return ell0::detail::point(v); }

inline double sup_dist(const Point& a, const Point& b) { return (a - b).cwiseAbs().maxCoeff(); }

inline SolverConfig descent_cfg(ZeroMode mode = ZeroMode::exact()) {
  SolverConfig c;
  c.step_t = 0.1;
  c.eps_stop = 1e-6;
  c.max_iter = 10000;
  c.zero_mode = mode;
  return c;
}

// x0 uniform in [-5, 5]^n with each coordinate zeroed with probability 1/4,
// so that runs start on assorted support hyperplanes.
inline Point random_start(std::mt19937_64& rng, Eigen::Index n) {
  std::uniform_real_distribution<double> u(-5.0, 5.0);
  std::bernoulli_distribution zero(0.25);
  Point x(n);
  for (Eigen::Index i = 0; i < n; ++i) x[i] = zero(rng) ? 0.0 : u(rng);
  return x;
}

struct RandomRun {
  QuadraticObjective smooth;  // the f the trace descends on
  SolverTrace trace;
  double t = 0.0;
};

// The shared random suite: 50 seeded problems, alternately plain descent on a
// single quadratic and weight-sum descent on a random weighting of two.
inline std::vector<RandomRun> random_suite(ZeroMode mode) {
  std::vector<RandomRun> runs;
  std::mt19937_64 rng(20240611);
  for (int i = 0; i < 50; ++i) {
    const auto n = static_cast<Eigen::Index>(1 + i % 8);
    const auto seed = static_cast<std::uint64_t>(1000 + i);
    SolverConfig cfg;
    cfg.eps_stop = 1e-8;
    cfg.max_iter = 10000;
    cfg.zero_mode = mode;
    const Point x0 = random_start(rng, n);
    if (i % 2 == 0) {
      const ProblemSpec p = random_quadratic(seed, n, 1, 10.0);
      const QuadraticObjective& f = p.objectives.front();
      cfg.step_t = 0.9 / f.lipschitz();
      runs.push_back({f, solve_l0_descent(f, x0, cfg), cfg.step_t});
    } else {
      const ProblemSpec p = random_quadratic(seed, n, 2, 10.0);
      std::uniform_real_distribution<double> u(0.05, 0.95);
      const double w1 = u(rng);
      const WeightVector w(pt({w1, 1.0 - w1}));
      const VectorObjective F = p.vector_objective();
      cfg.step_t = 0.9 / F.lipschitz_max();
      const QuadraticObjective g = io::detail::combine(p, w.values(), 0.0);
      runs.push_back({g, solve_weight_sum(F, w, x0, cfg), cfg.step_t});
    }
  }
  return runs;
}

// First row index from which the support never changes again.
inline std::size_t stabilization_row(const SolverTrace& t) {
  std::size_t k = t.rows.size() - 1;
  while (k > 0 && t.rows[k - 1].support == t.rows.back().support) --k;
  return k;
}

inline PolyhedralScalarizer weight_scalarizer() {
  return PolyhedralScalarizer({Halfspace{pt({1.0, 1.0}), 0.0}}, pt({1.0, 1.0}));
}

inline SolverConfig equivalence_cfg() {
  SolverConfig c;
  c.step_t = 0.05;
  c.eps_stop = 1e-12;
  c.max_iter = 1000;
  return c;
}

inline Point equivalence_x0() { return pt({3.0, 3.0}); }

// Random polyhedral scalarizers: m in 2..4, 1..4 halfspaces, k0 > 0.
// Even-indexed ones use nonnegative normals (pareto_safe), every third is conic.
inline std::vector<PolyhedralScalarizer> random_scalarizers(std::mt19937_64& rng, int count) {
  std::vector<PolyhedralScalarizer> out;
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::uniform_real_distribution<double> pos(0.2, 2.0);
  for (int s = 0; s < count; ++s) {
    const Eigen::Index m = 2 + s % 3;
    const int pieces = 1 + s % 4;
    Point k0(m);
    for (Eigen::Index i = 0; i < m; ++i) k0[i] = pos(rng);
    std::vector<Halfspace> hs;
    while (static_cast<int>(hs.size()) < pieces) {
      Point a(m);
      for (Eigen::Index i = 0; i < m; ++i) a[i] = s % 2 == 0 ? std::abs(u(rng)) : u(rng);
      if (a.dot(k0) < 0.1) continue;
      hs.push_back({a, s % 3 == 0 ? 0.0 : 2.0 * u(rng)});
    }
    out.emplace_back(std::move(hs), k0);
  }
  return out;
}

inline Point random_point(std::mt19937_64& rng, Eigen::Index m, double scale = 5.0) {
  std::uniform_real_distribution<double> u(-scale, scale);
  Point y(m);
  for (Eigen::Index i = 0; i < m; ++i) y[i] = u(rng);
  return y;
}

}  // namespace detail

inline CriterionResult criterion_1() {
  using detail::pt;
  struct Case {
    Point x0, target;
  };
  const QuadraticObjective f = builtin("ex1_scalar").objectives.front();
  const std::vector<Case> cases{{pt({3, 0}), pt({1, 0})}, {pt({0, 2}), pt({0, 0})}, {pt({-3, 2}), pt({2, 1})}};
  bool ok = true;
  std::ostringstream d;
  for (const auto& c : cases) {
    const SolverTrace t = solve_l0_descent(f, c.x0, detail::descent_cfg());
    const double err = detail::sup_dist(t.best_point, c.target);
    const bool pass = t.terminal == Terminal::Converged && t.iterations() <= 10000 && err <= 1e-4;
    ok = ok && pass;
    d << "(" << c.x0[0] << "," << c.x0[1] << ")->err " << detail::fmt(err) << " in " << t.iterations()
      << " its; ";
  }
  return {1, "three local minimizers of the scalar example", ok, d.str()};
}

inline CriterionResult criterion_2() {
  const QuadraticObjective f = builtin("ex1_scalar").objectives.front();
  const SolverTrace t = solve_l0_descent(f, detail::pt({-3, 2}), detail::descent_cfg(ZeroMode::tol(1e-6)));
  std::size_t first = t.rows.size();
  for (std::size_t k = 0; k < t.rows.size(); ++k) {
    if (t.rows[k].x[1] == 0.0) {
      first = k;
      break;
    }
  }
  bool stays = first < t.rows.size();
  for (std::size_t k = first; stays && k < t.rows.size(); ++k) stays = t.rows[k].x[1] == 0.0;
  const bool ok = stays && t.terminal == Terminal::Converged;
  std::ostringstream d;
  d << "y = 0 exactly from k = " << first << " of " << t.iterations() << "; terminal " << to_string(t.terminal)
    << " at (" << detail::fmt(t.last().x[0]) << ", " << t.last().x[1] << ")";
  return {2, "tolerance mode enters the hyperplane y = 0", ok, d.str()};
}

inline CriterionResult criterion_3() {
  using detail::pt;
  const QuadraticObjective f = builtin("ex1_scalar").objectives.front();
  const SupportCatalog cat = enumerate_supports(f);
  const std::vector<Point> mins = cat.local_minimizers();
  const std::vector<Point> expected{pt({0, 0}), pt({1, 0}), pt({2, 1})};
  bool ok = mins.size() == expected.size();
  for (const auto& e : expected) {
    bool found = false;
    for (const auto& m : mins) found = found || detail::sup_dist(m, e) <= 1e-12;
    ok = ok && found;
  }
  for (const auto& e : cat.entries) ok = ok && std::abs(e.total - 3.0) <= 1e-12;
  ok = ok && cat.global_best.size() == cat.entries.size();

  int verified = 0;
  for (const auto& x0 : {pt({3, 0}), pt({0, 2}), pt({-3, 2})}) {
    const SolverTrace t = solve_l0_descent(f, x0, detail::descent_cfg());
    verified += verify_local_min(cat, t.best_point, 1e-4) ? 1 : 0;
  }
  ok = ok && verified == 3;
  std::ostringstream d;
  d << mins.size() << " distinct minimizers, global best total " << detail::fmt(cat.global_best_total())
    << ", terminal points verified " << verified << "/3";
  return {3, "support oracle agrees with the descent", ok, d.str()};
}

inline CriterionResult criterion_4() {
  const auto runs = detail::random_suite(ZeroMode::exact());
  std::size_t steps = 0, bad_descent = 0, bad_total = 0;
  double worst_total = -std::numeric_limits<double>::infinity();
  for (const auto& r : runs) {
    const auto& rows = r.trace.rows;
    for (std::size_t k = 0; k + 1 < rows.size(); ++k) {
      ++steps;
      const double dn = rows[k].direction_norm;
      if (!(rows[k + 1].f <= rows[k].f - 0.5 * r.t * dn * dn + 1e-9)) ++bad_descent;
      worst_total = std::max(worst_total, rows[k + 1].total - rows[k].total);
      // same 1e-9 floor as the decrease inequality; near convergence the
      // exact decrease is below double resolution
      if (!(rows[k + 1].total <= rows[k].total + 1e-9)) ++bad_total;
    }
  }
  std::ostringstream d;
  d << runs.size() << " runs, " << steps << " steps; sufficient-decrease violations " << bad_descent
    << ", total increases " << bad_total << " (largest " << detail::fmt(worst_total) << ")";
  return {4, "sufficient decrease along every step", bad_descent == 0 && bad_total == 0 && steps > 0, d.str()};
}

inline CriterionResult criterion_5() {
  std::size_t checks = 0, bad = 0;
  double worst = -std::numeric_limits<double>::infinity();
  for (ZeroMode mode : {ZeroMode::exact(), ZeroMode::tol(1e-6)}) {
    for (const auto& r : detail::random_suite(mode)) {
      const auto& rows = r.trace.rows;
      const std::size_t k = detail::stabilization_row(r.trace);
      const SupportPattern& supp = rows.back().support;
      const CatalogEntry bar = ell0::detail::solve_restricted(r.smooth, supp, ZeroMode::exact());
      const double f_bar = r.smooth.value(bar.minimizer) + static_cast<double>(supp.popcount());
      const double dist2 = (rows[k].x - bar.minimizer).squaredNorm();
      for (std::size_t s = 1; k + s < rows.size(); ++s) {
        ++checks;
        const double gap = rows[k + s].total - f_bar;
        const double bound = dist2 / (2.0 * static_cast<double>(s) * r.t);
        worst = std::max(worst, gap - bound);
        if (!(gap <= bound + 1e-7)) ++bad;
      }
    }
  }
  std::ostringstream d;
  d << checks << " (k, s) pairs over exact and tolerance runs; violations " << bad << "; max gap - bound "
    << detail::fmt(worst);
  return {5, "sublinear rate after support stabilization", bad == 0 && checks > 0, d.str()};
}

inline CriterionResult criterion_6(const std::filesystem::path& work_dir) {
  namespace fs = std::filesystem;
  fs::create_directories(work_dir);
  const SolverConfig c = detail::equivalence_cfg();
  io::json cfg{{"problem", "ex2_biobjective"}, {"x0", {3.0, 3.0}}};
  cfg["solver"] = {{"step_t", c.step_t}, {"eps_stop", c.eps_stop}, {"max_iter", c.max_iter}};
  io::json weight_run{{"algorithm", "weight_sum"}, {"weights", {0.5, 0.5}}};
  io::json gerstewitz_run{{"algorithm", "gerstewitz"}};
  gerstewitz_run["scalarizer"]["halfspaces"] = io::json::array({io::json::array({1, 1, 0})});
  gerstewitz_run["scalarizer"]["k0"] = {1, 1};
  cfg["runs"] = io::json::array({weight_run, gerstewitz_run});
  cfg["outputs"] = {{"compare_csv", "equivalence.csv"}, {"summary_json", "equivalence.json"}};
  const fs::path config = work_dir / "equivalence_config.json";
  io::detail::write_text(config, cfg.dump(2));

  std::ostringstream sink;
  io::CommandContext ctx;
  ctx.out_dir = work_dir.string();
  ctx.out = &sink;
  ctx.err = &sink;
  const int code = io::cmd_compare(config.string(), ctx);
  if (code != 0) return {6, "weight-sum and Gerstewitz traces coincide", false, "compare exited " + std::to_string(code) + ": " + sink.str()};
  const io::json summary = io::load_json_file((work_dir / "equivalence.json").string());
  const auto compared = summary["compared_iterations"].get<std::size_t>();
  const bool ok = summary["verdict"] == "EQUIVALENT" && compared >= 100;
  std::ostringstream d;
  d << summary["verdict"].get<std::string>() << " over " << compared << " iterates, max difference "
    << detail::fmt(summary["max_difference"].get<double>());
  return {6, "weight-sum and Gerstewitz traces coincide", ok, d.str()};
}

inline CriterionResult criterion_7() {
  std::mt19937_64 rng(77);
  std::size_t mismatches = 0;
  for (int i = 0; i < 1000; ++i) {
    const Eigen::Index m = 2 + i % 4;
    const Point y = detail::random_point(rng, m, 100.0);
    if (PolyhedralScalarizer::max_scalarizer(m).eval(y) != y.maxCoeff()) ++mismatches;
  }

  const ProblemSpec p = builtin("ex3_max");
  SolverConfig cfg;
  cfg.step_t = 1e-4;
  cfg.eps_stop = 1e-12;
  cfg.max_iter = 20000;
  const SolverTrace t = solve_gerstewitz(p.vector_objective(), PolyhedralScalarizer::max_scalarizer(2),
                                         detail::pt({2.0}), cfg);

  // independent 1-D grid search over [-1, 2]
  double grid_best = 0.0, grid_val = std::numeric_limits<double>::infinity();
  for (long j = 0; j <= 300000; ++j) {
    const double x = -1.0 + static_cast<double>(j) * 1e-5;
    const double v = std::max((x - 2) * (x - 2), (x + 1) * (x + 1) + 1);
    if (v < grid_val) {
      grid_val = v;
      grid_best = x;
    }
  }
  const double err = std::abs(t.best_point[0] - 1.0 / 3.0);
  const bool ok = mismatches == 0 && err <= 1e-3 && std::abs(grid_best - 1.0 / 3.0) <= 1e-5;
  std::ostringstream d;
  d << "max-of-coordinates mismatches " << mismatches << "/1000; best x " << detail::fmt(t.best_point[0])
    << " (grid " << detail::fmt(grid_best) << "), error " << detail::fmt(err);
  return {7, "max scalarizer and its minimizer", ok, d.str()};
}

inline CriterionResult criterion_8() {
  std::mt19937_64 rng(88);
  const auto scalarizers = detail::random_scalarizers(rng, 6);
  std::uniform_real_distribution<double> lam(-5.0, 5.0), unit(0.0, 1.0), alpha(0.01, 10.0);
  std::size_t samples = 0;
  std::size_t fail_translation = 0, fail_sublevel = 0, fail_monotone = 0, fail_convex = 0, fail_homog = 0,
              fail_lipschitz = 0, fail_subgrad = 0;
  std::size_t monotone_checked = 0, homog_checked = 0;
  for (const auto& s : scalarizers) {
    const Eigen::Index m = s.dim();
    for (int i = 0; i < 1000; ++i) {
      ++samples;
      const Point y = detail::random_point(rng, m);
      const Point z = detail::random_point(rng, m);
      const double l = lam(rng);
      const double py = s.eval(y), pz = s.eval(z);

      if (!(std::abs(s.eval(y + l * s.k0()) - (py + l)) < 1e-9)) ++fail_translation;

      if (std::abs(py - l) > 1e-9) {
        if ((py <= l) != s.in_shifted_set(y, l)) ++fail_sublevel;
      }

      if (s.pareto_safe()) {
        ++monotone_checked;
        Point up = y;
        for (Eigen::Index j = 0; j < m; ++j) up[j] += unit(rng) * 3.0;
        if (!(py <= s.eval(up) + 1e-12)) ++fail_monotone;
      }

      const double th = unit(rng);
      if (!(s.eval(th * y + (1 - th) * z) <= th * py + (1 - th) * pz + 1e-9)) ++fail_convex;

      if (s.conic()) {
        ++homog_checked;
        const double a = alpha(rng);
        const double lhs = s.eval(a * y), rhs = a * py;
        if (!(std::abs(lhs - rhs) <= 1e-9 * std::max(1.0, std::abs(rhs)))) ++fail_homog;
      }

      if (!(std::abs(py - pz) <= s.lipschitz_bound() * (y - z).norm() + 1e-12)) ++fail_lipschitz;

      const Point g = s.subgradient(y);
      if (!(std::abs(g.dot(s.k0()) - 1.0) <= 1e-12) || !(pz >= py + g.dot(z - y) - 1e-9)) ++fail_subgrad;
    }
  }
  const std::size_t failures =
      fail_translation + fail_sublevel + fail_monotone + fail_convex + fail_homog + fail_lipschitz + fail_subgrad;
  const bool ok = failures == 0 && scalarizers.size() >= 5 && monotone_checked >= 1000 && homog_checked >= 1000;
  std::ostringstream d;
  d << scalarizers.size() << " scalarizers x 1000 samples; failures: translation " << fail_translation << ", sublevel "
    << fail_sublevel << ", monotone " << fail_monotone << ", convex " << fail_convex << ", homogeneity " << fail_homog
    << ", lipschitz " << fail_lipschitz << ", subgradient " << fail_subgrad;
  return {8, "Gerstewitz function properties", ok, d.str()};
}

inline CriterionResult criterion_9() {
  const ProblemSpec p = builtin("ex2_biobjective");
  const PolyhedralScalarizer s = scalarizer_from_weights(WeightVector(detail::pt({0.5, 0.5})));
  SolverConfig cfg = detail::equivalence_cfg();
  cfg.eps_stop = 1e-300;
  cfg.max_iter = 10000;
  const SolverTrace t = solve_gerstewitz(p.vector_objective(), s, detail::equivalence_x0(), cfg);
  const auto& rows = t.rows;

  const Point x_bar = detail::pt({0.5, 1.0});
  const double phi_bar = s.eval(p.vector_objective().values(x_bar));

  // Lipschitz modulus of phi o f on the bounding box of the trace and x_bar
  Point lo = x_bar, hi = x_bar;
  for (const auto& r : rows) {
    lo = lo.cwiseMin(r.x);
    hi = hi.cwiseMax(r.x);
  }
  double sq = 0.0;
  for (const auto& q : p.objectives) sq += std::pow(quadratic_gradient_bound(q, lo, hi), 2);
  const double M = s.lipschitz_bound() * std::sqrt(sq);

  const std::size_t s0 = detail::stabilization_row(t);
  const double dist2 = (rows[s0].x - x_bar).squaredNorm();
  std::size_t bad = 0;
  double running = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < s0; ++j) running = std::min(running, rows[j].f);
  for (std::size_t k = 1; k <= 10000; ++k) {
    const std::size_t r = std::min(s0 + k - 1, rows.size() - 1);
    running = std::min(running, rows[r].f);
    const double kk = static_cast<double>(k);
    const double bound = (dist2 + M * M * cfg.step_t * cfg.step_t * kk) / (2.0 * cfg.step_t * kk);
    if (!(running - phi_bar <= bound + 1e-6)) ++bad;
  }
  std::ostringstream d;
  d << "k = 1..10000 from stabilization row " << s0 << ", M = " << detail::fmt(M) << ", violations "
    << bad << ", final gap " << detail::fmt(running - phi_bar);
  return {9, "subgradient rate bound", bad == 0, d.str()};
}

inline CriterionResult criterion_10() {
  const ProblemSpec p = builtin("ex2_biobjective");
  const VectorObjective F = p.vector_objective();
  const SolverConfig cfg = detail::equivalence_cfg();
  const Point x0 = detail::equivalence_x0();
  const SolverTrace a = solve_weight_sum(F, WeightVector(detail::pt({0.5, 0.5})), x0, cfg);
  const SolverTrace b = solve_gerstewitz(F, detail::weight_scalarizer(), x0, cfg);
  const bool pa = pareto_grid_check(F, a.best_point, 0.2, 0.01);
  const bool pb = pareto_grid_check(F, b.best_point, 0.2, 0.01);
  const bool dominated = pareto_grid_check(F, detail::pt({2.0, 2.0}), 0.2, 0.01);
  std::ostringstream d;
  d << "weight-sum terminal " << (pa ? "passes" : "fails") << ", Gerstewitz terminal " << (pb ? "passes" : "fails")
    << ", dominated point (2,2) " << (dominated ? "passes" : "fails");
  return {10, "grid Pareto falsifier", pa && pb && !dominated, d.str()};
}

inline std::vector<CriterionResult> run_all(const std::filesystem::path& work_dir) {
  const std::vector<std::function<CriterionResult()>> fns{
      criterion_1, criterion_2, criterion_3, criterion_4, criterion_5,
      [&] { return criterion_6(work_dir); }, criterion_7, criterion_8, criterion_9, criterion_10};
  std::vector<CriterionResult> out;
  for (std::size_t i = 0; i < fns.size(); ++i) {
    const auto start = std::chrono::steady_clock::now();
    CriterionResult r;
    try {
      r = fns[i]();
    } catch (const std::exception& e) {
      r = {static_cast<int>(i + 1), "criterion " + std::to_string(i + 1), false, std::string("threw: ") + e.what()};
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    out.push_back(std::move(r));
  }
  return out;
}

inline void print_table(std::ostream& out, const std::vector<CriterionResult>& results) {
  std::size_t passed = 0;
  for (const auto& r : results) {
    char head[96];
    std::snprintf(head, sizeof head, "[%s] %2d  %-44s %6.2fs  ", r.pass ? "PASS" : "FAIL", r.id, r.name.c_str(),
                  r.seconds);
    out << head << r.detail << "\n";
    passed += r.pass ? 1 : 0;
  }
  out << passed << "/" << results.size() << " criteria passed\n";
}

}  // namespace ell0::selftest
