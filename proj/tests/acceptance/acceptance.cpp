// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails. Progress and timings go to stderr.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "dvi/dataio.hpp"
#include "dvi/path.hpp"
#include "dvi/screen_dvi.hpp"
#include "dvi/screen_ssnsv.hpp"
#include "dvi/solver.hpp"
#include "support/fixtures.hpp"
#include "support/oracles.hpp"

namespace {

using namespace dvi;
using Clock = std::chrono::steady_clock;

constexpr std::uint64_t kSeed = 7;
constexpr double kOracleTol = 1e-10;
constexpr std::int64_t kOracleSweeps = 10'000'000;
constexpr double kPinTol = 1e-6;
constexpr double kEquivalenceTol = 1e-6;
constexpr double kEquivalenceSolverTol = 1e-8;
constexpr double kRuleMargin = 1e-8;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

int failures = 0;

void verdict(int id, bool pass, const std::string& title, const std::string& detail) {
  std::printf("%s criterion %d: %s (%s)\n", pass ? "PASS" : "FAIL", id, title.c_str(), detail.c_str());
  std::fflush(stdout);
  if (!pass) ++failures;
}

void progress(const std::string& msg) {
  std::fprintf(stderr, "  .. %s\n", msg.c_str());
  std::fflush(stderr);
}

std::string fmt(double v) {
  std::ostringstream s;
  s.precision(4);
  s << v;
  return s.str();
}

struct Preset {
  std::string name;
  std::vector<Instance> data;
};

std::vector<Preset> presets() {
  return {{"toy1", gen_toy_preset(ToyPreset::kToy1, kSeed)},
          {"toy2", gen_toy_preset(ToyPreset::kToy2, kSeed)},
          {"toy3", gen_toy_preset(ToyPreset::kToy3, kSeed)},
          {"reg", gen_regression(2000, 10, 0.1, 0.1, kSeed).instances}};
}

// A preset under one loss, with its unscreened 1e-10 path on the main grid.
struct Case {
  std::string name;
  ProblemData problem;
  std::vector<DualSolution> oracle;
};

SolverOptions oracle_options() {
  SolverOptions o;
  o.tol = kOracleTol;
  o.max_outer = kOracleSweeps;
  return o;
}

std::string loss_label(LossKind k) { return k == LossKind::kHinge ? "svm" : "lad"; }

// ---------------------------------------------------------------------------

void criterion_safety(int id, const std::string& title, const std::vector<const Case*>& cases,
                      const PathGrid& grid, std::map<std::string, PathReport>* keep, double budget_seconds) {
  const auto start = Clock::now();
  std::size_t violations = 0, pinned = 0;
  std::string detail;
  for (const Case* c : cases) {
    for (Method m : {Method::kDviDual, Method::kDviPrimal}) {
      PathOptions options;
      options.verify = true;
      options.pin_tol = kPinTol;
      const PathReport r = run_path(c->problem, grid, m, options, &c->oracle);
      violations += r.safety_violations;
      for (const PathPoint& p : r.points) pinned += p.n_alpha + p.n_beta;
      detail += c->name + "/" + std::string(to_string(m)) + "=" + std::to_string(r.safety_violations) + " ";
      if (keep != nullptr) (*keep)[c->name + "/" + std::string(to_string(m))] = r;
    }
  }
  const double elapsed = seconds_since(start);
  const bool in_budget = budget_seconds <= 0.0 || elapsed <= budget_seconds;
  verdict(id, violations == 0 && pinned > 0 && in_budget, title,
          "violations " + detail + "pins checked " + std::to_string(pinned) + ", " + fmt(elapsed) + " s");
}

void criterion_equivalence(const std::vector<Case>& cases, const PathGrid& grid) {
  double worst = 0.0;
  std::string worst_at = "-";
  std::size_t nonconverged = 0;
  for (const Case& c : cases) {
    const auto start = Clock::now();
    std::vector<Method> methods{Method::kDviDual, Method::kDviPrimal};
    for (Method m : methods) {
      PathOptions options;
      options.solver.tol = kEquivalenceSolverTol;
      options.solver.max_outer = kOracleSweeps;
      options.verify = true;
      const PathReport r = run_path(c.problem, grid, m, options, &c.oracle);
      nonconverged += r.nonconverged_points;
      for (const PathPoint& p : r.points) {
        if (p.w_rel_divergence > worst) {
          worst = p.w_rel_divergence;
          worst_at = c.name + "/" + std::string(to_string(m)) + " C=" + fmt(p.c);
        }
      }
    }
    progress("equivalence " + c.name + " " + fmt(seconds_since(start)) + " s");
  }
  verdict(3, worst <= kEquivalenceTol, "screened paths match unscreened solutions",
          "max relative w gap " + fmt(worst) + " at " + worst_at + ", tol " + fmt(kEquivalenceTol) +
              ", non-converged points " + std::to_string(nonconverged));
}

void criterion_rejection(const std::map<std::string, PathReport>& runs) {
  const double t1 = runs.at("toy1/dvi-primal").mean_rejection();
  const double t2 = runs.at("toy2/dvi-primal").mean_rejection();
  const double t3 = runs.at("toy3/dvi-primal").mean_rejection();
  const double d1 = runs.at("toy1/dvi-dual").mean_rejection();
  verdict(4, t1 > t2 && t2 > t3 && t1 >= 0.90, "rejection ordering Toy1 > Toy2 > Toy3, Toy1 >= 0.90",
          "dvi-primal mean rejection toy1 " + fmt(t1) + ", toy2 " + fmt(t2) + ", toy3 " + fmt(t3) +
              "; dvi-dual toy1 " + fmt(d1));
}

void criterion_speedup(const ProblemData& toy1, const ProblemData& toy3, const PathGrid& grid) {
  const auto start = Clock::now();
  const TimingComparison a = time_against_plain(toy1, grid, Method::kDviPrimal, {}, 3);
  const TimingComparison b = time_against_plain(toy3, grid, Method::kDviPrimal, {}, 3);
  const double elapsed = seconds_since(start);
  verdict(5, a.speedup >= 5.0 && b.speedup >= 3.0 && elapsed <= 300.0,
          "screened total <= 1/5 of plain on Toy1 and <= 1/3 on Toy3",
          "toy1 " + fmt(a.plain_median) + " s vs " + fmt(a.screened_median) + " s (x" + fmt(a.speedup) + "), toy3 " +
              fmt(b.plain_median) + " s vs " + fmt(b.screened_median) + " s (x" + fmt(b.speedup) + "), " +
              fmt(elapsed) + " s");
}

void criterion_dominance(const ProblemData& toy2, const PathGrid& grid) {
  const MethodComparison cmp = compare_methods(toy2, grid, {Method::kSsnsv, Method::kEssnsv});
  double ss = 0.0, es = 0.0;
  for (std::size_t k = 1; k < grid.size(); ++k) {
    ss += cmp.rejection[0][k];
    es += cmp.rejection[1][k];
  }
  const double denom = static_cast<double>(grid.size() - 1);
  verdict(6, cmp.dominance_checked && cmp.dominance_holds && cmp.dominance_strict_points >= 1,
          "ESSNSV screened set contains SSNSV's at every point, strictly at >= 1",
          "strictly larger at " + std::to_string(cmp.dominance_strict_points) + " of " +
              std::to_string(grid.size() - 1) + " points; mean rejection SSNSV " + fmt(ss / denom) + ", ESSNSV " +
              fmt(es / denom));
}

Eigen::VectorXd random_vector(Rng& rng, Eigen::Index n, double scale = 1.0) {
  Eigen::VectorXd v(n);
  for (Eigen::Index j = 0; j < n; ++j) v[j] = scale * rng.normal();
  return v;
}

void criterion_dome() {
  Rng rng(kSeed);
  double worst_dome = 0.0;
  for (int trial = 0; trial < 200; ++trial) {
    const Eigen::Index n = 1 + trial % 3;
    dvi::testing::DomeSpec spec;
    spec.o = random_vector(rng, n);
    spec.r = 0.2 + 2.0 * rng.uniform();
    spec.u = random_vector(rng, n);
    // Signed hyperplane offset t * r from o; t > 1 leaves the whole ball inside.
    const double t = rng.uniform() < 0.1 ? 1.5 + rng.uniform() : -0.95 + 1.9 * rng.uniform();
    spec.d = spec.u.dot(spec.o) + t * spec.r * spec.u.norm();
    const DomeRegion region(spec.u, spec.d, spec.o, spec.r);
    const Eigen::VectorXd v = random_vector(rng, n);
    worst_dome = std::max(worst_dome, std::abs(dome_min(v, region) - dvi::testing::dome_grid_min(v, spec)));
    worst_dome = std::max(worst_dome, std::abs(dome_max(v, region) + dvi::testing::dome_grid_min(-v, spec)));
  }

  double worst_closed = 0.0;
  int states = 0;
  while (states < 200) {
    const Eigen::Index n = 1 + states % 5;
    const ProblemData p = dvi::testing::random_problem(rng, 20, static_cast<std::size_t>(n), LossKind::kHinge);
    const Eigen::VectorXd w_hat = random_vector(rng, n, 2.0);
    const Eigen::VectorXd wa = random_vector(rng, n, 2.0);
    if (wa.squaredNorm() > wa.dot(w_hat)) continue;  // w_a must lie in the ESSNSV ball
    ++states;
    const SPathState s = make_spath_state(p, wa, w_hat);
    const auto closed = essnsv_bounds(p, s);
    const auto generic = essnsv_bounds_via_dome(p, s);
    for (std::size_t i = 0; i < closed.size(); ++i) {
      worst_closed = std::max(worst_closed, std::abs(closed[i].lower - generic[i].lower));
      worst_closed = std::max(worst_closed, std::abs(closed[i].upper - generic[i].upper));
    }
  }
  verdict(7, worst_dome <= 1e-5 && worst_closed <= 1e-9, "dome closed form vs grid oracle, ESSNSV closed form vs dome",
          "200 regions max gap " + fmt(worst_dome) + " (tol 1e-5); 200 states max gap " + fmt(worst_closed) +
              " (tol 1e-9)");
}

void criterion_solver_oracle() {
  Rng rng(kSeed);
  SolverOptions tight;
  tight.tol = kOracleTol;
  tight.max_outer = kOracleSweeps;
  double worst = 0.0, worst_reduce = 0.0;
  int reduce_checks = 0;
  for (int trial = 0; trial < 50; ++trial) {
    const auto l = static_cast<std::size_t>(1 + trial % 4);
    const auto n = static_cast<std::size_t>(1 + (trial / 4) % 3);
    const LossKind kind = trial % 2 == 0 ? LossKind::kHinge : LossKind::kAbsolute;
    const ProblemData p = dvi::testing::random_problem(rng, l, n, kind);
    const double c = 0.1 + 1.9 * rng.uniform();
    const double lo = p.loss().alpha(), hi = p.loss().beta();
    const DualSolution s = solve_dual(p, c, nullptr, {}, tight);
    const auto qp = dvi::testing::BoxQp::from_rows(p.z(), p.ybar(), c, lo, hi);
    const dvi::testing::QpOptimum grid = dvi::testing::grid_oracle(qp, 1e-3);
    worst = std::max(worst, std::abs(s.objective - grid.value));

    // Pin every coordinate the full optimum leaves on a bound, solve the
    // reduced quadratic by the oracle and re-insert.
    FixedAssignments fixed(p.l());
    for (Eigen::Index i = 0; i < p.l(); ++i) {
      if (s.theta[i] == lo) fixed.pin(i, Verdict::kPinAlpha);
      if (s.theta[i] == hi) fixed.pin(i, Verdict::kPinBeta);
    }
    const ReducedProblem r = reduce_problem(p, fixed, c);
    Eigen::VectorXd full_theta;
    if (r.size() > 0) {
      const dvi::testing::BoxQp reduced{c * r.gram(), r.yhat(), lo, hi};
      full_theta = r.expand(dvi::testing::active_set_oracle(reduced).t);
    } else {
      full_theta = r.expand(Eigen::VectorXd(0));
    }
    worst_reduce = std::max(worst_reduce, std::abs(dual_objective(p, c, full_theta) - s.objective));
    const DualSolution pinned = solve_dual(p, c, nullptr, fixed, tight);
    worst_reduce = std::max(worst_reduce, std::abs(pinned.objective - s.objective));
    ++reduce_checks;
  }
  verdict(8, worst <= 1e-4 && worst_reduce <= 1e-8, "solver matches exhaustive grid search; reduce re-insertion",
          "50 problems max objective gap " + fmt(worst) + " (tol 1e-4); re-insertion max gap " + fmt(worst_reduce) +
              " over " + std::to_string(reduce_checks) + " problems");
}

void criterion_degenerate(const std::vector<Case>& cases, const PathGrid& grid) {
  std::size_t mismatches = 0, compared = 0, boundary = 0, bad_objective = 0;
  std::size_t wide_disagreements = 0, disagreements = 0;
  for (const Case& c : cases) {
    const ProblemData& p = c.problem;
    for (std::size_t k : {std::size_t{0}, grid.size() / 3, 2 * grid.size() / 3, grid.size() - 1}) {
      const DualSolution& s = c.oracle[k];
      const double cv = grid.values[k];
      const ScreeningResult r = screen_dual(p, cv, cv, s);
      const PrimalSolution w = primal_from_dual(p, s);
      const KktPartition part = kkt_partition(p, w, 0.0);
      std::vector<Verdict> expected(static_cast<std::size_t>(p.l()), Verdict::kUnknown);
      for (Eigen::Index i : part.r) expected[static_cast<std::size_t>(i)] = Verdict::kPinAlpha;
      for (Eigen::Index i : part.l) expected[static_cast<std::size_t>(i)] = Verdict::kPinBeta;
      const Eigen::VectorXd margin = -(p.z() * w.w) - p.ybar();
      FixedAssignments fixed = r.to_fixed();
      for (Eigen::Index i = 0; i < p.l(); ++i) {
        if (std::abs(margin[i]) < kRuleMargin) {
          fixed.pin(i, Verdict::kUnknown);
          ++boundary;
          continue;
        }
        ++compared;
        if (r.verdicts[static_cast<std::size_t>(i)] != expected[static_cast<std::size_t>(i)]) ++mismatches;
      }
      const DualSolution pinned = solve_dual(p, cv, nullptr, fixed, oracle_options());
      if (std::abs(pinned.objective - s.objective) > 1e-8 * (1.0 + std::abs(s.objective))) ++bad_objective;
    }

    for (std::size_t k = 0; k + 1 < grid.size(); ++k) {
      const double ck = grid.values[k], cn = grid.values[k + 1];
      const ScreeningResult d = screen_dual(p, ck, cn, c.oracle[k]);
      const ScreeningResult q = screen_primal(p, ck, cn, primal_from_dual(p, c.oracle[k]));
      const auto bounds = dual_rule_bounds(p, ck, cn, c.oracle[k]);
      for (std::size_t i = 0; i < d.verdicts.size(); ++i) {
        if (d.verdicts[i] == q.verdicts[i]) continue;
        ++disagreements;
        const double y = p.ybar()[static_cast<Eigen::Index>(i)];
        if (std::min(std::abs(bounds[i].lower - y), std::abs(bounds[i].upper - y)) >= kRuleMargin) {
          ++wide_disagreements;
        }
      }
    }
  }
  verdict(9, mismatches == 0 && bad_objective == 0 && wide_disagreements == 0 && compared > 0,
          "radius-0 screening gives exact KKT pins; dual and primal rules agree",
          "radius-0: " + std::to_string(mismatches) + " mismatches over " + std::to_string(compared) + " instances (" +
              std::to_string(boundary) + " on the margin), " + std::to_string(bad_objective) +
              " wrong pinned objectives; dual vs primal: " + std::to_string(disagreements) + " disagreements, " +
              std::to_string(wide_disagreements) + " beyond margin " + fmt(kRuleMargin));
}

}  // namespace

int main() {
  const auto start = Clock::now();
  const PathGrid grid = log_grid(1e-2, 10.0, 100);

  std::vector<Case> cases;
  for (Preset& preset : presets()) {
    for (LossKind kind : {LossKind::kHinge, LossKind::kAbsolute}) {
      if (preset.name == "reg" && kind == LossKind::kHinge) continue;  // real-valued labels
      const auto t = Clock::now();
      ProblemData problem = build_problem(preset.data, LossSpec(kind));
      std::vector<DualSolution> oracle = reference_path(problem, grid, oracle_options());
      const std::string name = preset.name + "-" + loss_label(kind);
      progress("oracle " + name + " " + fmt(seconds_since(t)) + " s");
      cases.push_back({name, std::move(problem), std::move(oracle)});
    }
  }
  auto find = [&](const std::string& name) -> const Case& {
    return *std::find_if(cases.begin(), cases.end(), [&](const Case& c) { return c.name == name; });
  };

  std::map<std::string, PathReport> svm_runs;
  {
    std::map<std::string, PathReport> named;
    criterion_safety(1, "SVM safety on Toy1-3, dvi-dual and dvi-primal",
                     {&find("toy1-svm"), &find("toy2-svm"), &find("toy3-svm")}, grid, &named, 600.0);
    for (auto& [key, report] : named) svm_runs[key.substr(0, 4) + key.substr(key.find('/'))] = report;
  }
  criterion_safety(2, "LAD safety on gen_regression(2000, 10, 0.1, 10%)", {&find("reg-lad")}, grid, nullptr, 0.0);
  criterion_equivalence(cases, grid);
  criterion_rejection(svm_runs);
  criterion_speedup(find("toy1-svm").problem, find("toy3-svm").problem, grid);
  criterion_dominance(find("toy2-svm").problem, grid);
  criterion_dome();
  criterion_solver_oracle();
  criterion_degenerate(cases, grid);

  std::fprintf(stderr, "acceptance finished in %.1f s\n", seconds_since(start));
  std::printf("%s: %d criteria failed\n", failures == 0 ? "ALL PASS" : "FAILURES", failures);
  return failures == 0 ? 0 : 1;
}
