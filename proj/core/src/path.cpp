#include "dvi/path.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <string>

#include "dvi/error.hpp"
#include "dvi/screen_ssnsv.hpp"

namespace dvi {
namespace {

class Stopwatch {
 public:
  Stopwatch() : start_(std::chrono::steady_clock::now()) {}
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

bool uses_spath(Method method) { return method == Method::kSsnsv || method == Method::kEssnsv; }

void validate_grid(const PathGrid& grid) {
  if (grid.values.empty()) throw Error(ErrorCode::kInvalidArgument, "grid is empty");
  for (std::size_t j = 0; j < grid.values.size(); ++j) {
    const double c = grid.values[j];
    if (!(c > 0.0) || !std::isfinite(c)) {
      throw Error(ErrorCode::kInvalidArgument, "grid values must be positive and finite");
    }
    if (j > 0 && !(c > grid.values[j - 1])) {
      throw Error(ErrorCode::kInvalidArgument, "grid values must be strictly increasing");
    }
  }
}

void validate_method(const ProblemData& problem, Method method) {
  if (uses_spath(method) && problem.loss().kind() != LossKind::kHinge) {
    throw Error(ErrorCode::kInvalidArgument,
                std::string(to_string(method)) + " is only defined for the hinge loss");
  }
}

double median(std::vector<double> xs) {
  if (xs.empty()) return 0.0;
  std::sort(xs.begin(), xs.end());
  const std::size_t mid = xs.size() / 2;
  return xs.size() % 2 == 1 ? xs[mid] : 0.5 * (xs[mid - 1] + xs[mid]);
}

double relative_gap(const Eigen::VectorXd& w, const Eigen::VectorXd& reference) {
  const double diff = (w - reference).norm();
  const double scale = reference.norm();
  return scale > 0.0 ? diff / scale : diff;
}

void check_grid_size(std::size_t got, std::size_t want, const char* what) {
  if (got != want) {
    throw Error(ErrorCode::kDimensionMismatch,
                std::string(what) + " has " + std::to_string(got) + " entries, grid has " + std::to_string(want));
  }
}

}  // namespace

PathGrid log_grid(double c_min, double c_max, std::size_t k) {
  if (!(c_min > 0.0) || !(c_max > c_min) || !std::isfinite(c_max) || k < 2) {
    throw Error(ErrorCode::kInvalidArgument, "log grid needs 0 < c_min < c_max and k >= 2");
  }
  PathGrid grid;
  grid.scale = GridScale::kLog;
  grid.values.resize(k);
  const double ratio = c_max / c_min;
  for (std::size_t j = 0; j < k; ++j) {
    grid.values[j] = c_min * std::pow(ratio, static_cast<double>(j) / static_cast<double>(k - 1));
  }
  grid.values.front() = c_min;
  grid.values.back() = c_max;
  return grid;
}

PathGrid linear_grid(double c_min, double c_max, std::size_t k) {
  if (!(c_min > 0.0) || !(c_max > c_min) || !std::isfinite(c_max) || k < 2) {
    throw Error(ErrorCode::kInvalidArgument, "linear grid needs 0 < c_min < c_max and k >= 2");
  }
  PathGrid grid;
  grid.scale = GridScale::kLinear;
  grid.values.resize(k);
  for (std::size_t j = 0; j < k; ++j) {
    grid.values[j] = c_min + (c_max - c_min) * static_cast<double>(j) / static_cast<double>(k - 1);
  }
  grid.values.back() = c_max;
  return grid;
}

PathGrid explicit_grid(std::vector<double> values) {
  PathGrid grid{std::move(values), GridScale::kExplicit};
  validate_grid(grid);
  return grid;
}

std::string_view to_string(Method method) {
  switch (method) {
    case Method::kNone:
      return "none";
    case Method::kDviDual:
      return "dvi-dual";
    case Method::kDviPrimal:
      return "dvi-primal";
    case Method::kSsnsv:
      return "ssnsv";
    case Method::kEssnsv:
      return "essnsv";
  }
  return "none";
}

Method parse_method(std::string_view name) {
  for (Method m : {Method::kNone, Method::kDviDual, Method::kDviPrimal, Method::kSsnsv, Method::kEssnsv}) {
    if (to_string(m) == name) return m;
  }
  throw Error(ErrorCode::kInvalidArgument, "unknown method '" + std::string(name) + "'");
}

double PathReport::mean_rejection() const {
  double sum = 0.0;
  std::size_t count = 0;
  for (const PathPoint& p : points) {
    if (!p.screened) continue;
    sum += p.rejection_ratio;
    ++count;
  }
  return count == 0 ? 0.0 : sum / static_cast<double>(count);
}

std::vector<Violation> verify_safety(const ProblemData& problem, const ScreeningResult& verdicts,
                                     const DualSolution& exact, double pin_tol) {
  std::vector<Violation> out;
  if (verdicts.verdicts.empty()) return out;
  if (verdicts.verdicts.size() != static_cast<std::size_t>(exact.theta.size())) {
    throw Error(ErrorCode::kDimensionMismatch, "verdicts and exact solution differ in length");
  }
  const double alpha = problem.loss().alpha();
  const double beta = problem.loss().beta();
  for (std::size_t i = 0; i < verdicts.verdicts.size(); ++i) {
    const Verdict v = verdicts.verdicts[i];
    const double theta = exact.theta[static_cast<Eigen::Index>(i)];
    const bool bad = (v == Verdict::kPinAlpha && std::abs(theta - alpha) > pin_tol) ||
                     (v == Verdict::kPinBeta && std::abs(theta - beta) > pin_tol);
    if (bad) out.push_back({static_cast<Eigen::Index>(i), v, theta});
  }
  return out;
}

std::vector<DualSolution> reference_path(const ProblemData& problem, const PathGrid& grid,
                                         const SolverOptions& options) {
  validate_grid(grid);
  std::vector<DualSolution> out;
  out.reserve(grid.size());
  for (std::size_t k = 0; k < grid.size(); ++k) {
    out.push_back(solve_dual(problem, grid.values[k], k == 0 ? nullptr : &out.back(), FixedAssignments{}, options));
  }
  return out;
}

ScreeningResult screen_step(const ProblemData& problem, Method method, const DualSolution& previous,
                            double c_next, const DualSolution* endpoint, bool* skipped) {
  if (skipped != nullptr) *skipped = false;
  switch (method) {
    case Method::kNone:
      return ScreeningResult::none(problem.l());
    case Method::kDviDual:
      return screen_dual(problem, previous.c, c_next, previous);
    case Method::kDviPrimal:
      return screen_primal(problem, previous.c, c_next, primal_from_dual(problem, previous));
    case Method::kSsnsv:
    case Method::kEssnsv: {
      validate_method(problem, method);
      if (endpoint == nullptr) {
        throw Error(ErrorCode::kInvalidArgument, "SSNSV-family screening needs the largest-C solution");
      }
      const SPathState state = make_spath_state(problem, primal_from_dual(problem, previous).w,
                                                primal_from_dual(problem, *endpoint).w);
      if (method == Method::kEssnsv && state.w_sa.squaredNorm() == 0.0) {
        if (skipped != nullptr) *skipped = true;
        return ScreeningResult::none(problem.l());
      }
      try {
        return method == Method::kSsnsv ? ssnsv_screen(problem, state) : essnsv_screen(problem, state);
      } catch (const Error& e) {
        if (e.code() != ErrorCode::kInfeasibleRegion) throw;
        if (skipped != nullptr) *skipped = true;
        return ScreeningResult::none(problem.l());
      }
    }
  }
  return ScreeningResult::none(problem.l());
}

namespace {

// Unpins every coordinate whose KKT condition fails on the full problem.
std::size_t release_bad_pins(const ProblemData& problem, const DualSolution& sol, FixedAssignments& fixed,
                             double tol) {
  const Eigen::VectorXd grad = sol.c * (problem.z() * z_theta_of(problem, sol)) - problem.ybar();
  std::size_t released = 0;
  for (Eigen::Index i = 0; i < problem.l(); ++i) {
    const Verdict v = fixed.at(i);
    if ((v == Verdict::kPinAlpha && grad[i] < -tol) || (v == Verdict::kPinBeta && grad[i] > tol)) {
      fixed.pin(i, Verdict::kUnknown);
      ++released;
    }
  }
  return released;
}

}  // namespace

PathReport run_path(const ProblemData& problem, const PathGrid& grid, Method method,
                    const PathOptions& options, const std::vector<DualSolution>* oracle) {
  validate_grid(grid);
  validate_method(problem, method);
  const std::size_t k_count = grid.size();

  std::vector<DualSolution> own_oracle;
  const std::vector<DualSolution>* reference = nullptr;
  if (options.verify) {
    if (oracle != nullptr) {
      check_grid_size(oracle->size(), k_count, "oracle path");
      reference = oracle;
    } else {
      SolverOptions oracle_options;
      oracle_options.tol = options.oracle_tol;
      oracle_options.max_outer = options.oracle_max_outer;
      own_oracle = reference_path(problem, grid, oracle_options);
      reference = &own_oracle;
    }
  }

  PathReport report;
  report.method = method;
  report.loss = problem.loss().kind();
  report.l = static_cast<std::size_t>(problem.l());
  report.n = static_cast<std::size_t>(problem.n());
  report.verified = options.verify;
  report.points.reserve(k_count);

  auto finish_point = [&](PathPoint& point, const DualSolution& sol, std::size_t k) {
    point.iterations = sol.iterations;
    point.converged = sol.converged;
    point.objective = sol.objective;
    if (!sol.converged) ++report.nonconverged_points;
    if (options.keep_primal || reference != nullptr) {
      Eigen::VectorXd w = -sol.c * sol.z_theta;
      if (reference != nullptr) {
        const DualSolution& exact = (*reference)[k];
        point.w_rel_divergence = relative_gap(w, -exact.c * exact.z_theta);
      }
      if (options.keep_primal) report.w.push_back(std::move(w));
    }
    report.points.push_back(point);
  };

  Stopwatch init_clock;
  DualSolution current = solve_dual(problem, grid.values[0], nullptr, FixedAssignments{}, options.solver);
  const double first_solve = init_clock.seconds();
  std::optional<DualSolution> endpoint;
  if (uses_spath(method)) {
    endpoint = solve_dual(problem, grid.values.back(), nullptr, FixedAssignments{}, options.solver);
  }
  report.init_seconds = init_clock.seconds();

  {
    PathPoint first;
    first.c = grid.values[0];
    first.solve_seconds = first_solve;
    finish_point(first, current, 0);
  }

  for (std::size_t k = 1; k < k_count; ++k) {
    PathPoint point;
    point.c = grid.values[k];

    FixedAssignments fixed;
    ScreeningResult verdicts;
    if (method != Method::kNone) {
      Stopwatch screen_clock;
      verdicts = screen_step(problem, method, current, point.c, endpoint ? &*endpoint : nullptr,
                             &point.screen_skipped);
      fixed = verdicts.to_fixed();
      point.screen_seconds = screen_clock.seconds();
      point.screened = true;
      point.n_alpha = verdicts.n_alpha;
      point.n_beta = verdicts.n_beta;
      point.rejection_ratio = verdicts.rejection_ratio();
    }

    Stopwatch solve_clock;
    DualSolution next = solve_dual(problem, point.c, &current, fixed, options.solver);
    if (options.recheck_pins && !fixed.empty()) {
      // Each pass releases at least one pin, so this ends.
      while (const std::size_t released = release_bad_pins(problem, next, fixed, options.solver.tol)) {
        point.released += released;
        next = solve_dual(problem, point.c, &next, fixed, options.solver);
      }
    }
    point.solve_seconds = solve_clock.seconds();

    if (reference != nullptr && method != Method::kNone) {
      point.violations = verify_safety(problem, verdicts, (*reference)[k], options.pin_tol).size();
      report.safety_violations += point.violations;
    }
    report.screen_seconds += point.screen_seconds;
    report.solve_seconds += point.solve_seconds;
    current = std::move(next);
    finish_point(point, current, k);
  }
  report.total_seconds = report.init_seconds + report.screen_seconds + report.solve_seconds;
  return report;
}

TimingComparison time_against_plain(const ProblemData& problem, const PathGrid& grid, Method method,
                                    const PathOptions& options, int repeats) {
  if (repeats < 1) throw Error(ErrorCode::kInvalidArgument, "repeats must be at least 1");
  PathOptions timed = options;
  timed.verify = false;
  timed.keep_primal = false;
  TimingComparison out;
  for (int r = 0; r < repeats; ++r) {
    out.plain_runs.push_back(run_path(problem, grid, Method::kNone, timed).total_seconds);
    out.screened_runs.push_back(run_path(problem, grid, method, timed).total_seconds);
  }
  out.plain_median = median(out.plain_runs);
  out.screened_median = median(out.screened_runs);
  out.speedup = out.screened_median > 0.0 ? out.plain_median / out.screened_median : 0.0;
  return out;
}

MethodComparison compare_methods(const ProblemData& problem, const PathGrid& grid,
                                 const std::vector<Method>& methods, const PathOptions& options) {
  validate_grid(grid);
  for (Method m : methods) validate_method(problem, m);

  MethodComparison out;
  out.c = grid.values;
  out.methods = methods;
  const std::size_t k_count = grid.size();
  const std::vector<DualSolution> shared = reference_path(problem, grid, options.solver);
  const DualSolution& endpoint = shared.back();

  // verdicts[m][k] on the shared states, kept for the pairwise checks.
  std::vector<std::vector<ScreeningResult>> verdicts(methods.size());
  for (std::size_t m = 0; m < methods.size(); ++m) {
    std::vector<double> column(k_count, 0.0);
    verdicts[m].resize(k_count);
    for (std::size_t k = 1; k < k_count; ++k) {
      verdicts[m][k] = screen_step(problem, methods[m], shared[k - 1], grid.values[k], &endpoint);
      column[k] = verdicts[m][k].rejection_ratio();
    }
    out.rejection.push_back(std::move(column));
  }

  auto index_of = [&](Method m) -> std::optional<std::size_t> {
    const auto it = std::find(methods.begin(), methods.end(), m);
    if (it == methods.end()) return std::nullopt;
    return static_cast<std::size_t>(it - methods.begin());
  };

  if (const auto s = index_of(Method::kSsnsv), e = index_of(Method::kEssnsv); s && e) {
    out.dominance_checked = true;
    for (std::size_t k = 1; k < k_count; ++k) {
      const auto& weak = verdicts[*s][k].verdicts;
      const auto& strong = verdicts[*e][k].verdicts;
      for (std::size_t i = 0; i < weak.size(); ++i) {
        if (weak[i] != Verdict::kUnknown && strong[i] != weak[i]) out.dominance_holds = false;
      }
      const auto weak_count = verdicts[*s][k].n_alpha + verdicts[*s][k].n_beta;
      const auto strong_count = verdicts[*e][k].n_alpha + verdicts[*e][k].n_beta;
      if (strong_count > weak_count) ++out.dominance_strict_points;
    }
  }

  if (const auto d = index_of(Method::kDviDual), p = index_of(Method::kDviPrimal); d && p) {
    out.dvi_equivalence_checked = true;
    for (std::size_t k = 1; k < k_count; ++k) {
      const auto bounds = dual_rule_bounds(problem, shared[k - 1].c, grid.values[k], shared[k - 1]);
      for (std::size_t i = 0; i < bounds.size(); ++i) {
        if (verdicts[*d][k].verdicts[i] == verdicts[*p][k].verdicts[i]) continue;
        ++out.dvi_disagreements;
        const double y = problem.ybar()[static_cast<Eigen::Index>(i)];
        const double margin = std::min(std::abs(bounds[i].lower - y), std::abs(bounds[i].upper - y));
        if (margin >= 1e-8) ++out.dvi_disagreements_wide_margin;
      }
    }
  }

  for (Method m : methods) out.reports.push_back(run_path(problem, grid, m, options));
  return out;
}

void emit_report(const PathReport& report, ReportFormat format, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::kIo, "cannot open " + path.string() + " for writing");
  emit_report(report, format, out);
  if (!out) throw Error(ErrorCode::kIo, "write to " + path.string() + " failed");
}

}  // namespace dvi
