#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "dvi/problem.hpp"
#include "dvi/screen_dvi.hpp"
#include "dvi/solver.hpp"

namespace dvi {

enum class GridScale { kLog, kLinear, kExplicit };

// Strictly increasing positive parameter values C_1 < ... < C_K.
struct PathGrid {
  std::vector<double> values;
  GridScale scale = GridScale::kExplicit;

  std::size_t size() const { return values.size(); }
};

// values[j] = c_min (c_max / c_min)^(j / (k - 1)); endpoints are exact.
PathGrid log_grid(double c_min, double c_max, std::size_t k);
PathGrid linear_grid(double c_min, double c_max, std::size_t k);
PathGrid explicit_grid(std::vector<double> values);

enum class Method { kNone, kDviDual, kDviPrimal, kSsnsv, kEssnsv };

std::string_view to_string(Method method);
Method parse_method(std::string_view name);

struct PathOptions {
  SolverOptions solver;
  // Re-solve every grid point without screening at oracle_tol and check the
  // screened verdicts and solutions against it.
  bool verify = false;
  double oracle_tol = 1e-10;
  std::int64_t oracle_max_outer = 10'000'000;
  double pin_tol = 1e-6;
  // Keep w at every grid point in PathReport::w.
  bool keep_primal = false;
  // After each screened solve, release pins whose full-problem gradient has
  // the wrong sign by more than solver.tol and solve again. Guards against
  // pins decided on exact ties.
  bool recheck_pins = false;
};

struct PathPoint {
  double c = 0.0;
  std::size_t n_alpha = 0;
  std::size_t n_beta = 0;
  double rejection_ratio = 0.0;
  std::int64_t iterations = 0;
  bool converged = false;
  double objective = 0.0;
  double screen_seconds = 0.0;
  double solve_seconds = 0.0;
  // False for the first point (and every point of Method::kNone).
  bool screened = false;
  // The rule's region was numerically empty at this point; nothing was pinned.
  bool screen_skipped = false;
  std::size_t violations = 0;
  // ||w - w_oracle|| / ||w_oracle||, verify mode only.
  double w_rel_divergence = 0.0;
  // Pins dropped by the recheck (recheck_pins only).
  std::size_t released = 0;
};

struct TimingComparison {
  std::vector<double> plain_runs;
  std::vector<double> screened_runs;
  double plain_median = 0.0;
  double screened_median = 0.0;
  double speedup = 0.0;
};

struct PathReport {
  Method method = Method::kNone;
  LossKind loss = LossKind::kHinge;
  std::size_t l = 0;
  std::size_t n = 0;
  bool verified = false;
  std::vector<PathPoint> points;

  // Unscreened solves needed before the rule can run: C_1, plus C_K for the
  // SSNSV family. Included in total_seconds.
  double init_seconds = 0.0;
  double screen_seconds = 0.0;
  double solve_seconds = 0.0;
  double total_seconds = 0.0;
  std::size_t safety_violations = 0;
  std::size_t nonconverged_points = 0;

  std::vector<Eigen::VectorXd> w;
  std::optional<TimingComparison> timing;

  // Mean rejection ratio over the points where a rule was applied.
  double mean_rejection() const;
};

struct Violation {
  Eigen::Index index = 0;
  Verdict verdict = Verdict::kUnknown;
  double theta = 0.0;
};

// Pins that disagree with `exact` by more than pin_tol.
std::vector<Violation> verify_safety(const ProblemData& problem, const ScreeningResult& verdicts,
                                     const DualSolution& exact, double pin_tol = 1e-6);

// Unscreened solves along the grid, each warm-started from the previous one.
std::vector<DualSolution> reference_path(const ProblemData& problem, const PathGrid& grid,
                                         const SolverOptions& options);

/**
 * Rule verdicts for moving from `previous` (solved at grid point c_k) to
 * c_next. `endpoint` is the solution at the largest grid value; only the
 * SSNSV family reads it. Sets *skipped when the rule's region is
 * numerically empty, in which case nothing is pinned.
 */
ScreeningResult screen_step(const ProblemData& problem, Method method, const DualSolution& previous,
                            double c_next, const DualSolution* endpoint, bool* skipped = nullptr);

// Solve along the grid, screening each point from the previous solution.
// `oracle`, when given in verify mode, replaces the internal reference solves.
PathReport run_path(const ProblemData& problem, const PathGrid& grid, Method method,
                    const PathOptions& options = {},
                    const std::vector<DualSolution>* oracle = nullptr);

// Median of `repeats` timed runs of the plain path and of the screened path.
TimingComparison time_against_plain(const ProblemData& problem, const PathGrid& grid, Method method,
                                    const PathOptions& options, int repeats = 3);

struct MethodComparison {
  std::vector<double> c;
  std::vector<Method> methods;
  // rejection[m][k]: rule methods[m] applied at grid point k to the shared
  // reference solution at k - 1. Entry 0 is always 0.
  std::vector<std::vector<double>> rejection;
  std::vector<PathReport> reports;

  // ESSNSV vs SSNSV on identical states; set when both are compared.
  bool dominance_checked = false;
  bool dominance_holds = true;
  std::size_t dominance_strict_points = 0;

  // DVI dual vs primal rule on identical states; set when both are compared.
  bool dvi_equivalence_checked = false;
  std::size_t dvi_disagreements = 0;           // any verdict mismatch
  std::size_t dvi_disagreements_wide_margin = 0;  // mismatches with margin >= 1e-8
};

MethodComparison compare_methods(const ProblemData& problem, const PathGrid& grid,
                                 const std::vector<Method>& methods, const PathOptions& options = {});

enum class ReportFormat { kJson, kCsv };

inline constexpr int kReportSchemaVersion = 1;

void emit_report(const PathReport& report, ReportFormat format, std::ostream& out);
// Writes to a file; throws dvi::Error on I/O failure.
void emit_report(const PathReport& report, ReportFormat format, const std::filesystem::path& path);
void emit_comparison(const MethodComparison& comparison, ReportFormat format, std::ostream& out);

}  // namespace dvi
