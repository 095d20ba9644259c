#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "dvi/problem.hpp"

namespace dvi {

// Screening verdict for one instance. PinAlpha fixes theta_i = alpha (i in R),
// PinBeta fixes theta_i = beta (i in L).
enum class Verdict : std::uint8_t { kUnknown, kPinAlpha, kPinBeta };

// Dual coordinates known in advance. Pinned indices are dropped from the
// coordinate sweep; the rest form the solve set.
class FixedAssignments {
 public:
  FixedAssignments() = default;
  explicit FixedAssignments(Eigen::Index l) : pins_(static_cast<std::size_t>(l), Verdict::kUnknown) {}
  explicit FixedAssignments(std::vector<Verdict> pins) : pins_(std::move(pins)) {}

  // An empty assignment means "nothing pinned" for a problem of any size.
  bool empty() const { return pins_.empty(); }
  std::size_t size() const { return pins_.size(); }
  Verdict at(Eigen::Index i) const {
    return pins_.empty() ? Verdict::kUnknown : pins_[static_cast<std::size_t>(i)];
  }
  bool pinned(Eigen::Index i) const { return at(i) != Verdict::kUnknown; }
  void pin(Eigen::Index i, Verdict v) { pins_.at(static_cast<std::size_t>(i)) = v; }
  std::size_t pinned_count() const;
  const std::vector<Verdict>& pins() const { return pins_; }

 private:
  std::vector<Verdict> pins_;
};

struct SolverOptions {
  // Stop once the largest projected-gradient magnitude over free coordinates
  // is at most tol.
  double tol = 1e-6;
  std::int64_t max_outer = 1'000'000;
  // Record the dual objective after each outer iteration.
  bool track_objective = false;
};

struct DualSolution {
  Eigen::VectorXd theta;
  double c = 0.0;
  double objective = 0.0;
  std::int64_t iterations = 0;
  bool converged = false;
  double max_kkt_violation = 0.0;
  // Z^T theta, refreshed from scratch at termination. Leave empty when theta
  // is set by hand; readers then recompute it.
  Eigen::VectorXd z_theta;
  std::vector<double> objective_trace;
};

struct PrimalSolution {
  Eigen::VectorXd w;
  double c = 0.0;
};

// Partition of instances by the sign of -<w, z_i> - ybar_i (R: >, E: =, L: <).
struct KktPartition {
  std::vector<Eigen::Index> r;
  std::vector<Eigen::Index> e;
  std::vector<Eigen::Index> l;
  double tol = 0.0;
};

/**
 * Cyclic dual coordinate descent for
 *
 *   min_{theta in [alpha, beta]^l}  (C/2) ||Z^T theta||^2 - <ybar, theta>
 *
 * with the coordinates in `fixed` held at their pinned endpoint. Iterates on
 * the free set only, maintaining v = Z^T theta so that each coordinate step
 * costs O(n). If `warm` is given it seeds theta (clipped into the box) before
 * the pins are applied; otherwise the solve starts from theta = 0.
 *
 * Non-convergence within max_outer is reported through `converged`, not thrown.
 */
DualSolution solve_dual(const ProblemData& problem, double c, const DualSolution* warm,
                        const FixedAssignments& fixed, const SolverOptions& options = {});

// One exact coordinate minimisation. `z_theta` must equal Z^T theta; both are
// updated in place. Returns the new value of theta_i.
double coordinate_step(const ProblemData& problem, double c, Eigen::VectorXd& theta,
                       Eigen::VectorXd& z_theta, Eigen::Index i);

double dual_objective(const ProblemData& problem, double c, const Eigen::VectorXd& theta);

// w = -C Z^T theta.
PrimalSolution primal_from_dual(const ProblemData& problem, const DualSolution& dual);

// dual.z_theta when it has length n, otherwise Z^T dual.theta.
Eigen::VectorXd z_theta_of(const ProblemData& problem, const DualSolution& dual);

KktPartition kkt_partition(const ProblemData& problem, const PrimalSolution& primal, double tol);

// The quadratic left over once the pinned coordinates are substituted:
//   min (C/2) t^T G11 t - yhat^T t,  t in [alpha, beta]^|free|
// with yhat = ybar_free - C G12 theta_pinned.
class ReducedProblem {
 public:
  const std::vector<Eigen::Index>& free_index() const { return free_index_; }
  const Eigen::VectorXd& yhat() const { return yhat_; }
  double c() const { return c_; }
  Eigen::Index size() const { return static_cast<Eigen::Index>(free_index_.size()); }

  // G11 = Z_free Z_free^T. Dense; intended for small problems and checks.
  Eigen::MatrixXd gram() const;
  double objective(const Eigen::VectorXd& theta_free) const;
  // Re-insert the pinned values to obtain a full-length theta.
  Eigen::VectorXd expand(const Eigen::VectorXd& theta_free) const;

 private:
  friend ReducedProblem reduce_problem(const ProblemData&, const FixedAssignments&, double);

  RowMatrix z_free_;
  double c_ = 0.0;
  std::vector<Eigen::Index> free_index_;
  Eigen::VectorXd yhat_;
  Eigen::VectorXd pinned_theta_;  // full length, zero on free coordinates
};

ReducedProblem reduce_problem(const ProblemData& problem, const FixedAssignments& fixed, double c);

}  // namespace dvi
