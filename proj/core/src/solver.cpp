#include "dvi/solver.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "dvi/error.hpp"

namespace dvi {
namespace {

double pinned_value(const LossSpec& loss, Verdict v) {
  return v == Verdict::kPinAlpha ? loss.alpha() : loss.beta();
}

double projected_gradient(double gradient, double theta_i, const BoxInterval& box) {
  if (theta_i <= box.lo) return std::min(gradient, 0.0);
  if (theta_i >= box.hi) return std::max(gradient, 0.0);
  return gradient;
}

// Minimiser of (C/2) G_ii t^2 + g t over theta_i + t in the box, returned as
// the new coordinate value.
double step_target(double theta_i, double gradient, double c, double gram_ii, double ybar_i,
                   const BoxInterval& box) {
  if (gram_ii > 0.0) return std::clamp(theta_i - gradient / (c * gram_ii), box.lo, box.hi);
  // Zero instance: the objective is linear (-ybar_i theta_i) in this coordinate.
  if (ybar_i > 0.0) return box.hi;
  if (ybar_i < 0.0) return box.lo;
  return theta_i;
}

void check_c(double c) {
  if (!(c > 0.0) || !std::isfinite(c)) {
    throw Error(ErrorCode::kInvalidArgument, "C must be positive and finite, got " + std::to_string(c));
  }
}

}  // namespace

std::size_t FixedAssignments::pinned_count() const {
  return static_cast<std::size_t>(
      std::count_if(pins_.begin(), pins_.end(), [](Verdict v) { return v != Verdict::kUnknown; }));
}

double coordinate_step(const ProblemData& problem, double c, Eigen::VectorXd& theta,
                       Eigen::VectorXd& z_theta, Eigen::Index i) {
  const BoxInterval box = problem.loss().box();
  const double gradient = c * problem.row(i).dot(z_theta) - problem.ybar()[i];
  const double updated =
      step_target(theta[i], gradient, c, problem.gram_diag()[i], problem.ybar()[i], box);
  const double delta = updated - theta[i];
  if (delta != 0.0) {
    z_theta.noalias() += delta * problem.row(i).transpose();
    theta[i] = updated;
  }
  return updated;
}

double dual_objective(const ProblemData& problem, double c, const Eigen::VectorXd& theta) {
  const Eigen::VectorXd v = problem.z_transpose_times(theta);
  return 0.5 * c * v.squaredNorm() - problem.ybar().dot(theta);
}

DualSolution solve_dual(const ProblemData& problem, double c, const DualSolution* warm,
                        const FixedAssignments& fixed, const SolverOptions& options) {
  check_c(c);
  const Eigen::Index l = problem.l();
  const LossSpec& loss = problem.loss();
  const BoxInterval box = loss.box();
  if (!fixed.empty() && fixed.size() != static_cast<std::size_t>(l)) {
    throw Error(ErrorCode::kDimensionMismatch, "fixed assignments do not match instance count");
  }

  DualSolution out;
  out.c = c;
  if (warm != nullptr) {
    if (warm->theta.size() != l) {
      throw Error(ErrorCode::kDimensionMismatch, "warm start length does not match instance count");
    }
    out.theta = warm->theta.cwiseMax(box.lo).cwiseMin(box.hi);
  } else {
    out.theta = Eigen::VectorXd::Zero(l);
  }

  std::vector<Eigen::Index> free_set;
  free_set.reserve(static_cast<std::size_t>(l));
  Eigen::VectorXd z_theta_fixed = Eigen::VectorXd::Zero(problem.n());
  for (Eigen::Index i = 0; i < l; ++i) {
    if (fixed.pinned(i)) {
      out.theta[i] = pinned_value(loss, fixed.at(i));
      if (out.theta[i] != 0.0) z_theta_fixed.noalias() += out.theta[i] * problem.row(i).transpose();
    } else {
      free_set.push_back(i);
    }
  }

  auto refresh = [&]() {
    Eigen::VectorXd v = z_theta_fixed;
    for (Eigen::Index i : free_set) {
      if (out.theta[i] != 0.0) v.noalias() += out.theta[i] * problem.row(i).transpose();
    }
    return v;
  };
  auto violation = [&](const Eigen::VectorXd& v) {
    double worst = 0.0;
    for (Eigen::Index i : free_set) {
      const double g = c * problem.row(i).dot(v) - problem.ybar()[i];
      worst = std::max(worst, std::abs(projected_gradient(g, out.theta[i], box)));
    }
    return worst;
  };
  auto objective_at = [&](const Eigen::VectorXd& v) {
    return 0.5 * c * v.squaredNorm() - problem.ybar().dot(out.theta);
  };

  Eigen::VectorXd v = refresh();
  if (options.track_objective) out.objective_trace.push_back(objective_at(v));

  if (free_set.empty()) {
    out.converged = true;
  }
  while (!out.converged && out.iterations < options.max_outer) {
    ++out.iterations;
    double sweep_max = 0.0;
    for (Eigen::Index i : free_set) {
      const double g = c * problem.row(i).dot(v) - problem.ybar()[i];
      const double pg = projected_gradient(g, out.theta[i], box);
      sweep_max = std::max(sweep_max, std::abs(pg));
      if (pg == 0.0 && problem.gram_diag()[i] > 0.0) continue;
      const double updated =
          step_target(out.theta[i], g, c, problem.gram_diag()[i], problem.ybar()[i], box);
      const double delta = updated - out.theta[i];
      if (delta != 0.0) {
        v.noalias() += delta * problem.row(i).transpose();
        out.theta[i] = updated;
      }
    }
    if (options.track_objective) out.objective_trace.push_back(objective_at(v));
    if (sweep_max <= options.tol) {
      // Confirm against a drift-free Z^T theta before declaring convergence.
      v = refresh();
      out.converged = violation(v) <= options.tol;
    }
  }

  out.z_theta = refresh();
  out.max_kkt_violation = violation(out.z_theta);
  out.objective = objective_at(out.z_theta);
  return out;
}

PrimalSolution primal_from_dual(const ProblemData& problem, const DualSolution& dual) {
  return {-dual.c * z_theta_of(problem, dual), dual.c};
}

Eigen::VectorXd z_theta_of(const ProblemData& problem, const DualSolution& dual) {
  if (dual.z_theta.size() == problem.n()) return dual.z_theta;
  return problem.z_transpose_times(dual.theta);
}

KktPartition kkt_partition(const ProblemData& problem, const PrimalSolution& primal, double tol) {
  if (!(tol >= 0.0)) throw Error(ErrorCode::kInvalidArgument, "kkt tolerance must be non-negative");
  if (primal.w.size() != problem.n()) {
    throw Error(ErrorCode::kDimensionMismatch, "w length does not match feature count");
  }
  KktPartition part;
  part.tol = tol;
  const Eigen::VectorXd margin = -(problem.z() * primal.w);
  for (Eigen::Index i = 0; i < problem.l(); ++i) {
    const double y = problem.ybar()[i];
    if (margin[i] > y + tol) {
      part.r.push_back(i);
    } else if (margin[i] < y - tol) {
      part.l.push_back(i);
    } else {
      part.e.push_back(i);
    }
  }
  return part;
}

ReducedProblem reduce_problem(const ProblemData& problem, const FixedAssignments& fixed, double c) {
  check_c(c);
  const Eigen::Index l = problem.l();
  if (!fixed.empty() && fixed.size() != static_cast<std::size_t>(l)) {
    throw Error(ErrorCode::kDimensionMismatch, "fixed assignments do not match instance count");
  }
  ReducedProblem out;
  out.c_ = c;
  out.pinned_theta_ = Eigen::VectorXd::Zero(l);
  Eigen::VectorXd z_theta_pinned = Eigen::VectorXd::Zero(problem.n());
  for (Eigen::Index i = 0; i < l; ++i) {
    if (fixed.pinned(i)) {
      const double t = pinned_value(problem.loss(), fixed.at(i));
      out.pinned_theta_[i] = t;
      z_theta_pinned.noalias() += t * problem.row(i).transpose();
    } else {
      out.free_index_.push_back(i);
    }
  }
  const Eigen::Index m = out.size();
  out.z_free_.resize(m, problem.n());
  out.yhat_.resize(m);
  for (Eigen::Index k = 0; k < m; ++k) {
    const Eigen::Index i = out.free_index_[static_cast<std::size_t>(k)];
    out.z_free_.row(k) = problem.row(i);
    // (G12 theta_S)_k = <z_i, Z_S^T theta_S>
    out.yhat_[k] = problem.ybar()[i] - c * problem.row(i).dot(z_theta_pinned);
  }
  return out;
}

Eigen::MatrixXd ReducedProblem::gram() const { return z_free_ * z_free_.transpose(); }

double ReducedProblem::objective(const Eigen::VectorXd& theta_free) const {
  if (theta_free.size() != size()) {
    throw Error(ErrorCode::kDimensionMismatch, "reduced theta has the wrong length");
  }
  const Eigen::VectorXd v = z_free_.transpose() * theta_free;
  return 0.5 * c_ * v.squaredNorm() - yhat_.dot(theta_free);
}

Eigen::VectorXd ReducedProblem::expand(const Eigen::VectorXd& theta_free) const {
  if (theta_free.size() != size()) {
    throw Error(ErrorCode::kDimensionMismatch, "reduced theta has the wrong length");
  }
  Eigen::VectorXd full = pinned_theta_;
  for (Eigen::Index k = 0; k < size(); ++k) full[free_index_[static_cast<std::size_t>(k)]] = theta_free[k];
  return full;
}

}  // namespace dvi
