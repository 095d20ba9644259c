#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "dvi/problem.hpp"
#include "dvi/solver.hpp"

namespace dvi {

struct ScreeningResult {
  std::vector<Verdict> verdicts;
  std::size_t n_alpha = 0;
  std::size_t n_beta = 0;

  double rejection_ratio() const {
    return verdicts.empty() ? 0.0 : static_cast<double>(n_alpha + n_beta) / static_cast<double>(verdicts.size());
  }
  FixedAssignments to_fixed() const { return FixedAssignments(verdicts); }

  static ScreeningResult none(Eigen::Index l);
  // Recount n_alpha / n_beta from verdicts.
  void recount();
};

// Ball that contains Z^T theta*(C) given theta*(C0) for C >= C0:
//   ||Z^T theta*(C) - center|| <= radius
struct DviBall {
  Eigen::VectorXd center;
  double radius = 0.0;
};

DviBall dvi_ball(const ProblemData& problem, double c0, double c, const DualSolution& theta0);

/**
 * Sequential DVI rule stated on the dual solution at c_k. Instance i is
 * pinned to alpha when
 *
 *   (c_next + c_k)/2 <Z^T theta_k, z_i> - (c_next - c_k)/2 ||Z^T theta_k|| ||z_i|| > ybar_i
 *
 * and to beta when the "+" form is < ybar_i. Comparisons are strict with no
 * slack. Requires 0 < c_k <= c_next.
 */
ScreeningResult screen_dual(const ProblemData& problem, double c_k, double c_next,
                            const DualSolution& theta_k);

// Same rule expressed through w*(c_k) = -c_k Z^T theta*(c_k); never forms Z^T theta.
ScreeningResult screen_primal(const ProblemData& problem, double c_k, double c_next,
                              const PrimalSolution& w_k);

// Lower/upper rule values for instance i, exposed for margin diagnostics.
struct RuleBounds {
  double lower;
  double upper;
};
std::vector<RuleBounds> dual_rule_bounds(const ProblemData& problem, double c_k, double c_next,
                                         const DualSolution& theta_k);
std::vector<RuleBounds> primal_rule_bounds(const ProblemData& problem, double c_k, double c_next,
                                           const PrimalSolution& w_k);

}  // namespace dvi
