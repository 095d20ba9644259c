#pragma once

#include <vector>

#include <Eigen/Dense>

#include "dvi/problem.hpp"
#include "dvi/screen_dvi.hpp"

namespace dvi {

/**
 * Half-space intersected with a ball: { w : <u, w> <= d, ||w - o|| <= r }.
 *
 * Construction rejects r <= 0 and empty regions, where the whole ball lies
 * outside the half-space: (<u, o> - d) / ||u|| > r, or d < 0 when u = 0. A
 * ball lying entirely inside the half-space is accepted; the region is then
 * the ball itself. A relative slack of kFeasibilitySlack * r absorbs
 * round-off for regions that are tangent in exact arithmetic.
 */
class DomeRegion {
 public:
  static constexpr double kFeasibilitySlack = 1e-10;

  DomeRegion(Eigen::VectorXd u, double d, Eigen::VectorXd o, double r);

  const Eigen::VectorXd& u() const { return u_; }
  double d() const { return d_; }
  const Eigen::VectorXd& o() const { return o_; }
  double r() const { return r_; }

  bool contains(const Eigen::VectorXd& w, double slack = 1e-12) const;

 private:
  Eigen::VectorXd u_;
  double d_;
  Eigen::VectorXd o_;
  double r_;
};

// min over the region of <v, w>, in closed form.
double dome_min(const Eigen::VectorXd& v, const DomeRegion& region);
// max over the region of <v, w> = -dome_min(-v).
double dome_max(const Eigen::VectorXd& v, const DomeRegion& region);

// Total hinge slack sum_i [1 - y_i <w, x_i>]_+ of a hinge problem.
double slack_of(const ProblemData& problem, const Eigen::VectorXd& w);

// Inputs of the slack-parameterised rules: w*(s_a) is optimal for slack
// budget s_a and w_hat is feasible for s_b <= s_a.
struct SPathState {
  Eigen::VectorXd w_sa;
  Eigen::VectorXd w_hat_sb;
  double s_a = 0.0;
  double s_b = 0.0;
  double rho = 0.0;  // -||w_sa||^2 + <w_sa, w_hat_sb>/2
};

// s_a and s_b are taken as the slacks of the two vectors themselves.
SPathState make_spath_state(const ProblemData& problem, Eigen::VectorXd w_sa,
                            Eigen::VectorXd w_hat_sb);

// {<w_sa, w - w_sa> >= 0} with ||w|| <= ||w_hat||.
DomeRegion ssnsv_region(const SPathState& state);
// {<w_sa, w - w_sa> >= 0} with ||w - w_hat/2|| <= ||w_hat||/2.
DomeRegion essnsv_region(const SPathState& state);

// Bounds of <w, xbar_i> (xbar_i = y_i x_i = -z_i) over each region.
std::vector<RuleBounds> ssnsv_bounds(const ProblemData& problem, const SPathState& state);
std::vector<RuleBounds> essnsv_bounds(const ProblemData& problem, const SPathState& state);
// Same quantity as essnsv_bounds, evaluated through the generic dome_min/dome_max.
std::vector<RuleBounds> essnsv_bounds_via_dome(const ProblemData& problem, const SPathState& state);

// Pin to alpha (= 0) when the lower bound exceeds 1, to beta (= 1) when the
// upper bound is below 1. Hinge problems only.
ScreeningResult ssnsv_screen(const ProblemData& problem, const SPathState& state);
ScreeningResult essnsv_screen(const ProblemData& problem, const SPathState& state);

}  // namespace dvi
