#include "dvi/screen_dvi.hpp"

#include <cmath>
#include <string>

#include "dvi/error.hpp"

namespace dvi {
namespace {

void check_pair(double c_k, double c_next) {
  if (!(c_k > 0.0) || !std::isfinite(c_k) || !std::isfinite(c_next)) {
    throw Error(ErrorCode::kInvalidArgument, "screening parameters must be positive and finite");
  }
  if (c_next < c_k) {
    throw Error(ErrorCode::kInvalidArgument,
                "screening only runs towards larger C (got " + std::to_string(c_k) + " -> " +
                    std::to_string(c_next) + ")");
  }
}

// lower_i = <center, z_i> - spread ||z_i||, upper_i = <center, z_i> + spread ||z_i||
std::vector<RuleBounds> ball_bounds(const ProblemData& problem, const Eigen::VectorXd& center,
                                    double spread) {
  std::vector<RuleBounds> out(static_cast<std::size_t>(problem.l()));
  const Eigen::VectorXd inner = problem.z() * center;
  for (Eigen::Index i = 0; i < problem.l(); ++i) {
    const double half_width = spread * problem.z_norms()[i];
    out[static_cast<std::size_t>(i)] = {inner[i] - half_width, inner[i] + half_width};
  }
  return out;
}

// Same test as classify(ball_bounds(...)) in one pass without the bounds vector.
ScreeningResult classify_ball(const ProblemData& problem, const Eigen::VectorXd& center, double spread) {
  ScreeningResult out;
  const Eigen::Index l = problem.l();
  out.verdicts.resize(static_cast<std::size_t>(l), Verdict::kUnknown);
  const Eigen::VectorXd inner = problem.z() * center;
  const Eigen::VectorXd& norms = problem.z_norms();
  const Eigen::VectorXd& ybar = problem.ybar();
  for (Eigen::Index i = 0; i < l; ++i) {
    const double half_width = spread * norms[i];
    if (inner[i] - half_width > ybar[i]) {
      out.verdicts[static_cast<std::size_t>(i)] = Verdict::kPinAlpha;
      ++out.n_alpha;
    } else if (inner[i] + half_width < ybar[i]) {
      out.verdicts[static_cast<std::size_t>(i)] = Verdict::kPinBeta;
      ++out.n_beta;
    }
  }
  return out;
}

}  // namespace

ScreeningResult ScreeningResult::none(Eigen::Index l) {
  ScreeningResult out;
  out.verdicts.assign(static_cast<std::size_t>(l), Verdict::kUnknown);
  return out;
}

void ScreeningResult::recount() {
  n_alpha = 0;
  n_beta = 0;
  for (Verdict v : verdicts) {
    if (v == Verdict::kPinAlpha) ++n_alpha;
    if (v == Verdict::kPinBeta) ++n_beta;
  }
}

DviBall dvi_ball(const ProblemData& problem, double c0, double c, const DualSolution& theta0) {
  check_pair(c0, c);
  const Eigen::VectorXd v = z_theta_of(problem, theta0);
  return {((c0 + c) / (2.0 * c)) * v, ((c - c0) / (2.0 * c)) * v.norm()};
}

namespace {

struct Ball {
  Eigen::VectorXd center;
  double spread;
};

Ball dual_ball(const ProblemData& problem, double c_k, double c_next, const DualSolution& theta_k) {
  check_pair(c_k, c_next);
  Eigen::VectorXd v = z_theta_of(problem, theta_k);
  const double spread = 0.5 * (c_next - c_k) * v.norm();
  v *= 0.5 * (c_next + c_k);
  return {std::move(v), spread};
}

Ball primal_ball(const ProblemData& problem, double c_k, double c_next, const PrimalSolution& w_k) {
  check_pair(c_k, c_next);
  if (w_k.w.size() != problem.n()) {
    throw Error(ErrorCode::kDimensionMismatch, "w length does not match feature count");
  }
  return {(-(c_k + c_next) / (2.0 * c_k)) * w_k.w, (c_next - c_k) / (2.0 * c_k) * w_k.w.norm()};
}

}  // namespace

std::vector<RuleBounds> dual_rule_bounds(const ProblemData& problem, double c_k, double c_next,
                                         const DualSolution& theta_k) {
  const Ball b = dual_ball(problem, c_k, c_next, theta_k);
  return ball_bounds(problem, b.center, b.spread);
}

std::vector<RuleBounds> primal_rule_bounds(const ProblemData& problem, double c_k, double c_next,
                                           const PrimalSolution& w_k) {
  const Ball b = primal_ball(problem, c_k, c_next, w_k);
  return ball_bounds(problem, b.center, b.spread);
}

ScreeningResult screen_dual(const ProblemData& problem, double c_k, double c_next,
                            const DualSolution& theta_k) {
  const Ball b = dual_ball(problem, c_k, c_next, theta_k);
  return classify_ball(problem, b.center, b.spread);
}

ScreeningResult screen_primal(const ProblemData& problem, double c_k, double c_next,
                              const PrimalSolution& w_k) {
  const Ball b = primal_ball(problem, c_k, c_next, w_k);
  return classify_ball(problem, b.center, b.spread);
}

}  // namespace dvi
