#include "dvi/screen_ssnsv.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "dvi/error.hpp"

namespace dvi {
namespace {

void require_hinge(const ProblemData& problem) {
  if (problem.loss().kind() != LossKind::kHinge) {
    throw Error(ErrorCode::kInvalidArgument, "SSNSV-family rules are defined for the hinge loss only");
  }
}

ScreeningResult classify_unit(const std::vector<RuleBounds>& bounds) {
  ScreeningResult out;
  out.verdicts.resize(bounds.size(), Verdict::kUnknown);
  for (std::size_t i = 0; i < bounds.size(); ++i) {
    if (bounds[i].lower > 1.0) {
      out.verdicts[i] = Verdict::kPinAlpha;
      ++out.n_alpha;
    } else if (bounds[i].upper < 1.0) {
      out.verdicts[i] = Verdict::kPinBeta;
      ++out.n_beta;
    }
  }
  return out;
}

std::vector<RuleBounds> dome_bounds(const ProblemData& problem, const DomeRegion& region) {
  std::vector<RuleBounds> out(static_cast<std::size_t>(problem.l()));
  for (Eigen::Index i = 0; i < problem.l(); ++i) {
    const Eigen::VectorXd xbar = -problem.row(i).transpose();
    out[static_cast<std::size_t>(i)] = {dome_min(xbar, region), dome_max(xbar, region)};
  }
  return out;
}

}  // namespace

DomeRegion::DomeRegion(Eigen::VectorXd u, double d, Eigen::VectorXd o, double r)
    : u_(std::move(u)), d_(d), o_(std::move(o)), r_(r) {
  if (u_.size() != o_.size()) {
    throw Error(ErrorCode::kDimensionMismatch, "dome normal and center differ in dimension");
  }
  if (!(r_ > 0.0) || !std::isfinite(r_)) {
    throw Error(ErrorCode::kInvalidArgument, "dome radius must be positive, got " + std::to_string(r_));
  }
  const double unorm = u_.norm();
  const double slack = kFeasibilitySlack * r_;
  if (unorm == 0.0) {
    if (d_ < 0.0) throw Error(ErrorCode::kInfeasibleRegion, "half-space 0 <= d with d < 0 is empty");
    return;
  }
  // Only the side <u, w> <= d matters: the region is empty when the whole
  // ball lies strictly on the other side, <u, o> - r ||u|| > d.
  const double offset = (u_.dot(o_) - d_) / unorm;
  if (offset > r_ + slack) {
    throw Error(ErrorCode::kInfeasibleRegion,
                "half-space misses the ball (offset " + std::to_string(offset) + ", radius " +
                    std::to_string(r_) + ")");
  }
}

bool DomeRegion::contains(const Eigen::VectorXd& w, double slack) const {
  const double scale = 1.0 + std::abs(d_) + u_.norm() * (o_.norm() + r_);
  return u_.dot(w) <= d_ + slack * scale && (w - o_).norm() <= r_ * (1.0 + slack);
}

double dome_min(const Eigen::VectorXd& v, const DomeRegion& region) {
  if (v.size() != region.u().size()) {
    throw Error(ErrorCode::kDimensionMismatch, "objective and dome differ in dimension");
  }
  const Eigen::VectorXd& u = region.u();
  const double r = region.r();
  const double vo = v.dot(region.o());
  const double vnorm = v.norm();
  const double uu = u.squaredNorm();
  if (uu == 0.0) return vo - r * vnorm;

  const double d_shift = region.d() - u.dot(region.o());
  const double vu = v.dot(u);
  if (vu + vnorm * d_shift / r >= 0.0) {
    // The ball minimiser already satisfies the half-space.
    return vo - r * vnorm;
  }
  const Eigen::VectorXd v_perp = v - (vu / uu) * u;
  const double chord = std::sqrt(std::max(0.0, r * r - d_shift * d_shift / uu));
  return vo - v_perp.norm() * chord + vu * d_shift / uu;
}

double dome_max(const Eigen::VectorXd& v, const DomeRegion& region) { return -dome_min(-v, region); }

double slack_of(const ProblemData& problem, const Eigen::VectorXd& w) {
  require_hinge(problem);
  if (w.size() != problem.n()) {
    throw Error(ErrorCode::kDimensionMismatch, "w length does not match feature count");
  }
  // 1 - y_i <w, x_i> = 1 + <w, z_i>
  const Eigen::VectorXd margin = (problem.z() * w).array() + 1.0;
  return margin.cwiseMax(0.0).sum();
}

SPathState make_spath_state(const ProblemData& problem, Eigen::VectorXd w_sa, Eigen::VectorXd w_hat_sb) {
  SPathState state;
  state.s_a = slack_of(problem, w_sa);
  state.s_b = slack_of(problem, w_hat_sb);
  state.rho = -w_sa.squaredNorm() + 0.5 * w_sa.dot(w_hat_sb);
  state.w_sa = std::move(w_sa);
  state.w_hat_sb = std::move(w_hat_sb);
  return state;
}

DomeRegion ssnsv_region(const SPathState& state) {
  return DomeRegion(-state.w_sa, -state.w_sa.squaredNorm(), Eigen::VectorXd::Zero(state.w_sa.size()),
                    state.w_hat_sb.norm());
}

DomeRegion essnsv_region(const SPathState& state) {
  return DomeRegion(-state.w_sa, -state.w_sa.squaredNorm(), 0.5 * state.w_hat_sb,
                    0.5 * state.w_hat_sb.norm());
}

std::vector<RuleBounds> ssnsv_bounds(const ProblemData& problem, const SPathState& state) {
  require_hinge(problem);
  return dome_bounds(problem, ssnsv_region(state));
}

std::vector<RuleBounds> essnsv_bounds_via_dome(const ProblemData& problem, const SPathState& state) {
  require_hinge(problem);
  return dome_bounds(problem, essnsv_region(state));
}

std::vector<RuleBounds> essnsv_bounds(const ProblemData& problem, const SPathState& state) {
  require_hinge(problem);
  const double wa_sq = state.w_sa.squaredNorm();
  if (wa_sq == 0.0) {
    throw Error(ErrorCode::kInvalidArgument, "ESSNSV needs a nonzero w*(s_a)");
  }
  // Validates feasibility of the region the closed forms assume.
  (void)essnsv_region(state);

  const double hat_norm = state.w_hat_sb.norm();
  const double rho = state.rho;
  const double chord = std::sqrt(std::max(0.0, 0.25 * hat_norm * hat_norm - rho * rho / wa_sq));

  std::vector<RuleBounds> out(static_cast<std::size_t>(problem.l()));
  for (Eigen::Index i = 0; i < problem.l(); ++i) {
    const Eigen::VectorXd xbar = -problem.row(i).transpose();
    const double a = state.w_sa.dot(xbar);
    const double h = state.w_hat_sb.dot(xbar);
    const double xnorm = problem.z_norms()[i];
    const double threshold = 2.0 * xnorm * rho / hat_norm;
    const double perp = (xbar - (a / wa_sq) * state.w_sa).norm();
    const double on_plane = -a * rho / wa_sq + 0.5 * h;

    RuleBounds& b = out[static_cast<std::size_t>(i)];
    b.lower = a > threshold ? on_plane - perp * chord : 0.5 * (h - hat_norm * xnorm);
    b.upper = a >= -threshold ? 0.5 * (h + hat_norm * xnorm) : on_plane + perp * chord;
  }
  return out;
}

ScreeningResult ssnsv_screen(const ProblemData& problem, const SPathState& state) {
  return classify_unit(ssnsv_bounds(problem, state));
}

ScreeningResult essnsv_screen(const ProblemData& problem, const SPathState& state) {
  return classify_unit(essnsv_bounds(problem, state));
}

}  // namespace dvi
