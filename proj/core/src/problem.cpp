#include "dvi/problem.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "dvi/error.hpp"

namespace dvi {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument:
      return "invalid argument";
    case ErrorCode::kDimensionMismatch:
      return "dimension mismatch";
    case ErrorCode::kInvalidLabel:
      return "invalid label";
    case ErrorCode::kInfeasibleRegion:
      return "infeasible region";
    case ErrorCode::kParse:
      return "parse error";
    case ErrorCode::kIo:
      return "i/o error";
  }
  return "unknown error";
}

BoxInterval conjugate_interval(LossKind kind) {
  switch (kind) {
    case LossKind::kHinge:
      return {0.0, 1.0};
    case LossKind::kAbsolute:
      return {-1.0, 1.0};
  }
  return {0.0, 1.0};
}

LossSpec::LossSpec(LossKind kind) : kind_(kind), box_(conjugate_interval(kind)) {}

double LossSpec::phi(double t) const {
  return kind_ == LossKind::kHinge ? std::max(t, 0.0) : std::abs(t);
}

ProblemData::ProblemData(RowMatrix z, Eigen::VectorXd ybar, LossSpec loss)
    : z_(std::move(z)), ybar_(std::move(ybar)), loss_(loss) {
  if (z_.rows() != ybar_.size()) {
    throw Error(ErrorCode::kDimensionMismatch, "row count of Z does not match length of ybar");
  }
  gram_diag_ = z_.rowwise().squaredNorm();
  z_norms_ = gram_diag_.cwiseSqrt();
}

Eigen::VectorXd ProblemData::z_transpose_times(const Eigen::VectorXd& theta) const {
  if (theta.size() != l()) {
    throw Error(ErrorCode::kDimensionMismatch, "theta length does not match instance count");
  }
  return z_.transpose() * theta;
}

ProblemData build_problem(std::span<const Instance> instances, const LossSpec& loss) {
  if (instances.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "dataset is empty");
  }
  const auto l = static_cast<Eigen::Index>(instances.size());
  const Eigen::Index n = instances.front().features.size();
  RowMatrix z(l, n);
  Eigen::VectorXd ybar(l);
  for (Eigen::Index i = 0; i < l; ++i) {
    const Instance& inst = instances[static_cast<std::size_t>(i)];
    if (inst.features.size() != n) {
      throw Error(ErrorCode::kDimensionMismatch,
                  "instance " + std::to_string(i) + " has " +
                      std::to_string(inst.features.size()) + " features, expected " +
                      std::to_string(n));
    }
    if (!inst.features.allFinite() || !std::isfinite(inst.label)) {
      throw Error(ErrorCode::kInvalidArgument,
                  "instance " + std::to_string(i) + " has a non-finite value");
    }
    if (loss.kind() == LossKind::kHinge && inst.label != 1.0 && inst.label != -1.0) {
      throw Error(ErrorCode::kInvalidLabel, "instance " + std::to_string(i) + " has label " +
                                                std::to_string(inst.label) +
                                                "; hinge loss requires labels in {-1, +1}");
    }
    z.row(i) = loss.a_of(inst.label) * inst.features.transpose();
    ybar[i] = loss.b_of(inst.label) * inst.label;
  }
  return ProblemData(std::move(z), std::move(ybar), loss);
}

double primal_objective(const ProblemData& problem, double c, const Eigen::VectorXd& w) {
  const Eigen::VectorXd margins = problem.z() * w + problem.ybar();
  double loss_sum = 0.0;
  for (Eigen::Index i = 0; i < margins.size(); ++i) loss_sum += problem.loss().phi(margins[i]);
  return 0.5 * w.squaredNorm() + c * loss_sum;
}

}  // namespace dvi
