#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace dvi {

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

struct Instance {
  Eigen::VectorXd features;
  double label = 0.0;
};

enum class LossKind { kHinge, kAbsolute };

// Closed interval [lo, hi] on which the conjugate of the loss is finite.
struct BoxInterval {
  double lo;
  double hi;

  bool contains(double t) const { return lo <= t && t <= hi; }
};

BoxInterval conjugate_interval(LossKind kind);

/**
 * A sublinear loss phi applied as phi(w^T (a_i x_i) + b_i y_i).
 *
 * Hinge:    phi(t) = max(t, 0), a_i = -y_i, b_i = y_i, dual box [0, 1].
 * Absolute: phi(t) = |t|,       a_i = -1,   b_i = 1,   dual box [-1, 1].
 */
class LossSpec {
 public:
  explicit LossSpec(LossKind kind);

  static LossSpec hinge() { return LossSpec(LossKind::kHinge); }
  static LossSpec absolute() { return LossSpec(LossKind::kAbsolute); }

  LossKind kind() const { return kind_; }
  double alpha() const { return box_.lo; }
  double beta() const { return box_.hi; }
  BoxInterval box() const { return box_; }

  double a_of(double y) const { return kind_ == LossKind::kHinge ? -y : -1.0; }
  double b_of(double y) const { return kind_ == LossKind::kHinge ? y : 1.0; }

  // Value of the primal loss phi(t).
  double phi(double t) const;

 private:
  LossKind kind_;
  BoxInterval box_;
};

// The transformed training set. Row i of z is a_i x_i and ybar[i] = b_i y_i.
// Immutable after construction.
class ProblemData {
 public:
  ProblemData(RowMatrix z, Eigen::VectorXd ybar, LossSpec loss);

  const RowMatrix& z() const { return z_; }
  auto row(Eigen::Index i) const { return z_.row(i); }
  const Eigen::VectorXd& ybar() const { return ybar_; }
  const Eigen::VectorXd& z_norms() const { return z_norms_; }
  // Diagonal of the Gram matrix Z Z^T, i.e. squared row norms.
  const Eigen::VectorXd& gram_diag() const { return gram_diag_; }
  const LossSpec& loss() const { return loss_; }

  Eigen::Index l() const { return z_.rows(); }
  Eigen::Index n() const { return z_.cols(); }

  // Z^T theta.
  Eigen::VectorXd z_transpose_times(const Eigen::VectorXd& theta) const;

 private:
  RowMatrix z_;
  Eigen::VectorXd ybar_;
  Eigen::VectorXd z_norms_;
  Eigen::VectorXd gram_diag_;
  LossSpec loss_;
};

// Throws dvi::Error on an empty set, ragged or non-finite features, or (for
// hinge) labels outside {-1, +1}. Row order is preserved.
ProblemData build_problem(std::span<const Instance> instances, const LossSpec& loss);

// Primal objective 0.5 ||w||^2 + C sum_i phi(<w, z_i> + ybar_i).
double primal_objective(const ProblemData& problem, double c, const Eigen::VectorXd& w);

}  // namespace dvi
