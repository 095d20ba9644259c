#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>
#include <gtest/gtest.h>

#include "dvi/dataio.hpp"
#include "dvi/error.hpp"
#include "dvi/problem.hpp"

namespace dvi::testing {

inline Instance make_instance(std::initializer_list<double> x, double y) {
  Eigen::VectorXd f(static_cast<Eigen::Index>(x.size()));
  Eigen::Index j = 0;
  for (double v : x) f[j++] = v;
  return {f, y};
}

// The two-point SVM used across the examples: x1 = (2, 0), y1 = +1 and
// x2 = (-1, 0), y2 = -1.
inline ProblemData two_point_svm() {
  const std::vector<Instance> data{make_instance({2.0, 0.0}, 1.0), make_instance({-1.0, 0.0}, -1.0)};
  return build_problem(data, LossSpec::hinge());
}

// Gaussian features scaled by `scale`; hinge labels are random signs shifted
// to make the classes partly separable, absolute labels are a noisy linear
// response.
inline std::vector<Instance> random_instances(Rng& rng, std::size_t l, std::size_t n, LossKind kind,
                                              double scale = 1.0) {
  std::vector<Instance> out;
  out.reserve(l);
  Eigen::VectorXd direction(static_cast<Eigen::Index>(n));
  for (Eigen::Index j = 0; j < direction.size(); ++j) direction[j] = rng.normal();
  for (std::size_t i = 0; i < l; ++i) {
    Eigen::VectorXd x(static_cast<Eigen::Index>(n));
    for (Eigen::Index j = 0; j < x.size(); ++j) x[j] = scale * rng.normal();
    double y;
    if (kind == LossKind::kHinge) {
      y = rng.uniform() < 0.5 ? -1.0 : 1.0;
      x += 0.5 * scale * y * direction;
    } else {
      y = direction.dot(x) + 0.3 * rng.normal();
    }
    out.push_back({std::move(x), y});
  }
  return out;
}

inline ProblemData random_problem(Rng& rng, std::size_t l, std::size_t n, LossKind kind, double scale = 1.0) {
  return build_problem(random_instances(rng, l, n, kind, scale), LossSpec(kind));
}

template <typename F>
ErrorCode error_code_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected dvi::Error";
  return ErrorCode::kInvalidArgument;
}

}  // namespace dvi::testing
