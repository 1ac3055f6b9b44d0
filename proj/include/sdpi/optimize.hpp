#pragma once

#include <functional>

#include <Eigen/Dense>

namespace sdpi {

struct BfgsOptions {
  int max_iters = 500;
  double step_tolerance = 1e-10;
  /// Central-difference step, relative: h_i = gradient_step * max(1, |x_i|).
  double gradient_step = 1e-6;
  /// Largest step length accepted in a single line search.
  double max_step = 4.0;
};

struct BfgsResult {
  Eigen::VectorXd x;  // best iterate seen
  double value = 0.0;
  int iterations = 0;
  int evaluations = 0;
  bool converged = false;
};

/// Quasi-Newton ascent with numerical gradients and backtracking line search.
/// The objective may return -inf (or NaN) to mark a point as unusable; such
/// points are never accepted. The returned point is always one at which the
/// objective was actually evaluated.
BfgsResult maximize_bfgs(const std::function<double(const Eigen::VectorXd&)>& objective,
                         Eigen::VectorXd x0, const BfgsOptions& options);

}  // namespace sdpi
