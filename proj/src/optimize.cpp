#include "sdpi/optimize.hpp"

#include <cmath>

namespace sdpi {

namespace {

constexpr double kArmijo = 1e-4;
constexpr double kMinStep = 1e-12;

}  // namespace

BfgsResult maximize_bfgs(const std::function<double(const Eigen::VectorXd&)>& objective,
                         Eigen::VectorXd x0, const BfgsOptions& options) {
  BfgsResult res;
  auto eval = [&](const Eigen::VectorXd& x) {
    ++res.evaluations;
    const double v = objective(x);
    return std::isnan(v) ? -HUGE_VAL : v;
  };
  const Eigen::Index n = x0.size();
  res.x = std::move(x0);
  res.value = eval(res.x);
  if (n == 0 || !std::isfinite(res.value)) {
    res.converged = true;
    return res;
  }

  auto gradient = [&](const Eigen::VectorXd& x) {
    Eigen::VectorXd g(n);
    Eigen::VectorXd probe = x;
    for (Eigen::Index i = 0; i < n; ++i) {
      const double h = options.gradient_step * std::max(1.0, std::abs(x[i]));
      probe[i] = x[i] + h;
      const double up = eval(probe);
      probe[i] = x[i] - h;
      const double down = eval(probe);
      probe[i] = x[i];
      const double gi = (up - down) / (2.0 * h);
      g[i] = std::isfinite(gi) ? gi : 0.0;
    }
    return g;
  };

  Eigen::VectorXd g = gradient(res.x);
  Eigen::MatrixXd h = Eigen::MatrixXd::Identity(n, n);
  bool scaled = false;

  for (res.iterations = 0; res.iterations < options.max_iters; ++res.iterations) {
    Eigen::VectorXd d = h * g;
    if (!(d.dot(g) > 0.0)) {
      h.setIdentity();
      d = g;
    }
    if (!(d.squaredNorm() > 0.0)) {
      res.converged = true;
      break;
    }
    const double len = d.norm();
    if (len > options.max_step) d *= options.max_step / len;

    const double slope = g.dot(d);
    double step = 1.0;
    bool accepted = false;
    Eigen::VectorXd xn;
    double fn = 0.0;
    while (step > kMinStep) {
      xn = res.x + step * d;
      fn = eval(xn);
      if (std::isfinite(fn) && fn >= res.value + kArmijo * step * slope) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) {
      res.converged = true;
      break;
    }

    const Eigen::VectorXd s = xn - res.x;
    const Eigen::VectorXd gn = gradient(xn);
    // curvature pair for the minimization of -objective
    const Eigen::VectorXd y = g - gn;
    const double sy = s.dot(y);
    if (sy > 1e-12 * s.norm() * y.norm()) {
      if (!scaled) {
        h *= sy / y.squaredNorm();
        scaled = true;
      }
      const double rho = 1.0 / sy;
      const Eigen::MatrixXd left = Eigen::MatrixXd::Identity(n, n) - rho * s * y.transpose();
      h = left * h * left.transpose() + rho * s * s.transpose();
    }
    res.x = xn;
    res.value = fn;
    g = gn;
    if (s.norm() <= options.step_tolerance * (1.0 + res.x.norm())) {
      res.converged = true;
      ++res.iterations;
      break;
    }
  }
  return res;
}

}  // namespace sdpi
