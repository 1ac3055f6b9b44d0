#pragma once

// Reference computations written directly from the definitions, sharing no
// code with the library kernels they are compared against.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include <Eigen/Dense>

namespace oracle {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// sum_x P f(R/P) with the zero-mass conventions, in long double.
inline double f_divergence(const std::function<double(double)>& f, double perspective, const Eigen::VectorXd& r,
                           const Eigen::VectorXd& p) {
  long double sum = 0.0L;
  for (Eigen::Index i = 0; i < r.size(); ++i) {
    if (p[i] > 0.0) {
      sum += static_cast<long double>(p[i]) * f(r[i] / p[i]);
    } else if (r[i] > 0.0) {
      if (std::isinf(perspective)) return kInf;
      sum += static_cast<long double>(r[i]) * perspective;
    }
  }
  return static_cast<double>(sum);
}

/// Sum of r log(r/p) - r + p: every term is non-negative, so nearby pmfs do
/// not lose their divergence to cancellation.
inline long double kl_terms(const long double* r, const long double* p, Eigen::Index n) {
  long double sum = 0.0L;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (r[i] == 0.0L) {
      sum += p[i];
      continue;
    }
    if (p[i] == 0.0L) return kInf;
    sum += r[i] * std::log(r[i] / p[i]) - r[i] + p[i];
  }
  return sum;
}

inline double kl(const Eigen::VectorXd& r, const Eigen::VectorXd& p) {
  const Eigen::Matrix<long double, Eigen::Dynamic, 1> rl = r.cast<long double>();
  const Eigen::Matrix<long double, Eigen::Dynamic, 1> pl = p.cast<long double>();
  return static_cast<double>(kl_terms(rl.data(), pl.data(), r.size()));
}

inline double chi2(const Eigen::VectorXd& r, const Eigen::VectorXd& p) {
  long double sum = 0.0L;
  for (Eigen::Index i = 0; i < r.size(); ++i) {
    if (p[i] == 0.0) {
      if (r[i] > 0.0) return kInf;
      continue;
    }
    const long double d = static_cast<long double>(r[i]) - p[i];
    sum += d * d / p[i];
  }
  return static_cast<double>(sum);
}

inline double tsallis(double alpha, const Eigen::VectorXd& r, const Eigen::VectorXd& p) {
  long double sum = 0.0L;
  for (Eigen::Index i = 0; i < r.size(); ++i) {
    sum += std::pow(static_cast<long double>(r[i]), alpha) * std::pow(static_cast<long double>(p[i]), 1.0 - alpha);
  }
  return static_cast<double>((sum - 1.0L) / (alpha - 1.0));
}

/// B[y, x] = P(x) W(y|x) / sqrt(P(x) P_Y(y)).
inline Eigen::MatrixXd dtm(const Eigen::VectorXd& px, const Eigen::MatrixXd& w) {
  const Eigen::VectorXd py = w * px;
  Eigen::MatrixXd b = Eigen::MatrixXd::Zero(w.rows(), w.cols());
  for (Eigen::Index y = 0; y < w.rows(); ++y) {
    for (Eigen::Index x = 0; x < w.cols(); ++x) {
      if (px[x] > 0.0 && py[y] > 0.0) b(y, x) = px[x] * w(y, x) / std::sqrt(px[x] * py[y]);
    }
  }
  return b;
}

inline Eigen::VectorXd singular_values(const Eigen::MatrixXd& m) {
  return Eigen::JacobiSVD<Eigen::MatrixXd>(m).singularValues();
}

/// Squared second singular value of the DTM via Eigen, for interior inputs
/// and outputs.
inline double eta_chi2(const Eigen::VectorXd& px, const Eigen::MatrixXd& w) {
  const Eigen::VectorXd s = singular_values(dtm(px, w));
  return s.size() > 1 ? s[1] * s[1] : 0.0;
}

/// max over R = (1 - r, r) of D(WR||WP) / D(R||P) on `points` interior grid
/// points for a binary input, with KL evaluated in long double.
inline double binary_kl_eta_grid(const Eigen::VectorXd& px, const Eigen::MatrixXd& w, int points) {
  using VecL = Eigen::Matrix<long double, Eigen::Dynamic, 1>;
  const Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic> wl = w.cast<long double>();
  const VecL pl = px.cast<long double>();
  const VecL py = wl * pl;
  long double best = 0.0L;
  VecL r(2);
  for (int i = 1; i <= points; ++i) {
    r[1] = static_cast<long double>(i) / (points + 1);
    r[0] = 1.0L - r[1];
    const long double din = kl_terms(r.data(), pl.data(), 2);
    if (!(din > 1e-15L)) continue;
    const VecL out = wl * r;
    best = std::max(best, kl_terms(out.data(), py.data(), out.size()) / din);
  }
  return static_cast<double>(best);
}

}  // namespace oracle
