#include "sdpi/svd.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "sdpi/error.hpp"

namespace sdpi {

namespace {

constexpr double kOrthogonality = 1e-15;
constexpr int kMaxSweeps = 80;

// Fills columns of u flagged in `missing` with an orthonormal completion.
void complete_basis(Eigen::MatrixXd& u, const std::vector<bool>& missing) {
  const Eigen::Index m = u.rows();
  Eigen::Index next_unit = 0;
  for (Eigen::Index j = 0; j < u.cols(); ++j) {
    if (!missing[static_cast<std::size_t>(j)]) continue;
    for (;;) {
      Eigen::VectorXd c = Eigen::VectorXd::Unit(m, next_unit++);
      for (int pass = 0; pass < 2; ++pass) {
        for (Eigen::Index k = 0; k < u.cols(); ++k) {
          if (k == j || (missing[static_cast<std::size_t>(k)] && k > j)) continue;
          c -= u.col(k).dot(c) * u.col(k);
        }
      }
      const double norm = c.norm();
      if (norm > 1e-8) {
        u.col(j) = c / norm;
        break;
      }
    }
  }
}

}  // namespace

Svd svd_dense(const Eigen::MatrixXd& m) {
  if (!m.allFinite()) throw InputError("svd: matrix has non-finite entries");
  if (m.rows() < m.cols()) {
    Svd t = svd_dense(m.transpose());
    return {std::move(t.v), std::move(t.s), std::move(t.u)};
  }
  const Eigen::Index rows = m.rows();
  const Eigen::Index n = m.cols();
  Eigen::MatrixXd a = m;
  Eigen::MatrixXd v = Eigen::MatrixXd::Identity(n, n);

  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    bool rotated = false;
    for (Eigen::Index p = 0; p + 1 < n; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        const double alpha = a.col(p).squaredNorm();
        const double beta = a.col(q).squaredNorm();
        const double gamma = a.col(p).dot(a.col(q));
        if (gamma == 0.0 || std::abs(gamma) <= kOrthogonality * std::sqrt(alpha * beta)) continue;
        rotated = true;
        const double zeta = (beta - alpha) / (2.0 * gamma);
        const double t = std::copysign(1.0, zeta) / (std::abs(zeta) + std::hypot(1.0, zeta));
        const double c = 1.0 / std::hypot(1.0, t);
        const double s = c * t;
        for (Eigen::Index i = 0; i < rows; ++i) {
          const double ap = a(i, p), aq = a(i, q);
          a(i, p) = c * ap - s * aq;
          a(i, q) = s * ap + c * aq;
        }
        for (Eigen::Index i = 0; i < n; ++i) {
          const double vp = v(i, p), vq = v(i, q);
          v(i, p) = c * vp - s * vq;
          v(i, q) = s * vp + c * vq;
        }
      }
    }
    if (!rotated) break;
  }

  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  Eigen::VectorXd norms(n);
  for (Eigen::Index j = 0; j < n; ++j) norms[j] = a.col(j).norm();
  std::stable_sort(order.begin(), order.end(),
                   [&norms](Eigen::Index x, Eigen::Index y) { return norms[x] > norms[y]; });

  Svd out;
  out.s.resize(n);
  out.u.resize(rows, n);
  out.v.resize(n, n);
  const double smax = norms.size() > 0 ? norms[order.front()] : 0.0;
  std::vector<bool> missing(static_cast<std::size_t>(n), false);
  for (Eigen::Index j = 0; j < n; ++j) {
    const Eigen::Index src = order[static_cast<std::size_t>(j)];
    out.s[j] = norms[src];
    out.v.col(j) = v.col(src);
    if (norms[src] > 1e-14 * smax && norms[src] > 0.0) {
      out.u.col(j) = a.col(src) / norms[src];
    } else {
      out.u.col(j).setZero();
      missing[static_cast<std::size_t>(j)] = true;
    }
  }
  if (std::find(missing.begin(), missing.end(), true) != missing.end()) complete_basis(out.u, missing);
  return out;
}

}  // namespace sdpi
