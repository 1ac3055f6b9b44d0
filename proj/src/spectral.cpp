#include "sdpi/spectral.hpp"

#include <algorithm>
#include <cmath>

#include "sdpi/error.hpp"
#include "sdpi/random.hpp"
#include "sdpi/svd.hpp"

namespace sdpi {

namespace {

struct Restricted {
  SupportRestriction support;
  Matrix b;   // DTM on the supports
  Vector sx;  // sqrt(P_X) on its support
  Vector sy;
};

Restricted restricted_dtm(const JointSpec& spec) {
  Restricted r{restrict_to_support(spec), Matrix(), Vector(), Vector()};
  r.sx = r.support.input.cwiseSqrt();
  r.sy = r.support.output.cwiseSqrt();
  r.b = r.sy.cwiseInverse().asDiagonal() * r.support.channel * r.sx.asDiagonal();
  return r;
}

Vector orthogonal_unit(const Vector& candidate, const Vector& sx) {
  Vector k = candidate - candidate.dot(sx) * sx;
  k -= k.dot(sx) * sx;
  const double norm = k.norm();
  if (!(norm > 1e-8)) return Vector();
  return k / norm;
}

}  // namespace

SpectralResult analyze(const JointSpec& spec) {
  const Restricted r = restricted_dtm(spec);
  SpectralResult out;
  out.input_support = r.support.input_letters;
  out.output_support = r.support.output_letters;
  out.singular_values = svd_dense(r.b).s;
  out.principal_k = Vector::Zero(static_cast<Eigen::Index>(spec.input().size()));

  const Eigen::Index nx = r.sx.size();
  if (nx <= 1) return out;

  // Removing the unit triple leaves exactly the non-trivial spectrum.
  const Matrix deflated = r.b - r.sy * r.sx.transpose();
  const Svd d = svd_dense(deflated);
  out.rho = r.support.output_letters.size() <= 1 ? 0.0 : std::min(1.0, d.s[0]);
  out.eta_chi2 = out.rho * out.rho;

  Vector k;
  for (Eigen::Index j = 0; j < d.v.cols() && k.size() == 0; ++j) k = orthogonal_unit(d.v.col(j), r.sx);
  for (Eigen::Index j = 0; j < nx && k.size() == 0; ++j) k = orthogonal_unit(Vector::Unit(nx, j), r.sx);
  for (Eigen::Index i = 0; i < nx; ++i) {
    if (std::abs(k[i]) > 1e-12) {
      if (k[i] < 0.0) k = -k;
      break;
    }
  }
  for (Eigen::Index i = 0; i < nx; ++i) {
    out.principal_k[static_cast<Eigen::Index>(r.support.input_letters[static_cast<std::size_t>(i)])] = k[i];
  }
  return out;
}

double rayleigh_check(const JointSpec& spec, int trials, std::uint64_t seed) {
  if (trials < 0) throw InputError("rayleigh_check: trials must be non-negative");
  const Restricted r = restricted_dtm(spec);
  const Eigen::Index nx = r.sx.size();
  if (nx <= 1) return 0.0;
  const SpectralResult s = analyze(spec);
  Vector k(nx);
  for (Eigen::Index i = 0; i < nx; ++i) {
    k[i] = s.principal_k[static_cast<Eigen::Index>(r.support.input_letters[static_cast<std::size_t>(i)])];
  }
  double best = (r.b * k).squaredNorm();
  Rng rng(seed, 0);
  for (int t = 0; t < trials; ++t) {
    const Vector x = orthogonal_unit(rng.gaussian_vector(nx), r.sx);
    if (x.size() == 0) continue;
    best = std::max(best, (r.b * x).squaredNorm());
  }
  return best;
}

}  // namespace sdpi
