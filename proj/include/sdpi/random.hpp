#pragma once

#include <cstdint>
#include <random>

#include <Eigen/Dense>

namespace sdpi {

class Pmf;
class JointSpec;

/// Deterministic stream derived from (seed, stream index). Conversions to
/// doubles are done here rather than through <random> distributions so the
/// sequences do not depend on the standard library implementation.
class Rng {
 public:
  Rng(std::uint64_t seed, std::uint64_t stream);

  std::uint64_t next_u64() { return engine_(); }
  /// Uniform on the open interval (0, 1).
  double uniform();
  double normal();

  Eigen::VectorXd gaussian_vector(Eigen::Index n);
  /// Dirichlet(1,...,1) sample; redrawn until every coordinate is positive.
  Eigen::VectorXd dirichlet_ones(Eigen::Index n);

 private:
  std::mt19937_64 engine_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream);

Pmf random_interior_pmf(Rng& rng, std::size_t n);
/// Input pmf and every channel column drawn from Dirichlet(1).
JointSpec random_interior_spec(Rng& rng, std::size_t nx, std::size_t ny);

}  // namespace sdpi
