#include "sdpi/random.hpp"

#include <cmath>
#include <numbers>

#include "sdpi/channel.hpp"
#include "sdpi/pmf.hpp"

namespace sdpi {

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
  // splitmix64 finalizer over the combined words
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

Rng::Rng(std::uint64_t seed, std::uint64_t stream) : engine_(mix_seed(seed, stream)) {}

double Rng::uniform() {
  // 53 random bits, shifted off zero
  return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
}

double Rng::normal() {
  if (have_spare_) {
    have_spare_ = false;
    return spare_;
  }
  const double u1 = uniform();
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double theta = 2.0 * std::numbers::pi * u2;
  spare_ = r * std::sin(theta);
  have_spare_ = true;
  return r * std::cos(theta);
}

Eigen::VectorXd Rng::gaussian_vector(Eigen::Index n) {
  Eigen::VectorXd v(n);
  for (Eigen::Index i = 0; i < n; ++i) v[i] = normal();
  return v;
}

Eigen::VectorXd Rng::dirichlet_ones(Eigen::Index n) {
  Eigen::VectorXd v(n);
  for (;;) {
    for (Eigen::Index i = 0; i < n; ++i) v[i] = -std::log(uniform());
    const double sum = v.sum();
    v /= sum;
    if ((v.array() > 0.0).all()) return v;
  }
}

Pmf random_interior_pmf(Rng& rng, std::size_t n) {
  return Pmf(rng.dirichlet_ones(static_cast<Eigen::Index>(n)));
}

JointSpec random_interior_spec(Rng& rng, std::size_t nx, std::size_t ny) {
  Pmf input = random_interior_pmf(rng, nx);
  Matrix w(static_cast<Eigen::Index>(ny), static_cast<Eigen::Index>(nx));
  for (Eigen::Index x = 0; x < w.cols(); ++x) w.col(x) = rng.dirichlet_ones(w.rows());
  return JointSpec(std::move(input), Channel(std::move(w)));
}

}  // namespace sdpi
