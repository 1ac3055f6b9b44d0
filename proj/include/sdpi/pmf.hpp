#pragma once

#include <cstddef>
#include <initializer_list>
#include <vector>

#include <Eigen/Dense>

namespace sdpi {

/// Probability mass function on a finite alphabet {0, ..., n-1}.
///
/// Masses are validated and renormalized once at construction; everything
/// downstream relies on the sum being 1 up to rounding.
class Pmf {
 public:
  /// Masses may drift from unit sum by at most this much before construction
  /// is refused.
  static constexpr double kSumTolerance = 1e-8;

  explicit Pmf(Eigen::VectorXd masses);
  explicit Pmf(const std::vector<double>& masses);
  Pmf(std::initializer_list<double> masses);

  static Pmf uniform(std::size_t n);
  static Pmf point_mass(std::size_t n, std::size_t at);
  static Pmf bernoulli(double q);  // (1 - q, q)

  std::size_t size() const { return static_cast<std::size_t>(masses_.size()); }
  double operator[](std::size_t i) const { return masses_[static_cast<Eigen::Index>(i)]; }
  const Eigen::VectorXd& masses() const { return masses_; }
  std::vector<double> to_vector() const;

  /// All masses strictly positive.
  bool interior() const;
  double min_mass() const;
  std::vector<std::size_t> support() const;
  Eigen::VectorXd sqrt_masses() const { return masses_.cwiseSqrt(); }

  /// Independent product; index of (a, b) is a * other.size() + b.
  Pmf product(const Pmf& other) const;

 private:
  Eigen::VectorXd masses_;
};

bool operator==(const Pmf& a, const Pmf& b);

}  // namespace sdpi
