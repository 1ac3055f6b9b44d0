#pragma once

#include <cstddef>
#include <string>

#include <Eigen/Dense>

#include "sdpi/pmf.hpp"

namespace sdpi {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Column-stochastic |Y| x |X| transition matrix; column x is P_{Y|X=x}.
class Channel {
 public:
  static constexpr double kColumnTolerance = 1e-10;

  explicit Channel(Matrix w);

  static Channel identity(std::size_t n);
  static Channel bsc(double p);
  /// Output alphabet {0, e, 1} in that order.
  static Channel bec(double beta);
  /// Every column equal to `column`.
  static Channel constant(const Pmf& column, std::size_t inputs);

  std::size_t inputs() const { return static_cast<std::size_t>(w_.cols()); }
  std::size_t outputs() const { return static_cast<std::size_t>(w_.rows()); }
  const Matrix& matrix() const { return w_; }

  /// Channel composition: (other after this), i.e. matrix other.W * W.
  Channel then(const Channel& other) const;

 private:
  Matrix w_;
};

/// Joint distribution P_{X,Y} carried as (P_X, P_{Y|X}) with P_Y derived.
class JointSpec {
 public:
  JointSpec(Pmf input, Channel channel);

  const Pmf& input() const { return input_; }
  const Channel& channel() const { return channel_; }
  const Pmf& output() const { return output_; }

 private:
  Pmf input_;
  Channel channel_;
  Pmf output_;
};

/// R = P + J = P + diag(sqrt(P)) K with J summing to zero and K orthogonal
/// to sqrt(P).
struct Perturbation {
  Pmf reference;
  Vector additive;   // J = R - P
  Vector spherical;  // K = diag(sqrt(P))^-1 J
  double epsilon = 0.0;  // ||K||_2, so K / epsilon is the unit direction

  /// Decomposes target - reference. Needs an interior reference pmf.
  static Perturbation between(const Pmf& reference, const Pmf& target);
};

Pmf push_forward(const Channel& w, const Pmf& p);

/// Divergence transition matrix B = diag(sqrt(P_Y))^+ W diag(sqrt(P_X)).
/// Entries touching a zero-mass input or output letter are exactly zero.
Matrix dtm(const Pmf& p, const Channel& w);
inline Matrix dtm(const JointSpec& spec) { return dtm(spec.input(), spec.channel()); }

/// Kronecker product; row/column (i, j) of the factors maps to i * n2 + j.
Matrix kronecker(const Matrix& a, const Matrix& b);

inline constexpr std::size_t kDefaultTensorCap = 4096;

/// Product of independent pairs. Refuses when either product alphabet would
/// exceed `cap`.
JointSpec tensor(const JointSpec& a, const JointSpec& b, std::size_t cap = kDefaultTensorCap);
/// n-fold i.i.d. product of `spec` with itself.
JointSpec tensor_power(const JointSpec& spec, int n, std::size_t cap = kDefaultTensorCap);

JointSpec make_bsc(double p);            // uniform input
JointSpec make_bsc(double p, double q);  // Bernoulli(q) input, q = P(X = 1)
JointSpec make_bec(double beta, double q);
JointSpec make_dsbs(double alpha);

/// Restriction of a joint spec to the supports of P_X and P_Y.
struct SupportRestriction {
  std::vector<std::size_t> input_letters;
  std::vector<std::size_t> output_letters;
  Vector input;   // P_X on its support
  Vector output;  // P_Y on its support
  Matrix channel; // rows/cols restricted (columns stay stochastic)
};
SupportRestriction restrict_to_support(const JointSpec& spec);

/// Spherical perturbation of P along K with scale eps. K must be orthogonal
/// to sqrt(P) and the result must remain a valid pmf.
Pmf perturb(const Pmf& p, const Vector& k, double eps);

/// Largest eps >= 0 with P + eps diag(sqrt(P)) K still non-negative
/// (+inf if K never pushes a mass down).
double max_perturbation_scale(const Pmf& p, const Vector& k);

}  // namespace sdpi
