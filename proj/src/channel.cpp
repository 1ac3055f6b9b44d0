#include "sdpi/channel.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "sdpi/error.hpp"

namespace sdpi {

namespace {

void require_unit_interval(double v, const char* what) {
  if (!(v >= 0.0 && v <= 1.0)) {
    std::ostringstream os;
    os << what << " = " << v << " is outside [0, 1]";
    throw InputError(os.str());
  }
}

Matrix validated(Matrix w) {
  if (w.rows() == 0 || w.cols() == 0) throw InputError("channel: empty matrix");
  for (Eigen::Index x = 0; x < w.cols(); ++x) {
    double sum = 0.0;
    for (Eigen::Index y = 0; y < w.rows(); ++y) {
      const double v = w(y, x);
      if (!std::isfinite(v) || v < 0.0) {
        std::ostringstream os;
        os << "channel: entry at row " << y << ", column " << x << " is "
           << (std::isfinite(v) ? "negative" : "not finite") << " (" << v << ")";
        throw InputError(os.str());
      }
      sum += v;
    }
    if (std::abs(sum - 1.0) > Channel::kColumnTolerance) {
      std::ostringstream os;
      os.precision(17);
      os << "channel: column " << x << " sums to " << sum << ", expected 1";
      throw InputError(os.str());
    }
    w.col(x) /= sum;
  }
  return w;
}

}  // namespace

Channel::Channel(Matrix w) : w_(validated(std::move(w))) {}

Channel Channel::identity(std::size_t n) {
  const auto k = static_cast<Eigen::Index>(n);
  return Channel(Matrix::Identity(k, k));
}

Channel Channel::bsc(double p) {
  require_unit_interval(p, "bsc crossover probability");
  Matrix w(2, 2);
  w << 1.0 - p, p, p, 1.0 - p;
  return Channel(std::move(w));
}

Channel Channel::bec(double beta) {
  require_unit_interval(beta, "bec erasure probability");
  Matrix w(3, 2);
  w << 1.0 - beta, 0.0, beta, beta, 0.0, 1.0 - beta;
  return Channel(std::move(w));
}

Channel Channel::constant(const Pmf& column, std::size_t inputs) {
  Matrix w(static_cast<Eigen::Index>(column.size()), static_cast<Eigen::Index>(inputs));
  for (Eigen::Index x = 0; x < w.cols(); ++x) w.col(x) = column.masses();
  return Channel(std::move(w));
}

Channel Channel::then(const Channel& other) const {
  if (other.inputs() != outputs()) throw InputError("channel: composition dimension mismatch");
  return Channel(other.w_ * w_);
}

JointSpec::JointSpec(Pmf input, Channel channel)
    : input_(std::move(input)),
      channel_(std::move(channel)),
      output_(push_forward(channel_, input_)) {}

Perturbation Perturbation::between(const Pmf& reference, const Pmf& target) {
  if (reference.size() != target.size()) throw InputError("perturbation: alphabet mismatch");
  if (!reference.interior()) throw InputError("perturbation: reference pmf must be interior");
  Perturbation pert{reference, target.masses() - reference.masses(), Vector(), 0.0};
  pert.spherical = pert.additive.cwiseQuotient(reference.sqrt_masses());
  pert.epsilon = pert.spherical.norm();
  return pert;
}

Pmf push_forward(const Channel& w, const Pmf& p) {
  if (w.inputs() != p.size()) {
    std::ostringstream os;
    os << "push_forward: channel has " << w.inputs() << " inputs but pmf has " << p.size()
       << " letters";
    throw InputError(os.str());
  }
  Vector out = w.matrix() * p.masses();
  const double sum = out.sum();
  if (std::abs(sum - 1.0) > 1e-12) out /= sum;
  return Pmf(std::move(out));
}

Matrix dtm(const Pmf& p, const Channel& w) {
  const Pmf py = push_forward(w, p);
  Matrix b = Matrix::Zero(w.matrix().rows(), w.matrix().cols());
  for (Eigen::Index x = 0; x < b.cols(); ++x) {
    const double px = p[static_cast<std::size_t>(x)];
    if (px <= 0.0) continue;
    const double sx = std::sqrt(px);
    for (Eigen::Index y = 0; y < b.rows(); ++y) {
      const double pyv = py[static_cast<std::size_t>(y)];
      if (pyv <= 0.0) continue;
      b(y, x) = w.matrix()(y, x) * sx / std::sqrt(pyv);
    }
  }
  return b;
}

Matrix kronecker(const Matrix& a, const Matrix& b) {
  Matrix k(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      k.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return k;
}

JointSpec tensor(const JointSpec& a, const JointSpec& b, std::size_t cap) {
  const std::size_t nx = a.input().size() * b.input().size();
  const std::size_t ny = a.channel().outputs() * b.channel().outputs();
  if (nx > cap || ny > cap) {
    std::ostringstream os;
    os << "tensor: product alphabet " << nx << " x " << ny << " exceeds the cap of " << cap
       << " letters";
    throw InputError(os.str());
  }
  return JointSpec(a.input().product(b.input()),
                   Channel(kronecker(a.channel().matrix(), b.channel().matrix())));
}

JointSpec tensor_power(const JointSpec& spec, int n, std::size_t cap) {
  if (n < 1) throw InputError("tensor_power: n must be at least 1");
  JointSpec out = spec;
  for (int i = 1; i < n; ++i) out = tensor(out, spec, cap);
  return out;
}

JointSpec make_bsc(double p) { return JointSpec(Pmf::uniform(2), Channel::bsc(p)); }

JointSpec make_bsc(double p, double q) {
  require_unit_interval(q, "input probability q");
  return JointSpec(Pmf::bernoulli(q), Channel::bsc(p));
}

JointSpec make_bec(double beta, double q) {
  if (!(q > 0.0 && q < 1.0)) {
    std::ostringstream os;
    os << "input probability q = " << q << " is outside (0, 1)";
    throw InputError(os.str());
  }
  return JointSpec(Pmf::bernoulli(q), Channel::bec(beta));
}

JointSpec make_dsbs(double alpha) {
  require_unit_interval(alpha, "dsbs crossover probability");
  return make_bsc(alpha);
}

SupportRestriction restrict_to_support(const JointSpec& spec) {
  SupportRestriction r;
  r.input_letters = spec.input().support();
  r.output_letters = spec.output().support();
  const auto nx = static_cast<Eigen::Index>(r.input_letters.size());
  const auto ny = static_cast<Eigen::Index>(r.output_letters.size());
  r.input.resize(nx);
  r.output.resize(ny);
  r.channel.resize(ny, nx);
  for (Eigen::Index i = 0; i < nx; ++i) r.input[i] = spec.input()[r.input_letters[static_cast<std::size_t>(i)]];
  for (Eigen::Index j = 0; j < ny; ++j) r.output[j] = spec.output()[r.output_letters[static_cast<std::size_t>(j)]];
  for (Eigen::Index i = 0; i < nx; ++i) {
    for (Eigen::Index j = 0; j < ny; ++j) {
      r.channel(j, i) = spec.channel().matrix()(
          static_cast<Eigen::Index>(r.output_letters[static_cast<std::size_t>(j)]),
          static_cast<Eigen::Index>(r.input_letters[static_cast<std::size_t>(i)]));
    }
  }
  return r;
}

Pmf perturb(const Pmf& p, const Vector& k, double eps) {
  if (static_cast<std::size_t>(k.size()) != p.size()) throw InputError("perturb: alphabet mismatch");
  if (!std::isfinite(eps)) throw InputError("perturb: epsilon must be finite");
  const Vector s = p.sqrt_masses();
  if (std::abs(k.dot(s)) > 1e-10 * std::max(1.0, k.norm())) {
    throw InputError("perturb: direction is not orthogonal to sqrt(P)");
  }
  Vector r = p.masses() + eps * s.cwiseProduct(k);
  for (Eigen::Index i = 0; i < r.size(); ++i) {
    if (r[i] < 0.0) {
      if (r[i] > -1e-15) {
        r[i] = 0.0;
        continue;
      }
      std::ostringstream os;
      os << "perturb: epsilon " << eps << " drives mass " << i << " negative";
      throw InputError(os.str());
    }
  }
  return Pmf(std::move(r));
}

double max_perturbation_scale(const Pmf& p, const Vector& k) {
  if (static_cast<std::size_t>(k.size()) != p.size()) throw InputError("perturb: alphabet mismatch");
  double scale = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double ki = k[static_cast<Eigen::Index>(i)];
    if (ki < 0.0 && p[i] > 0.0) scale = std::min(scale, std::sqrt(p[i]) / -ki);
  }
  return scale;
}

}  // namespace sdpi
