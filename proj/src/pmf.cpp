#include "sdpi/pmf.hpp"

#include <cmath>
#include <sstream>

#include "sdpi/error.hpp"

namespace sdpi {

namespace {

Eigen::VectorXd validated(Eigen::VectorXd m) {
  if (m.size() == 0) throw InputError("pmf: empty alphabet");
  double sum = 0.0;
  for (Eigen::Index i = 0; i < m.size(); ++i) {
    const double v = m[i];
    if (!std::isfinite(v)) {
      std::ostringstream os;
      os << "pmf: mass " << i << " is not finite";
      throw InputError(os.str());
    }
    if (v < 0.0) {
      std::ostringstream os;
      os << "pmf: mass " << i << " is negative (" << v << ")";
      throw InputError(os.str());
    }
    sum += v;
  }
  if (std::abs(sum - 1.0) > Pmf::kSumTolerance) {
    std::ostringstream os;
    os.precision(17);
    os << "pmf: masses sum to " << sum << ", expected 1";
    throw InputError(os.str());
  }
  m /= sum;
  return m;
}

}  // namespace

Pmf::Pmf(Eigen::VectorXd masses) : masses_(validated(std::move(masses))) {}

Pmf::Pmf(const std::vector<double>& masses)
    : Pmf(Eigen::Map<const Eigen::VectorXd>(masses.data(), static_cast<Eigen::Index>(masses.size()))
              .eval()) {}

Pmf::Pmf(std::initializer_list<double> masses) : Pmf(std::vector<double>(masses)) {}

Pmf Pmf::uniform(std::size_t n) {
  if (n == 0) throw InputError("pmf: empty alphabet");
  return Pmf(Eigen::VectorXd::Constant(static_cast<Eigen::Index>(n), 1.0 / static_cast<double>(n)));
}

Pmf Pmf::point_mass(std::size_t n, std::size_t at) {
  if (at >= n) throw InputError("pmf: point mass index outside alphabet");
  Eigen::VectorXd m = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));
  m[static_cast<Eigen::Index>(at)] = 1.0;
  return Pmf(std::move(m));
}

Pmf Pmf::bernoulli(double q) {
  if (!(q >= 0.0 && q <= 1.0)) throw InputError("pmf: Bernoulli parameter outside [0, 1]");
  return Pmf{1.0 - q, q};
}

std::vector<double> Pmf::to_vector() const {
  return std::vector<double>(masses_.data(), masses_.data() + masses_.size());
}

bool Pmf::interior() const { return (masses_.array() > 0.0).all(); }

double Pmf::min_mass() const { return masses_.minCoeff(); }

std::vector<std::size_t> Pmf::support() const {
  std::vector<std::size_t> s;
  for (Eigen::Index i = 0; i < masses_.size(); ++i) {
    if (masses_[i] > 0.0) s.push_back(static_cast<std::size_t>(i));
  }
  return s;
}

Pmf Pmf::product(const Pmf& other) const {
  const Eigen::Index n1 = masses_.size();
  const Eigen::Index n2 = other.masses_.size();
  Eigen::VectorXd m(n1 * n2);
  for (Eigen::Index a = 0; a < n1; ++a) {
    for (Eigen::Index b = 0; b < n2; ++b) m[a * n2 + b] = masses_[a] * other.masses_[b];
  }
  return Pmf(std::move(m));
}

bool operator==(const Pmf& a, const Pmf& b) { return a.masses() == b.masses(); }

}  // namespace sdpi
