#include "sdpi/divergence.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "sdpi/error.hpp"

namespace sdpi {

namespace {

void require_same_alphabet(const Pmf& r, const Pmf& p) {
  if (r.size() != p.size()) {
    std::ostringstream os;
    os << "divergence: alphabet sizes differ (" << r.size() << " vs " << p.size() << ")";
    throw InputError(os.str());
  }
}

// Sum over supp(P) of P f(R/P), written as P * [f(1+u) - f'(1) u] with
// u = (R - P)/P. The linear part sums to -f'(1) * (mass of R off supp(P))
// because both pmfs have unit mass, which is folded into the off-support
// term. Returns false when the divergence is infinite.
template <typename Remainder>
bool accumulate(const double* r, const double* p, Eigen::Index n, Remainder rem, double slope,
                double perspective, double& out) {
  double on = 0.0;
  double off = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double pi = p[i];
    const double ri = r[i];
    if (pi > 0.0) {
      on += pi * rem((ri - pi) / pi);
    } else if (ri > 0.0) {
      off += ri;
    }
  }
  if (off > 0.0) {
    if (std::isinf(perspective)) return false;
    on += off * (perspective - slope);
  }
  out = on > 0.0 ? on : 0.0;
  return true;
}

double kl_remainder(double u) { return u == -1.0 ? 1.0 : (1.0 + u) * std::log1p(u) - u; }

}  // namespace

double f_divergence_raw(const FGenerator& f, const Eigen::VectorXd& r, const Eigen::VectorXd& p) {
  const double slope = f.d1_at_one.value_or(0.0);
  double out = 0.0;
  const bool finite =
      f.remainder
          ? accumulate(r.data(), p.data(), p.size(), f.remainder, slope, f.perspective_at_zero, out)
          : accumulate(
                r.data(), p.data(), p.size(), [&f](double u) { return f.remainder_at(u); }, slope,
                f.perspective_at_zero, out);
  return finite ? out : std::numeric_limits<double>::infinity();
}

DivergenceValue f_divergence(const FGenerator& f, const Pmf& r, const Pmf& p) {
  require_same_alphabet(r, p);
  const double v = f_divergence_raw(f, r.masses(), p.masses());
  if (std::isinf(v)) return DivergenceValue::infinite();
  return {v, true};
}

DivergenceValue kl_divergence(const Pmf& r, const Pmf& p) {
  require_same_alphabet(r, p);
  double out = 0.0;
  const double inf = std::numeric_limits<double>::infinity();
  if (!accumulate(r.masses().data(), p.masses().data(), p.masses().size(), kl_remainder, 1.0, inf,
                  out)) {
    return DivergenceValue::infinite();
  }
  return {out, true};
}

DivergenceValue chi2_divergence(const Pmf& r, const Pmf& p) {
  require_same_alphabet(r, p);
  double out = 0.0;
  const double inf = std::numeric_limits<double>::infinity();
  if (!accumulate(
          r.masses().data(), p.masses().data(), p.masses().size(), [](double u) { return u * u; },
          2.0, inf, out)) {
    return DivergenceValue::infinite();
  }
  return {out, true};
}

double total_variation(const Pmf& r, const Pmf& p) {
  require_same_alphabet(r, p);
  return 0.5 * (r.masses() - p.masses()).cwiseAbs().sum();
}

}  // namespace sdpi
