#pragma once

#include <limits>

#include "sdpi/fgenerator.hpp"
#include "sdpi/pmf.hpp"

namespace sdpi {

/// Extended-real divergence value. Infinite divergences are ordinary results,
/// not errors.
struct DivergenceValue {
  double value = 0.0;
  bool finite = true;

  static DivergenceValue infinite() {
    return {std::numeric_limits<double>::infinity(), false};
  }
};

/// D_f(R||P) with 0 f(0/0) = 0 and 0 f(r/0) = r * perspective_at_zero.
DivergenceValue f_divergence(const FGenerator& f, const Pmf& r, const Pmf& p);

DivergenceValue kl_divergence(const Pmf& r, const Pmf& p);
DivergenceValue chi2_divergence(const Pmf& r, const Pmf& p);
/// ||R - P||_1 / 2, in [0, 1].
double total_variation(const Pmf& r, const Pmf& p);

/// Raw-vector form used by the optimizers; skips Pmf validation. `r` and `p`
/// must already be pmfs of equal length.
double f_divergence_raw(const FGenerator& f, const Eigen::VectorXd& r, const Eigen::VectorXd& p);

}  // namespace sdpi
