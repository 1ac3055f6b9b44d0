#pragma once

#include <cstdint>
#include <vector>

#include "sdpi/channel.hpp"

namespace sdpi {

struct SpectralResult {
  /// Singular values of the support-restricted DTM, descending.
  Vector singular_values;
  double rho = 0.0;       // maximal correlation, second singular value
  double eta_chi2 = 0.0;  // rho * rho
  /// Unit right singular vector for rho, orthogonal to sqrt(P_X), indexed by
  /// the full input alphabet (zero off the support). Sign fixed so the first
  /// non-negligible component is positive. Zero when the support has a single
  /// letter.
  Vector principal_k;
  std::vector<std::size_t> input_support;
  std::vector<std::size_t> output_support;
};

/// Maximal correlation and chi^2 contraction coefficient of (P_X, W).
///
/// rho and principal_k come from the DTM with its unit singular triple
/// (sqrt(P_Y), 1, sqrt(P_X)) removed, so a repeated top singular value (for
/// instance a noiseless channel) cannot swap the trivial direction in.
SpectralResult analyze(const JointSpec& spec);

/// Largest ||B x||^2 over `trials` random unit x orthogonal to sqrt(P_X),
/// with principal_k always included as a candidate.
double rayleigh_check(const JointSpec& spec, int trials, std::uint64_t seed);

}  // namespace sdpi
