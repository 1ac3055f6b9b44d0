#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sdpi/channel.hpp"
#include "sdpi/execution.hpp"
#include "sdpi/fgenerator.hpp"

namespace sdpi {

struct OptimizerConfig {
  /// Dirichlet(1) random starts, on top of the deterministic chi^2 and vertex
  /// seeds.
  int restarts = 64;
  int max_iters = 500;
  double step_tolerance = 1e-10;
  /// Ratios within this of the best are ties, resolved by smaller input
  /// divergence.
  double ratio_tolerance = 1e-9;
  std::uint64_t seed = 0;
  bool include_chi2_seed = true;
  bool include_vertex_seeds = true;
  Execution execution = Execution::parallel;

  void validate() const;
};

/// Input divergences below this are treated as zero: the ratio of two
/// divergences that small is dominated by rounding.
inline constexpr double kMinInputDivergence = 1e-13;

struct RestartRecord {
  std::string origin;  // "chi2", "vertex", "random", "warm" or "unconstrained"
  double ratio = 0.0;  // best achieved ratio (0 when nothing usable was found)
  double input_divergence = 0.0;
  int iterations = 0;
};

/// Best achieved divergence ratio. `value` is always an actual ratio at
/// `argmax`, hence a certified lower bound on the supremum.
struct EtaEstimate {
  double value = 0.0;
  Pmf argmax;
  double input_divergence = 0.0;
  double output_divergence = 0.0;
  /// Set when value > 1 + 1e-9, which the data processing inequality rules
  /// out; signals a numerical problem. The value is never clipped.
  bool exceeds_one = false;
  std::vector<RestartRecord> diagnostics;

  explicit EtaEstimate(Pmf reference) : argmax(std::move(reference)) {}
};

/// Lower estimate of eta_f(P_X, W) by multistart ascent over the simplex in
/// softmax coordinates around P_X.
EtaEstimate estimate_eta_f(const FGenerator& f, const JointSpec& spec, const OptimizerConfig& cfg);

/// Supremum of the ratio over 0 < D_f(R||P) <= delta. `delta` may be +inf.
/// Feasible `warm_starts` are evaluated as additional candidates. When
/// `unconstrained` is given it is used as the unconstrained estimate instead
/// of recomputing it.
EtaEstimate estimate_tau(const FGenerator& f, const JointSpec& spec, double delta,
                         const OptimizerConfig& cfg, const std::vector<Pmf>& warm_starts = {},
                         const EtaEstimate* unconstrained = nullptr);

struct ConvergenceReport {
  std::vector<double> deltas;  // as given, descending
  std::vector<double> taus;
  double eta_chi2 = 0.0;
  double max_increase = 0.0;  // largest tau(delta_{i+1}) - tau(delta_i)
  bool non_increasing = false;
  double final_gap = 0.0;  // |tau(delta_last) - eta_chi2|
  bool pass = false;

  static constexpr double kMonotoneTolerance = 1e-6;
  static constexpr double kGapTolerance = 1e-3;
  static constexpr double kFinalDeltaLimit = 1e-8;
};

/// tau(delta) along a strictly decreasing sequence. Smaller deltas are solved
/// first so each argmax can seed the larger balls that contain it.
ConvergenceReport local_limit_probe(const FGenerator& f, const JointSpec& spec,
                                    const std::vector<double>& deltas, const OptimizerConfig& cfg);

}  // namespace sdpi
