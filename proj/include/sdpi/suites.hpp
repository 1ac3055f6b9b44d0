#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "sdpi/contraction.hpp"
#include "sdpi/execution.hpp"

namespace sdpi {

/// Worst observed margin of one checked relation; margin >= -tolerance
/// passes. Margins are "larger side minus smaller side" of the inequality.
struct CheckResult {
  std::string name;
  double worst_margin = 0.0;
  std::string worst_context;  // where the worst margin occurred
  double tolerance = 0.0;
  long count = 0;
  long violations = 0;

  bool pass() const { return violations == 0; }
};

struct SuiteReport {
  std::string suite;
  std::uint64_t seed = 0;
  long samples = 0;
  std::vector<CheckResult> checks;
  std::map<std::string, double> values;  // suite-specific figures

  bool pass() const;
};

struct InequalityOptions {
  long samples = 10000;
  std::uint64_t seed = 0;
  std::vector<std::size_t> dims = {2, 3, 5, 8};
  Execution execution = Execution::parallel;
};

/// Pinsker, the KL lower/upper bounds, the f-divergence Pinsker, lower and
/// upper bounds for kl and tsallis(0.5), tsallis(1.5), and the two
/// chi^2-scaled KL lower bounds, on Dirichlet(1) pairs.
SuiteReport inequality_suite(const InequalityOptions& options);

struct PropertyOptions {
  long samples = 100;
  std::uint64_t seed = 0;
  Execution execution = Execution::parallel;
  OptimizerConfig optimizer;
};

/// Normalization, independence, tensorization, sub-multiplicativity,
/// monotonicity and the maximal correlation lower bound on random specs.
SuiteReport properties_suite(const PropertyOptions& options);

struct LocalLimitOptions {
  long specs = 10;
  std::uint64_t seed = 0;
  std::vector<double> deltas = {1e-2, 1e-4, 1e-6, 1e-8};
  std::vector<std::string> generators = {"kl", "tsallis:1.5"};
  OptimizerConfig optimizer;
};

SuiteReport local_limit_suite(const LocalLimitOptions& options);

struct TensorizationOptions {
  long specs = 20;
  std::uint64_t seed = 0;
  std::vector<int> powers = {2, 3};
  OptimizerConfig optimizer;
};

/// Product eta_chi2 against the single copy on random binary and ternary
/// specs, and the naive vs corollary constants on the DSBS example.
SuiteReport tensorization_suite(const TensorizationOptions& options);

/// h(t) on the default grid and the Pinsker-type condition for kl and
/// tsallis(0.5), tsallis(1.5), tsallis(2).
SuiteReport appendix_c_suite();

}  // namespace sdpi
