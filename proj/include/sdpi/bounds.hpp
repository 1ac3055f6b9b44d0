#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "sdpi/channel.hpp"
#include "sdpi/conditions.hpp"
#include "sdpi/contraction.hpp"
#include "sdpi/fgenerator.hpp"
#include "sdpi/spectral.hpp"

namespace sdpi {

/// Distribution-dependent Pinsker constant: log((1-p)/p) / (1-2p) on
/// [0, 1/2), continuously extended by 2 at 1/2; +inf at 0.
double phi(double p);

enum class BalanceMode { exact, dp };

inline constexpr std::size_t kBalanceEnumerationCap = 20;
inline constexpr double kBalanceResolution = 1e-9;

struct Balance {
  double value = 0.0;
  bool exact = true;
  /// Upper bound on value - true balance in dp mode; 0 when exact.
  double error_band = 0.0;
};

/// max over events A of min{P(A), 1 - P(A)}. Exact mode enumerates subsets
/// and refuses alphabets above `cap`. dp mode runs a trimmed subset-sum
/// recursion at kBalanceResolution and reports a value that never
/// underestimates the true balance, so bounds built on it stay valid.
Balance balance(const Pmf& p, BalanceMode mode = BalanceMode::exact,
                std::size_t cap = kBalanceEnumerationCap);
double balance_coefficient(const Pmf& p, BalanceMode mode = BalanceMode::exact,
                           std::size_t cap = kBalanceEnumerationCap);

double thm2_bound(const JointSpec& spec);
double thm3_bound(const JointSpec& spec, BalanceMode mode = BalanceMode::exact);
double thm4_bound(const FGenerator& f, const JointSpec& spec);
double eq33_bound(const FGenerator& f, const JointSpec& spec);
double combined_bound(const FGenerator& f, const JointSpec& spec);

/// Same formulas from precomputed inputs.
double thm2_from(double eta_chi2, double p_star);
double thm3_from(double eta_chi2, double p_star, double balance);
double thm4_constant(const FGenerator& f, double p_star);
double eq33_constant(const FGenerator& f, double p_star);

/// Grid checks that gate the f-dependent bounds.
struct FConditions {
  std::optional<ConditionReport> pinsker;
  std::optional<ConditionReport> difference_quotient;
  std::optional<ConditionReport> second_derivative;

  bool thm4_certified() const;
  bool eq33_certified() const;
};
FConditions assess_conditions(const FGenerator& f, const GridSpec& grid = {});

struct Verdict {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  double tolerance = 0.0;
  bool pass = false;  // lhs <= rhs + tolerance
};

struct TensorInfo {
  int n = 1;
  std::size_t product_inputs = 0;
  double single_eta_chi2 = 0.0;
  double product_eta_chi2 = 0.0;
  /// eta_f of the product channel evaluated at argmax x P^(n-1): an achieved
  /// ratio on the product, hence a lower bound on the product eta_f.
  double product_eta_f_lower = 0.0;
  double product_p_star = 0.0;
  double naive_constant = 0.0;      // 1/min P_{X^n} = (1/p_star)^n
  double corollary_constant = 0.0;  // 1/p_star, the single-letter constant
  double naive_bound = 0.0;         // naive_constant * product eta_chi2
  double corollary_bound = 0.0;     // corollary_constant * product eta_chi2
  /// Single-letter constant of the f-dependent bound, when f has one.
  std::optional<double> f_corollary_constant;
};

struct BoundReport {
  std::string f_name;
  double eta_chi2 = 0.0;
  double rho = 0.0;
  double eta_f_estimate = 0.0;
  double eta_f_input_divergence = 0.0;
  double eta_f_output_divergence = 0.0;
  std::vector<double> eta_f_argmax;
  bool eta_f_exceeds_one = false;
  double p_star = 0.0;
  double balance = 0.0;
  bool balance_exact = true;
  double phi_of_balance = 0.0;
  double thm2 = 0.0;  // raw
  double thm3 = 0.0;  // raw
  double thm2_clipped = 0.0;
  double thm3_clipped = 0.0;
  std::optional<double> thm4;
  std::optional<double> eq33;
  std::optional<double> eq34;
  bool thm4_certified = false;
  bool eq33_certified = false;
  FConditions conditions;
  std::vector<Verdict> verdicts;
  std::optional<TensorInfo> tensor;

  bool all_pass() const;
};

struct CertifyOptions {
  OptimizerConfig optimizer;
  BalanceMode balance_mode = BalanceMode::exact;
  GridSpec grid;
  /// Precomputed condition checks for f; computed on demand when absent.
  std::optional<FConditions> conditions;
};

/// Spectral analysis, eta_f estimate and every applicable bound, with the
/// verdicts eta_chi2 - 1e-6 <= estimate <= bound + 1e-9 for each certified
/// bound (thm3 and thm2 for KL, thm4 and eq33 otherwise). Needs an interior
/// input pmf and a generator with declared curvature at 1.
BoundReport certify(const FGenerator& f, const JointSpec& spec, const CertifyOptions& options = {});

/// certify on the single letter plus the n-fold product comparison.
BoundReport tensorized_certify(const FGenerator& f, const JointSpec& spec, int n,
                               const CertifyOptions& options = {},
                               std::size_t cap = kDefaultTensorCap);

inline constexpr double kClosedFormSlack = 1e-9;
inline constexpr double kOptimizerSlack = 1e-6;

}  // namespace sdpi
