#pragma once

#include <optional>
#include <string>
#include <vector>

#include "sdpi/fgenerator.hpp"

namespace sdpi {

/// Log-spaced evaluation grid. The analytic conditions are stated on all of
/// (0, inf); a grid check only covers [t_min, t_max] and reports that range.
struct GridSpec {
  double t_min = 1e-6;
  double t_max = 1e3;
  int points = 10000;

  std::vector<double> values() const;
  void validate() const;
};

struct ConditionReport {
  std::string condition;
  std::string generator;
  double t_min = 0.0;
  double t_max = 0.0;
  int points = 0;
  double worst_margin = 0.0;  // min over grid; negative means violated
  double worst_at = 0.0;      // grid point attaining worst_margin
  double tolerance = 0.0;     // pass iff worst_margin >= -tolerance
  bool pass = false;

  // KL only: min of h(t) = 2t(t+2)log t - (5t+1)(t-1) and where it occurs.
  std::optional<double> h_min;
  std::optional<double> h_argmin;
};

/// (f(t) - f'(1)(t-1))(1 - f'''(1)/(3 f''(1)) (t-1)) >= f''(1)/2 (t-1)^2,
/// margin = LHS - RHS, tolerance 1e-9.
ConditionReport check_pinsker_condition(const FGenerator& f, const GridSpec& grid = {});

/// Concavity of g(x) = (f(x) - f(0)) / x from chords over consecutive grid
/// triples. Margin is minus the largest chord excess divided by
/// max(1, |g|) at the triple; tolerance 1e-9.
ConditionReport check_difference_quotient_concave(const FGenerator& f, const GridSpec& grid = {});

/// f'' non-increasing on the grid (hypothesis of the f''(1/p_star) bound).
/// Margins are relative to max(1, |f''|) at consecutive points.
ConditionReport check_nonincreasing_second_derivative(const FGenerator& f,
                                                      const GridSpec& grid = {});

/// h(t) = 2t(t+2)log t - (5t+1)(t-1); six times the KL margin of the
/// Pinsker-type condition.
double kl_condition_h(double t);

}  // namespace sdpi
