#pragma once

#include <functional>
#include <optional>
#include <string>
#include <string_view>

namespace sdpi {

/// Convex generator f with f(1) = 0 defining D_f(R||P) = sum_x P(x) f(R(x)/P(x)).
///
/// Boundary limits and derivatives at unity are carried as declared values.
/// Bound constants are sensitive to them, so they are never inferred
/// numerically; user-supplied values are instead validated against finite
/// differences (see `validate`).
struct FGenerator {
  std::string name;
  std::function<double(double)> eval;

  double f_at_zero = 0.0;            // lim_{t->0+} f(t); may be +inf
  double perspective_at_zero = 0.0;  // lim_{p->0+} p f(1/p); may be +inf

  std::optional<double> d1_at_one;
  std::optional<double> d2_at_one;
  std::optional<double> d3_at_one;

  /// Closed-form f''(t), needed by the alternative bound that evaluates
  /// f'' at 1/p_star and by the monotone-curvature check.
  std::function<double(double)> second_derivative;

  /// Optional accurate form of f(1 + u) - f'(1) u, used by the divergence
  /// kernels so that divergences between nearby pmfs keep their relative
  /// precision. Derived from eval when absent.
  std::function<double(double)> remainder;

  double operator()(double t) const { return eval(t); }
  /// f(1 + u) - f'(1) u (f(1 + u) when f'(1) is not declared).
  double remainder_at(double u) const;

  bool has_curvature() const { return d2_at_one.has_value(); }
  /// f'(1) + f(0), the affine-invariant constant of the chi^2 upper bound.
  std::optional<double> linear_upper_constant() const;
};

enum class BuiltinKind { kl, chi2, tv, tsallis };

FGenerator make_kl();
FGenerator make_chi2();
FGenerator make_tv();
/// (t^alpha - 1) / (alpha - 1) for alpha in (0, 2], alpha != 1.
FGenerator make_tsallis(double alpha);

FGenerator make_builtin_f(BuiltinKind kind, double alpha = 0.0);

/// Parses "kl", "chi2", "tv" or "tsallis:<alpha>".
FGenerator parse_f(std::string_view name);

/// Declared data for a user-defined generator.
struct UserFDeclaration {
  std::string name;
  std::function<double(double)> eval;
  double f_at_zero = 0.0;
  double perspective_at_zero = 0.0;
  std::optional<double> d1_at_one;
  std::optional<double> d2_at_one;
  std::optional<double> d3_at_one;
  std::function<double(double)> second_derivative;
  std::function<double(double)> remainder;
};

/// Builds a generator from declared data after running `validate`.
FGenerator make_user_f(UserFDeclaration decl);

struct FValidation {
  bool ok = true;
  std::string message;  // first failure, empty when ok
  double f_at_one = 0.0;
  std::optional<double> fd_d1, fd_d2, fd_d3;  // finite-difference estimates
};

/// Checks f(1) = 0 (1e-12), f''(1) > 0 when declared, declared derivatives
/// against central differences at t = 1 (1e-5, relative above magnitude 1),
/// and convexity of f on a log-spaced grid over [1e-6, 1e3].
FValidation validate(const FGenerator& f);

}  // namespace sdpi
