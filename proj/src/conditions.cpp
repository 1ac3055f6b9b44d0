#include "sdpi/conditions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "sdpi/error.hpp"

namespace sdpi {

namespace {

ConditionReport start_report(const char* name, const FGenerator& f, const GridSpec& grid) {
  ConditionReport r;
  r.condition = name;
  r.generator = f.name;
  r.t_min = grid.t_min;
  r.t_max = grid.t_max;
  r.points = grid.points;
  r.worst_margin = std::numeric_limits<double>::infinity();
  r.tolerance = 1e-9;
  return r;
}

void finish(ConditionReport& r) { r.pass = r.worst_margin >= -r.tolerance; }

}  // namespace

std::vector<double> GridSpec::values() const {
  validate();
  std::vector<double> t(static_cast<std::size_t>(points));
  const double lo = std::log(t_min);
  const double hi = std::log(t_max);
  for (int i = 0; i < points; ++i) {
    double v = std::exp(lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(points - 1));
    if (std::abs(v - 1.0) < 1e-9) v = 1.0;
    t[static_cast<std::size_t>(i)] = v;
  }
  t.front() = t_min;
  t.back() = t_max;
  return t;
}

void GridSpec::validate() const {
  if (!(t_min > 0.0) || !(t_max > t_min) || !std::isfinite(t_max)) {
    throw InputError("grid: need 0 < t_min < t_max < inf");
  }
  if (points < 3) throw InputError("grid: need at least 3 points");
}

double kl_condition_h(double t) {
  return 2.0 * t * (t + 2.0) * std::log(t) - (5.0 * t + 1.0) * (t - 1.0);
}

ConditionReport check_pinsker_condition(const FGenerator& f, const GridSpec& grid) {
  if (!f.d1_at_one || !f.d2_at_one || !f.d3_at_one) {
    throw MissingDerivative("generator '" + f.name +
                            "' lacks f'(1), f''(1) or f'''(1), needed for the Pinsker-type condition");
  }
  const double d2 = *f.d2_at_one;
  const double d3 = *f.d3_at_one;
  ConditionReport r = start_report("pinsker", f, grid);
  const std::vector<double> ts = grid.values();
  for (double t : ts) {
    const double u = t - 1.0;
    const double lhs = f.remainder_at(u) * (1.0 - d3 / (3.0 * d2) * u);
    const double rhs = 0.5 * d2 * u * u;
    const double margin = lhs - rhs;
    if (margin < r.worst_margin) {
      r.worst_margin = margin;
      r.worst_at = t;
    }
  }
  if (f.name == "kl") {
    double best = std::numeric_limits<double>::infinity();
    double at = 0.0;
    for (double t : ts) {
      const double h = kl_condition_h(t);
      if (h < best) {
        best = h;
        at = t;
      }
    }
    r.h_min = best;
    r.h_argmin = at;
  }
  finish(r);
  return r;
}

ConditionReport check_difference_quotient_concave(const FGenerator& f, const GridSpec& grid) {
  if (!std::isfinite(f.f_at_zero)) {
    throw InputError("generator '" + f.name + "' has infinite f(0); difference quotient undefined");
  }
  ConditionReport r = start_report("difference_quotient_concave", f, grid);
  const std::vector<double> ts = grid.values();
  std::vector<double> g(ts.size());
  for (std::size_t i = 0; i < ts.size(); ++i) g[i] = (f(ts[i]) - f.f_at_zero) / ts[i];
  // Chord excess relative to the local magnitude of g; rounding in
  // f(x) - f(0) near x = 0 scales with |g| itself.
  for (std::size_t i = 1; i + 1 < ts.size(); ++i) {
    const double a = ts[i - 1], b = ts[i], c = ts[i + 1];
    const double chord = ((c - b) * g[i - 1] + (b - a) * g[i + 1]) / (c - a);
    const double scale = std::max({1.0, std::abs(g[i - 1]), std::abs(g[i]), std::abs(g[i + 1])});
    const double margin = (g[i] - chord) / scale;
    if (margin < r.worst_margin) {
      r.worst_margin = margin;
      r.worst_at = b;
    }
  }
  finish(r);
  return r;
}

ConditionReport check_nonincreasing_second_derivative(const FGenerator& f, const GridSpec& grid) {
  if (!f.second_derivative) {
    throw MissingDerivative("generator '" + f.name + "' has no second-derivative evaluator");
  }
  ConditionReport r = start_report("nonincreasing_second_derivative", f, grid);
  const std::vector<double> ts = grid.values();
  double prev = f.second_derivative(ts.front());
  for (std::size_t i = 1; i < ts.size(); ++i) {
    const double cur = f.second_derivative(ts[i]);
    const double margin = (prev - cur) / std::max({1.0, std::abs(prev), std::abs(cur)});
    if (margin < r.worst_margin) {
      r.worst_margin = margin;
      r.worst_at = ts[i];
    }
    prev = cur;
  }
  finish(r);
  return r;
}

}  // namespace sdpi
