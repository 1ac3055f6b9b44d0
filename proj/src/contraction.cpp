#include "sdpi/contraction.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "sdpi/divergence.hpp"
#include "sdpi/error.hpp"
#include "sdpi/optimize.hpp"
#include "sdpi/random.hpp"
#include "sdpi/spectral.hpp"

namespace sdpi {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kChi2SeedScales[] = {1e-5, 1e-4, 1e-3, 1e-2, 1e-1};
constexpr double kVertexWeights[] = {0.5, 0.9, 0.99};
constexpr double kRadialFractions[] = {0.5, 0.1, 0.01, 1e-3};
constexpr double kShell = 36.0;  // logistic(36) rounds to 1
constexpr double kBoundaryGuard = 1e-9;

struct Point {
  double ratio = -kInf;
  double din = 0.0;
  double dout = 0.0;
  Vector r;
  bool usable() const { return std::isfinite(ratio); }
};

class Problem {
 public:
  Problem(const FGenerator& f, const JointSpec& spec)
      : f_(f), p_(spec.input().masses()), sp_(p_.cwiseSqrt()), w_(spec.channel().matrix()),
        py_(spec.output().masses()) {}

  const FGenerator& f() const { return f_; }
  const Vector& p() const { return p_; }
  const Vector& sqrt_p() const { return sp_; }
  Eigen::Index size() const { return p_.size(); }

  Point evaluate(Vector r) const {
    Point pt;
    pt.din = f_divergence_raw(f_, r, p_);
    if (!(pt.din >= kMinInputDivergence) || !std::isfinite(pt.din)) return pt;
    pt.dout = f_divergence_raw(f_, w_ * r, py_);
    if (!std::isfinite(pt.dout)) return pt;
    pt.ratio = pt.dout / pt.din;
    pt.r = std::move(r);
    return pt;
  }

  double input_divergence(const Vector& r) const { return f_divergence_raw(f_, r, p_); }

  // R = softmax(log P + (0, z)).
  Vector from_logits(const Vector& z) const {
    Vector w(size());
    w[0] = std::log(p_[0]);
    for (Eigen::Index i = 1; i < size(); ++i) w[i] = std::log(p_[i]) + z[i - 1];
    const double m = w.maxCoeff();
    Vector e = (w.array() - m).exp();
    return e / e.sum();
  }

  Vector to_logits(const Vector& r) const {
    Vector z(size() - 1);
    const double base = std::log1p((r[0] - p_[0]) / p_[0]);
    for (Eigen::Index i = 1; i < size(); ++i) z[i - 1] = std::log1p((r[i] - p_[i]) / p_[i]) - base;
    return z;
  }

 private:
  const FGenerator& f_;
  Vector p_;
  Vector sp_;
  Matrix w_;
  Vector py_;
};

// Larger ratio wins; ratios within `tol` are ties broken by smaller input
// divergence. Deterministic when applied in index order.
bool better(const Point& c, const Point& best, double tol) {
  if (!c.usable()) return false;
  if (!best.usable()) return true;
  if (c.ratio > best.ratio + tol) return true;
  if (c.ratio >= best.ratio - tol && c.din < best.din) return true;
  return false;
}

void require_interior(const JointSpec& spec) {
  if (!spec.input().interior()) {
    throw InputError("contraction estimate needs an interior input pmf (all masses positive)");
  }
}

struct Seed {
  std::string origin;
  Vector r;  // starting pmf (interior) for random and deterministic seeds
};

std::vector<Seed> deterministic_seeds(const Problem& prob, const SpectralResult& spec,
                                      const OptimizerConfig& cfg) {
  std::vector<Seed> seeds;
  const Pmf p(prob.p());
  if (cfg.include_chi2_seed && spec.principal_k.squaredNorm() > 0.0) {
    for (double sign : {1.0, -1.0}) {
      const Vector k = sign * spec.principal_k;
      const double cap = 0.5 * max_perturbation_scale(p, k);
      for (double eps : kChi2SeedScales) {
        const double e = std::min(eps, cap);
        seeds.push_back({"chi2", prob.p() + e * prob.sqrt_p().cwiseProduct(k)});
      }
    }
  }
  if (cfg.include_vertex_seeds) {
    for (Eigen::Index x = 0; x < prob.size(); ++x) {
      for (double w : kVertexWeights) {
        seeds.push_back({"vertex", (1.0 - w) * prob.p() + w * Vector::Unit(prob.size(), x)});
      }
    }
  }
  return seeds;
}

EtaEstimate finalize(const Problem& prob, const Point& best, std::vector<RestartRecord> records) {
  EtaEstimate est{Pmf(prob.p())};
  est.diagnostics = std::move(records);
  if (!best.usable()) return est;
  Pmf argmax(best.r);
  const Point re = prob.evaluate(argmax.masses());
  const Point& use = re.usable() ? re : best;
  est.argmax = Pmf(use.r);
  est.input_divergence = use.din;
  est.output_divergence = use.dout;
  est.value = use.ratio;
  est.exceeds_one = est.value > 1.0 + 1e-9;
  return est;
}

BfgsOptions bfgs_options(const OptimizerConfig& cfg) {
  BfgsOptions o;
  o.max_iters = cfg.max_iters;
  o.step_tolerance = cfg.step_tolerance;
  return o;
}

// Orthonormal basis of the complement of sqrt(P), as columns.
Matrix complement_basis(const Vector& sp) {
  Eigen::HouseholderQR<Matrix> qr(sp);
  const Matrix q = qr.householderQ() * Matrix::Identity(sp.size(), sp.size());
  return q.rightCols(sp.size() - 1);
}

double logistic(double s) { return 1.0 / (1.0 + std::exp(-s)); }
double logit(double x) { return std::log(x / (1.0 - x)); }

// Radius along the unit direction k at which D_f first reaches delta, capped
// just inside the simplex boundary. The returned radius is always feasible.
double radius_for(const Problem& prob, const Vector& k, double delta, double eps_max) {
  auto div = [&](double e) { return prob.input_divergence(prob.p() + e * prob.sqrt_p().cwiseProduct(k)); };
  if (div(eps_max) <= delta) return eps_max;
  double lo = 0.0, hi = eps_max;
  double dlo = 0.0, dhi = div(eps_max);
  double guess = prob.f().d2_at_one ? std::sqrt(2.0 * delta / *prob.f().d2_at_one) : 0.5 * eps_max;
  guess = std::min(guess, 0.5 * eps_max);
  for (int it = 0; it < 200; ++it) {
    const double d = div(guess);
    if (d <= delta) {
      lo = guess;
      dlo = d;
    } else {
      hi = guess;
      dhi = d;
    }
    if (hi - lo <= 1e-15 * hi || (d <= delta && delta - d <= 1e-14 * delta)) break;
    double next;
    if (lo > 0.0 && dlo > 0.0) {
      // secant on log D against log eps, where D grows roughly quadratically
      const double a = std::log(lo), b = std::log(hi);
      const double la = std::log(dlo), lb = std::log(dhi);
      next = std::exp(a + (std::log(delta) - la) * (b - a) / (lb - la));
    } else {
      next = guess * std::sqrt(delta / std::max(d, 1e-300));
    }
    if (!(next > lo && next < hi)) next = lo > 0.0 ? std::sqrt(lo * hi) : 0.5 * hi;
    guess = next;
  }
  return lo;
}

}  // namespace

void OptimizerConfig::validate() const {
  if (restarts < 1 || max_iters < 1) throw InputError("optimizer: restarts and max_iters must be >= 1");
  if (!(step_tolerance > 0.0) || !(ratio_tolerance > 0.0)) {
    throw InputError("optimizer: tolerances must be positive");
  }
}

EtaEstimate estimate_eta_f(const FGenerator& f, const JointSpec& spec, const OptimizerConfig& cfg) {
  cfg.validate();
  require_interior(spec);
  const Problem prob(f, spec);
  if (prob.size() < 2) return EtaEstimate(spec.input());
  const SpectralResult sr = analyze(spec);
  const std::vector<Seed> fixed = deterministic_seeds(prob, sr, cfg);
  const std::size_t total = fixed.size() + static_cast<std::size_t>(cfg.restarts);

  std::vector<Point> results(total);
  std::vector<RestartRecord> records(total);
  const BfgsOptions opts = bfgs_options(cfg);
  for_each_index(cfg.execution, total, [&](std::size_t i) {
    Vector start;
    std::string origin;
    if (i < fixed.size()) {
      start = fixed[i].r;
      origin = fixed[i].origin;
    } else {
      Rng rng(cfg.seed, i - fixed.size());
      start = rng.dirichlet_ones(prob.size());
      origin = "random";
    }
    Point best = prob.evaluate(start);
    auto objective = [&](const Vector& z) {
      const Point pt = prob.evaluate(prob.from_logits(z));
      if (better(pt, best, 0.0)) best = pt;
      return pt.ratio;
    };
    const BfgsResult br = maximize_bfgs(objective, prob.to_logits(start), opts);
    results[i] = best;
    records[i] = {origin, best.usable() ? best.ratio : 0.0, best.din, br.iterations};
  });

  Point best;
  for (const Point& pt : results) {
    if (better(pt, best, cfg.ratio_tolerance)) best = pt;
  }
  return finalize(prob, best, std::move(records));
}

EtaEstimate estimate_tau(const FGenerator& f, const JointSpec& spec, double delta,
                         const OptimizerConfig& cfg, const std::vector<Pmf>& warm_starts,
                         const EtaEstimate* unconstrained) {
  cfg.validate();
  if (!(delta > 0.0)) throw InputError("estimate_tau: delta must be positive");
  require_interior(spec);
  const Problem prob(f, spec);
  const Eigen::Index n = prob.size();
  if (n < 2) return EtaEstimate(spec.input());

  std::optional<EtaEstimate> own;
  if (!unconstrained) {
    own.emplace(estimate_eta_f(f, spec, cfg));
    unconstrained = &*own;
  }
  const SpectralResult sr = analyze(spec);
  const Matrix q = complement_basis(prob.sqrt_p());
  const Pmf p(prob.p());

  // Candidate in (direction, radial logit) coordinates.
  auto point_at = [&](const Vector& v) -> Point {
    const Vector dir = v.head(n - 1);
    const double norm = dir.norm();
    if (!(norm > 0.0) || !std::isfinite(norm)) return Point{};
    const Vector k = q * (dir / norm);
    const double eps_max = max_perturbation_scale(p, k) * (1.0 - kBoundaryGuard);
    const double radius = radius_for(prob, k, delta, eps_max);
    const double eps = radius * logistic(v[n - 1]);
    Point pt = prob.evaluate(prob.p() + eps * prob.sqrt_p().cwiseProduct(k));
    if (pt.usable() && pt.din > delta) return Point{};
    return pt;
  };
  auto coordinates_of = [&](const Vector& r) -> Vector {
    const Vector kraw = (r - prob.p()).cwiseQuotient(prob.sqrt_p());
    Vector v(n);
    v.head(n - 1) = q.transpose() * kraw;
    const double eps = kraw.norm();
    const Vector k = q * (v.head(n - 1) / v.head(n - 1).norm());
    const double eps_max = max_perturbation_scale(p, k) * (1.0 - kBoundaryGuard);
    const double radius = radius_for(prob, k, delta, eps_max);
    const double frac = std::clamp(eps / radius, 1e-12, 1.0);
    v[n - 1] = frac >= 1.0 ? kShell : std::min(kShell, logit(frac));
    return v;
  };

  struct TauSeed {
    std::string origin;
    Vector v;
    std::optional<Vector> exact;  // evaluated as-is too (warm starts)
  };
  std::vector<TauSeed> seeds;
  auto direction_seed = [&](const std::string& origin, const Vector& k, double s) {
    Vector v(n);
    v.head(n - 1) = q.transpose() * k;
    v[n - 1] = s;
    if (v.head(n - 1).norm() > 0.0) seeds.push_back({origin, v, std::nullopt});
  };
  if (cfg.include_chi2_seed && sr.principal_k.squaredNorm() > 0.0) {
    for (double sign : {1.0, -1.0}) {
      direction_seed("chi2", sign * sr.principal_k, kShell);
      for (double frac : kRadialFractions) direction_seed("chi2", sign * sr.principal_k, logit(frac));
    }
  }
  if (cfg.include_vertex_seeds) {
    for (Eigen::Index x = 0; x < n; ++x) {
      const Vector k = (Vector::Unit(n, x) - prob.p()).cwiseQuotient(prob.sqrt_p());
      direction_seed("vertex", k, kShell);
    }
  }
  auto add_exact = [&](const std::string& origin, const Pmf& r) {
    if (r.size() != static_cast<std::size_t>(n) || !r.interior()) return;
    const double din = prob.input_divergence(r.masses());
    if (!(din <= delta) || !(din >= kMinInputDivergence)) return;
    seeds.push_back({origin, coordinates_of(r.masses()), r.masses()});
  };
  for (const Pmf& w : warm_starts) add_exact("warm", w);
  add_exact("unconstrained", unconstrained->argmax);

  const std::size_t total = seeds.size() + static_cast<std::size_t>(cfg.restarts);
  std::vector<Point> results(total);
  std::vector<RestartRecord> records(total);
  const BfgsOptions opts = bfgs_options(cfg);
  for_each_index(cfg.execution, total, [&](std::size_t i) {
    Vector start;
    std::string origin;
    Point best;
    if (i < seeds.size()) {
      start = seeds[i].v;
      origin = seeds[i].origin;
      if (seeds[i].exact) best = prob.evaluate(*seeds[i].exact);
    } else {
      Rng rng(cfg.seed, i - seeds.size());
      start.resize(n);
      start.head(n - 1) = rng.gaussian_vector(n - 1);
      start[n - 1] = kShell;
      origin = "random";
    }
    auto objective = [&](const Vector& v) {
      const Point pt = point_at(v);
      if (better(pt, best, 0.0)) best = pt;
      return pt.ratio;
    };
    const BfgsResult br = maximize_bfgs(objective, start, opts);
    results[i] = best;
    records[i] = {origin, best.usable() ? best.ratio : 0.0, best.din, br.iterations};
  });

  Point best;
  for (const Point& pt : results) {
    if (better(pt, best, cfg.ratio_tolerance)) best = pt;
  }
  return finalize(prob, best, std::move(records));
}

ConvergenceReport local_limit_probe(const FGenerator& f, const JointSpec& spec,
                                    const std::vector<double>& deltas, const OptimizerConfig& cfg) {
  if (deltas.size() < 3) throw InputError("local_limit_probe: need at least 3 deltas");
  for (std::size_t i = 0; i < deltas.size(); ++i) {
    if (!(deltas[i] > 0.0)) throw InputError("local_limit_probe: deltas must be positive");
    if (i > 0 && !(deltas[i] < deltas[i - 1])) {
      throw InputError("local_limit_probe: deltas must be strictly decreasing");
    }
  }
  ConvergenceReport rep;
  rep.deltas = deltas;
  rep.taus.assign(deltas.size(), 0.0);
  rep.eta_chi2 = analyze(spec).eta_chi2;
  const EtaEstimate unconstrained = estimate_eta_f(f, spec, cfg);

  std::vector<Pmf> warm;
  for (std::size_t j = deltas.size(); j-- > 0;) {
    const EtaEstimate t = estimate_tau(f, spec, deltas[j], cfg, warm, &unconstrained);
    rep.taus[j] = t.value;
    if (t.input_divergence > 0.0) warm.push_back(t.argmax);
  }
  rep.max_increase = -kInf;
  for (std::size_t i = 0; i + 1 < rep.taus.size(); ++i) {
    rep.max_increase = std::max(rep.max_increase, rep.taus[i + 1] - rep.taus[i]);
  }
  rep.non_increasing = rep.max_increase <= ConvergenceReport::kMonotoneTolerance;
  rep.final_gap = std::abs(rep.taus.back() - rep.eta_chi2);
  rep.pass = rep.non_increasing && deltas.back() <= ConvergenceReport::kFinalDeltaLimit &&
             rep.final_gap <= ConvergenceReport::kGapTolerance;
  return rep;
}

}  // namespace sdpi
