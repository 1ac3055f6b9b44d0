#include "sdpi/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <sstream>

#include "sdpi/divergence.hpp"
#include "sdpi/error.hpp"

namespace sdpi {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr std::size_t kDpStateLimit = std::size_t{1} << 24;

void require_interior(const JointSpec& spec) {
  if (!spec.input().interior()) {
    throw InputError("bounds need an interior input pmf (all masses positive)");
  }
}

Balance exact_balance(const Pmf& p) {
  const std::size_t n = p.size();
  Balance b;
  if (n < 2) return b;
  // Letter 0 is always in the complement; every event is covered once.
  const std::uint64_t masks = std::uint64_t{1} << (n - 1);
  double best = 0.0;
  for (std::uint64_t mask = 1; mask < masks; ++mask) {
    double s = 0.0;
    for (std::size_t i = 0; i + 1 < n; ++i) {
      if (mask >> i & 1U) s += p[i + 1];
    }
    best = std::max(best, std::min(s, 1.0 - s));
  }
  b.value = best;
  return b;
}

Balance dp_balance(const Pmf& p) {
  const double res = kBalanceResolution;
  std::vector<double> sums{0.0};
  std::vector<double> next;
  double best = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double m = p[i];
    next.clear();
    next.reserve(sums.size() * 2);
    std::size_t a = 0, b = 0;
    // merge sums and sums + m (capped at 1/2), trimming near-duplicates
    while (a < sums.size() || b < sums.size()) {
      double v;
      const bool take_b = b < sums.size() && sums[b] + m <= 0.5;
      if (a < sums.size() && (!take_b || sums[a] <= sums[b] + m)) {
        v = sums[a++];
      } else if (take_b) {
        v = sums[b++] + m;
      } else {
        b = sums.size();
        continue;
      }
      if (next.empty() || v > next.back() + res) next.push_back(v);
    }
    sums.swap(next);
    best = sums.back();
    if (best >= 0.5 - res) break;
    if (sums.size() > kDpStateLimit) {
      throw InputError("balance: dynamic-programming state limit exceeded");
    }
  }
  Balance out;
  out.exact = false;
  out.error_band = static_cast<double>(p.size()) * res;
  out.value = std::min(0.5, best + out.error_band);
  return out;
}

double linear_constant(const FGenerator& f) {
  const auto c = f.linear_upper_constant();
  if (!c) {
    throw MissingDerivative("generator '" + f.name + "' needs a declared f'(1) and finite f(0)");
  }
  return *c;
}

double curvature(const FGenerator& f) {
  if (!f.d2_at_one) {
    throw MissingDerivative("generator '" + f.name + "' has no f''(1); the linear bounds need it");
  }
  return *f.d2_at_one;
}

Verdict verdict(std::string name, double lhs, double rhs, double tol) {
  return {std::move(name), lhs, rhs, tol, lhs <= rhs + tol};
}

}  // namespace

double phi(double p) {
  if (!(p >= 0.0 && p <= 0.5)) {
    std::ostringstream os;
    os << "phi: argument " << p << " outside [0, 1/2]";
    throw InputError(os.str());
  }
  if (p == 0.0) return kInf;
  if (p == 0.5) return 2.0;
  const double u = 1.0 - 2.0 * p;
  // log((1-p)/p) = 2 atanh(1-2p); atanh keeps precision near p = 1/2
  if (u < 0.5) return 2.0 * std::atanh(u) / u;
  return std::log((1.0 - p) / p) / u;
}

Balance balance(const Pmf& p, BalanceMode mode, std::size_t cap) {
  if (mode == BalanceMode::dp) return dp_balance(p);
  if (p.size() > cap) {
    std::ostringstream os;
    os << "balance: alphabet of " << p.size() << " letters exceeds the exact enumeration cap of "
       << cap << "; use the dp balance mode (--balance-dp)";
    throw InputError(os.str());
  }
  return exact_balance(p);
}

double balance_coefficient(const Pmf& p, BalanceMode mode, std::size_t cap) {
  return balance(p, mode, cap).value;
}

double thm2_from(double eta_chi2, double p_star) { return eta_chi2 / p_star; }

double thm3_from(double eta_chi2, double p_star, double bal) {
  return 2.0 * eta_chi2 / (phi(bal) * p_star);
}

double thm4_constant(const FGenerator& f, double p_star) {
  return linear_constant(f) / (curvature(f) * p_star);
}

double eq33_constant(const FGenerator& f, double p_star) {
  const double c = linear_constant(f);
  if (!f.second_derivative) {
    throw MissingDerivative("generator '" + f.name + "' has no second-derivative evaluator");
  }
  return 2.0 * c / f.second_derivative(1.0 / p_star);
}

double thm2_bound(const JointSpec& spec) {
  require_interior(spec);
  return thm2_from(analyze(spec).eta_chi2, spec.input().min_mass());
}

double thm3_bound(const JointSpec& spec, BalanceMode mode) {
  require_interior(spec);
  return thm3_from(analyze(spec).eta_chi2, spec.input().min_mass(),
                   balance_coefficient(spec.input(), mode));
}

double thm4_bound(const FGenerator& f, const JointSpec& spec) {
  require_interior(spec);
  return thm4_constant(f, spec.input().min_mass()) * analyze(spec).eta_chi2;
}

double eq33_bound(const FGenerator& f, const JointSpec& spec) {
  require_interior(spec);
  return eq33_constant(f, spec.input().min_mass()) * analyze(spec).eta_chi2;
}

double combined_bound(const FGenerator& f, const JointSpec& spec) {
  return std::min(thm4_bound(f, spec), eq33_bound(f, spec));
}

bool FConditions::thm4_certified() const {
  return pinsker && pinsker->pass && difference_quotient && difference_quotient->pass;
}

bool FConditions::eq33_certified() const {
  return second_derivative && second_derivative->pass && difference_quotient &&
         difference_quotient->pass;
}

FConditions assess_conditions(const FGenerator& f, const GridSpec& grid) {
  FConditions c;
  if (f.d1_at_one && f.d2_at_one && f.d3_at_one) c.pinsker = check_pinsker_condition(f, grid);
  if (std::isfinite(f.f_at_zero)) c.difference_quotient = check_difference_quotient_concave(f, grid);
  if (f.second_derivative) c.second_derivative = check_nonincreasing_second_derivative(f, grid);
  return c;
}

bool BoundReport::all_pass() const {
  return std::all_of(verdicts.begin(), verdicts.end(), [](const Verdict& v) { return v.pass; });
}

BoundReport certify(const FGenerator& f, const JointSpec& spec, const CertifyOptions& options) {
  require_interior(spec);
  curvature(f);
  BoundReport r;
  r.f_name = f.name;
  const SpectralResult sr = analyze(spec);
  r.eta_chi2 = sr.eta_chi2;
  r.rho = sr.rho;
  const EtaEstimate est = estimate_eta_f(f, spec, options.optimizer);
  r.eta_f_estimate = est.value;
  r.eta_f_input_divergence = est.input_divergence;
  r.eta_f_output_divergence = est.output_divergence;
  r.eta_f_argmax = est.argmax.to_vector();
  r.eta_f_exceeds_one = est.exceeds_one;

  r.p_star = spec.input().min_mass();
  const Balance bal = balance(spec.input(), options.balance_mode);
  r.balance = bal.value;
  r.balance_exact = bal.exact;
  r.phi_of_balance = phi(bal.value);
  r.thm2 = thm2_from(r.eta_chi2, r.p_star);
  r.thm3 = thm3_from(r.eta_chi2, r.p_star, r.balance);
  r.thm2_clipped = std::min(1.0, r.thm2);
  r.thm3_clipped = std::min(1.0, r.thm3);

  r.conditions = options.conditions ? *options.conditions : assess_conditions(f, options.grid);
  if (f.linear_upper_constant()) {
    r.thm4 = thm4_constant(f, r.p_star) * r.eta_chi2;
    r.thm4_certified = r.conditions.thm4_certified();
    if (f.second_derivative) {
      r.eq33 = eq33_constant(f, r.p_star) * r.eta_chi2;
      r.eq33_certified = r.conditions.eq33_certified();
    }
  }
  if (r.thm4 && r.eq33) {
    r.eq34 = std::min(*r.thm4, *r.eq33);
  } else if (r.thm4) {
    r.eq34 = r.thm4;
  }

  r.verdicts.push_back(verdict("eta_chi2 <= eta_f_estimate", r.eta_chi2, r.eta_f_estimate, kOptimizerSlack));
  r.verdicts.push_back(verdict("eta_f_estimate <= 1", r.eta_f_estimate, 1.0, kClosedFormSlack));
  if (f.name == "kl") {
    r.verdicts.push_back(verdict("eta_f_estimate <= thm3", r.eta_f_estimate, r.thm3, kClosedFormSlack));
    r.verdicts.push_back(verdict("thm3 <= thm2", r.thm3, r.thm2, kClosedFormSlack));
  }
  if (r.thm4 && r.thm4_certified) {
    r.verdicts.push_back(verdict("eta_f_estimate <= thm4", r.eta_f_estimate, *r.thm4, kClosedFormSlack));
  }
  if (r.eq33 && r.eq33_certified) {
    r.verdicts.push_back(verdict("eta_f_estimate <= eq33", r.eta_f_estimate, *r.eq33, kClosedFormSlack));
  }
  return r;
}

BoundReport tensorized_certify(const FGenerator& f, const JointSpec& spec, int n,
                               const CertifyOptions& options, std::size_t cap) {
  if (n < 1) throw InputError("tensorized_certify: n must be at least 1");
  BoundReport r = certify(f, spec, options);
  const JointSpec product = tensor_power(spec, n, cap);
  const SpectralResult ps = analyze(product);

  TensorInfo t;
  t.n = n;
  t.product_inputs = product.input().size();
  t.single_eta_chi2 = r.eta_chi2;
  t.product_eta_chi2 = ps.eta_chi2;
  t.product_p_star = product.input().min_mass();
  t.naive_constant = 1.0 / t.product_p_star;
  t.corollary_constant = 1.0 / r.p_star;
  t.naive_bound = t.naive_constant * t.product_eta_chi2;
  t.corollary_bound = t.corollary_constant * t.product_eta_chi2;
  if (f.linear_upper_constant()) t.f_corollary_constant = thm4_constant(f, r.p_star);

  // argmax x P x ... x P keeps both divergences of the single-letter pair
  Pmf lifted = Pmf(r.eta_f_argmax);
  for (int i = 1; i < n; ++i) lifted = lifted.product(spec.input());
  const double din = f_divergence_raw(f, lifted.masses(), product.input().masses());
  const double dout = f_divergence_raw(f, product.channel().matrix() * lifted.masses(),
                                       product.output().masses());
  t.product_eta_f_lower = din > 0.0 ? dout / din : 0.0;

  r.verdicts.push_back(verdict("|product eta_chi2 - eta_chi2| <= 0",
                               std::abs(t.product_eta_chi2 - t.single_eta_chi2), 0.0, kClosedFormSlack));
  r.verdicts.push_back(verdict("product eta_chi2 <= product eta_f lower", t.product_eta_chi2,
                               t.product_eta_f_lower, kOptimizerSlack));
  if (f.name == "kl") {
    r.verdicts.push_back(verdict("product eta_f lower <= corollary bound", t.product_eta_f_lower,
                                 t.corollary_bound, kClosedFormSlack));
  } else if (t.f_corollary_constant && r.thm4_certified) {
    r.verdicts.push_back(verdict("product eta_f lower <= corollary bound", t.product_eta_f_lower,
                                 *t.f_corollary_constant * t.product_eta_chi2, kClosedFormSlack));
  }
  r.tensor = t;
  return r;
}

}  // namespace sdpi
