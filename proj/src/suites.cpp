#include "sdpi/suites.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <sstream>

#include "sdpi/bounds.hpp"
#include "sdpi/conditions.hpp"
#include "sdpi/divergence.hpp"
#include "sdpi/error.hpp"
#include "sdpi/random.hpp"
#include "sdpi/spectral.hpp"
#include "sdpi/svd.hpp"

namespace sdpi {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr std::size_t kShards = 16;

// Ordered collection of checks; margins >= -tolerance pass.
class CheckTable {
 public:
  void add(const std::string& name, double margin, double tol, const std::function<std::string()>& context) {
    CheckResult& c = slot(name, tol);
    ++c.count;
    if (!(margin >= -tol)) ++c.violations;
    if (margin < c.worst_margin || std::isnan(margin)) {
      c.worst_margin = margin;
      c.worst_context = context();
    }
  }

  void merge(const CheckTable& other) {
    for (const CheckResult& o : other.checks_) {
      CheckResult& c = slot(o.name, o.tolerance);
      c.count += o.count;
      c.violations += o.violations;
      if (o.worst_margin < c.worst_margin || std::isnan(o.worst_margin)) {
        c.worst_margin = o.worst_margin;
        c.worst_context = o.worst_context;
      }
    }
  }

  std::vector<CheckResult> take() { return std::move(checks_); }

 private:
  CheckResult& slot(const std::string& name, double tol) {
    for (CheckResult& c : checks_) {
      if (c.name == name) return c;
    }
    CheckResult c;
    c.name = name;
    c.tolerance = tol;
    c.worst_margin = kInf;
    checks_.push_back(c);
    return checks_.back();
  }

  std::vector<CheckResult> checks_;
};

std::string describe(const char* label, long index, std::size_t dim = 0) {
  std::ostringstream os;
  os << label << "=" << index;
  if (dim) os << " dim=" << dim;
  return os.str();
}

void check_pair(CheckTable& t, const Pmf& r, const Pmf& p, double phi_bal,
                const std::vector<FGenerator>& fs, const std::function<std::string()>& ctx) {
  constexpr double tol = kClosedFormSlack;
  const double d = kl_divergence(r, p).value;
  const double chi2 = chi2_divergence(r, p).value;
  const Vector j = r.masses() - p.masses();
  const double l1 = j.cwiseAbs().sum();
  const double m = j.cwiseQuotient(p.masses()).cwiseAbs().maxCoeff();
  const double pstar = p.min_mass();
  // chi2 * l1 / m is 0/0 when R = P; the bound is 0 there
  const double holder = m > 0.0 ? chi2 * l1 / m : 0.0;

  t.add("pinsker", d - 0.5 * l1 * l1, tol, ctx);
  t.add("lemma1", d - 0.5 * holder, tol, ctx);
  t.add("lemma2", d - 0.25 * phi_bal * holder, tol, ctx);
  t.add("lemma3_log", std::log1p(chi2) - d, tol, ctx);
  t.add("lemma3_chi2", chi2 - std::log1p(chi2), tol, ctx);
  t.add("eq19", d - 0.5 * pstar * chi2, tol, ctx);
  t.add("eq26", d - 0.5 * phi_bal * pstar * chi2, tol, ctx);
  for (const FGenerator& f : fs) {
    const double df = f_divergence(f, r, p).value;
    const double c2 = *f.d2_at_one;
    t.add("lemma4_" + f.name, df - 0.5 * c2 * l1 * l1, tol, ctx);
    t.add("lemma5_" + f.name, df - 0.5 * c2 * holder, tol, ctx);
    t.add("lemma6_" + f.name, *f.linear_upper_constant() * chi2 - df, tol, ctx);
  }
}

OptimizerConfig inner(OptimizerConfig cfg, Execution outer) {
  if (outer == Execution::parallel) cfg.execution = Execution::serial;
  return cfg;
}

double vector_residual(const Vector& v, const Vector& target) {
  return std::min((v - target).norm(), (v + target).norm());
}

}  // namespace

bool SuiteReport::pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.pass(); });
}

SuiteReport inequality_suite(const InequalityOptions& options) {
  if (options.samples < 0) throw InputError("inequality suite: samples must be non-negative");
  for (std::size_t d : options.dims) {
    if (d < 2 || d > 16) throw InputError("inequality suite: dimensions must lie in [2, 16]");
  }
  const std::vector<FGenerator> fs = {make_kl(), make_tsallis(0.5), make_tsallis(1.5)};
  SuiteReport rep;
  rep.suite = "inequalities";
  rep.seed = options.seed;
  rep.samples = options.samples;

  CheckTable total;
  for (std::size_t dim : options.dims) {
    std::vector<CheckTable> shards(kShards);
    for_each_index(options.execution, kShards, [&](std::size_t s) {
      Rng rng(options.seed, mix_seed(dim, s));
      CheckTable& t = shards[s];
      if (s == 0) {
        const Pmf p = random_interior_pmf(rng, dim);
        const double bal = balance_coefficient(p);
        check_pair(t, p, p, phi(bal), fs, [dim] { return describe("R=P", 0, dim); });
      }
      for (long i = static_cast<long>(s); i < options.samples; i += static_cast<long>(kShards)) {
        const Pmf p = random_interior_pmf(rng, dim);
        const Pmf r = random_interior_pmf(rng, dim);
        const double bal = balance_coefficient(p);
        check_pair(t, r, p, phi(bal), fs, [i, dim] { return describe("sample", i, dim); });
      }
    });
    for (const CheckTable& t : shards) total.merge(t);
  }
  {
    // fixed pair with closed-form values
    const Pmf r{0.5, 0.5};
    const Pmf p{0.25, 0.75};
    check_pair(total, r, p, phi(0.25), fs, [] { return std::string("fixed pair"); });
    rep.values["fixed_kl"] = kl_divergence(r, p).value;
    rep.values["fixed_log1p_chi2"] = std::log1p(chi2_divergence(r, p).value);
    rep.values["fixed_chi2"] = chi2_divergence(r, p).value;
  }
  rep.checks = total.take();
  return rep;
}

SuiteReport properties_suite(const PropertyOptions& options) {
  if (options.samples < 0) throw InputError("properties suite: samples must be non-negative");
  SuiteReport rep;
  rep.suite = "properties";
  rep.seed = options.seed;
  rep.samples = options.samples;
  const std::vector<FGenerator> fs = {make_kl(), make_tsallis(0.5), make_tsallis(1.5)};
  const OptimizerConfig cfg = inner(options.optimizer, options.execution);

  std::vector<CheckTable> tables(static_cast<std::size_t>(options.samples));
  for_each_index(options.execution, tables.size(), [&](std::size_t idx) {
    const long i = static_cast<long>(idx);
    CheckTable& t = tables[idx];
    Rng rng(options.seed, idx);
    auto ctx = [i] { return describe("sample", i); };
    const std::size_t nu = 2 + rng.next_u64() % 3;
    const std::size_t nx = 2 + rng.next_u64() % 3;
    const std::size_t ny = 2 + rng.next_u64() % 3;
    const std::size_t nv = 2 + rng.next_u64() % 3;
    const JointSpec spec = random_interior_spec(rng, nx, ny);
    const SpectralResult s = analyze(spec);

    t.add("normalization", std::min(s.eta_chi2, 1.0 - s.eta_chi2), 0.0, ctx);
    t.add("top_singular_value", -std::abs(s.singular_values[0] - 1.0), 1e-9, ctx);
    const Matrix b = dtm(spec);
    const Svd svd = svd_dense(b);
    t.add("top_right_vector", -vector_residual(svd.v.col(0), spec.input().sqrt_masses()), 1e-8, ctx);
    t.add("top_left_vector", -vector_residual(svd.u.col(0), spec.output().sqrt_masses()), 1e-8, ctx);
    t.add("principal_k_rayleigh", -std::abs((b * s.principal_k).squaredNorm() - s.eta_chi2), 1e-9, ctx);
    t.add("principal_k_orthogonal", -std::abs(s.principal_k.dot(spec.input().sqrt_masses())), 1e-10, ctx);
    const double ray = rayleigh_check(spec, 200, mix_seed(options.seed, idx));
    t.add("rayleigh_upper", s.eta_chi2 - ray, 1e-9, ctx);
    t.add("rayleigh_attained", ray - s.eta_chi2, 1e-9, ctx);

    // independence in both directions
    const Pmf column = random_interior_pmf(rng, ny);
    const JointSpec indep(random_interior_pmf(rng, nx), Channel::constant(column, nx));
    t.add("independence_zero", -analyze(indep).eta_chi2, 1e-9, ctx);
    t.add("dependence_positive", s.eta_chi2 - 1e-12, 0.0, ctx);

    // tensorization, homogeneous and heterogeneous
    t.add("tensorization", -std::abs(analyze(tensor(spec, spec)).eta_chi2 - s.eta_chi2), 1e-9, ctx);
    const JointSpec other = random_interior_spec(rng, 2, 2);
    const double eta_other = analyze(other).eta_chi2;
    t.add("tensorization_mixed",
          -std::abs(analyze(tensor(spec, other)).eta_chi2 - std::max(s.eta_chi2, eta_other)), 1e-9, ctx);

    // U -> X -> Y chain for sub-multiplicativity
    const Pmf pu = random_interior_pmf(rng, nu);
    const JointSpec first = random_interior_spec(rng, nu, nx);
    const Channel sch = first.channel();
    const Channel w = spec.channel();
    const JointSpec su(pu, sch);
    const JointSpec xy(su.output(), w);
    const JointSpec uy(pu, sch.then(w));
    t.add("sub_multiplicativity", analyze(su).eta_chi2 * analyze(xy).eta_chi2 - analyze(uy).eta_chi2, 1e-9, ctx);

    // U -> X -> Y -> V with pre- and post-processing around spec's channel
    const Channel post = random_interior_spec(rng, ny, nv).channel();
    const JointSpec uv(pu, sch.then(w).then(post));
    t.add("monotonicity", analyze(xy).eta_chi2 - analyze(uv).eta_chi2, 1e-9, ctx);

    for (const FGenerator& f : fs) {
      const EtaEstimate e = estimate_eta_f(f, spec, cfg);
      t.add("maximal_correlation_" + f.name, e.value - s.eta_chi2, kOptimizerSlack, ctx);
      t.add("dpi_" + f.name, 1.0 - e.value, 1e-9, ctx);
      const double din = f_divergence(f, e.argmax, spec.input()).value;
      const double dout = f_divergence(f, push_forward(spec.channel(), e.argmax), spec.output()).value;
      t.add("achieved_ratio_" + f.name, -std::abs(dout / din - e.value), 1e-12, ctx);
    }
  });
  CheckTable total;
  for (const CheckTable& t : tables) total.merge(t);
  rep.checks = total.take();
  return rep;
}

SuiteReport local_limit_suite(const LocalLimitOptions& options) {
  if (options.specs < 0) throw InputError("local_limit suite: specs must be non-negative");
  std::vector<FGenerator> fs;
  for (const std::string& name : options.generators) fs.push_back(parse_f(name));
  SuiteReport rep;
  rep.suite = "local_limit";
  rep.seed = options.seed;
  rep.samples = options.specs;
  const Execution outer = options.optimizer.execution;
  const OptimizerConfig cfg = inner(options.optimizer, outer);

  const std::size_t jobs = static_cast<std::size_t>(options.specs) * fs.size();
  std::vector<CheckTable> tables(jobs);
  std::vector<ConvergenceReport> reports(jobs);
  for_each_index(outer, jobs, [&](std::size_t job) {
    const std::size_t i = job / fs.size();
    const FGenerator& f = fs[job % fs.size()];
    Rng rng(options.seed, i);
    const JointSpec spec = random_interior_spec(rng, 3, 3);
    ConvergenceReport r = local_limit_probe(f, spec, options.deltas, cfg);
    auto ctx = [i] { return describe("spec", static_cast<long>(i)); };
    tables[job].add("non_increasing_" + f.name, -r.max_increase, ConvergenceReport::kMonotoneTolerance, ctx);
    tables[job].add("final_gap_" + f.name, -r.final_gap, ConvergenceReport::kGapTolerance, ctx);
    reports[job] = std::move(r);
  });
  CheckTable total;
  double worst_gap = 0.0;
  for (std::size_t job = 0; job < jobs; ++job) {
    total.merge(tables[job]);
    worst_gap = std::max(worst_gap, reports[job].final_gap);
  }
  if (!options.deltas.empty() && options.deltas.back() > ConvergenceReport::kFinalDeltaLimit) {
    total.add("final_delta_small_enough", ConvergenceReport::kFinalDeltaLimit - options.deltas.back(), 0.0,
              [] { return std::string("deltas"); });
  }
  rep.checks = total.take();
  rep.values["worst_final_gap"] = worst_gap;
  return rep;
}

SuiteReport tensorization_suite(const TensorizationOptions& options) {
  if (options.specs < 0) throw InputError("tensorization suite: specs must be non-negative");
  SuiteReport rep;
  rep.suite = "tensorization";
  rep.seed = options.seed;
  rep.samples = options.specs;
  const Execution outer = options.optimizer.execution;
  const OptimizerConfig cfg = inner(options.optimizer, outer);
  CertifyOptions copts;
  copts.optimizer = cfg;
  copts.conditions = assess_conditions(make_kl());
  const FGenerator kl = make_kl();

  std::vector<CheckTable> tables(static_cast<std::size_t>(options.specs));
  for_each_index(outer, tables.size(), [&](std::size_t idx) {
    CheckTable& t = tables[idx];
    Rng rng(options.seed, idx);
    const std::size_t nx = idx % 2 == 0 ? 2 : 3;
    const std::size_t ny = 2 + rng.next_u64() % 2;
    const JointSpec spec = random_interior_spec(rng, nx, ny);
    const double single = analyze(spec).eta_chi2;
    for (int n : options.powers) {
      auto ctx = [idx, n] {
        std::ostringstream os;
        os << "spec=" << idx << " n=" << n;
        return os.str();
      };
      const double product = analyze(tensor_power(spec, n)).eta_chi2;
      t.add("product_eta_chi2_n" + std::to_string(n), -std::abs(product - single), 1e-9, ctx);
      const BoundReport br = tensorized_certify(kl, spec, n, copts);
      for (const Verdict& v : br.verdicts) t.add("certify: " + v.name, v.rhs - v.lhs, v.tolerance, ctx);
    }
  });
  CheckTable total;
  for (const CheckTable& t : tables) total.merge(t);

  for (int n : options.powers) {
    const BoundReport br = tensorized_certify(kl, make_dsbs(0.1), n, copts);
    const std::string key = "dsbs0.1_n" + std::to_string(n);
    rep.values[key + "_product_eta_chi2"] = br.tensor->product_eta_chi2;
    rep.values[key + "_naive_constant"] = br.tensor->naive_constant;
    rep.values[key + "_corollary_constant"] = br.tensor->corollary_constant;
    rep.values[key + "_naive_bound"] = br.tensor->naive_bound;
    rep.values[key + "_corollary_bound"] = br.tensor->corollary_bound;
  }
  rep.checks = total.take();
  return rep;
}

SuiteReport appendix_c_suite() {
  SuiteReport rep;
  rep.suite = "appendix_c";
  const GridSpec grid;
  const std::vector<double> ts = grid.values();
  double h_min = kInf, h_at = 0.0, nearest = ts.front();
  for (double t : ts) {
    const double h = kl_condition_h(t);
    if (h < h_min) {
      h_min = h;
      h_at = t;
    }
    if (std::abs(t - 1.0) < std::abs(nearest - 1.0)) nearest = t;
  }
  CheckTable table;
  auto grid_ctx = [] { return std::string("default grid"); };
  table.add("h_nonnegative", h_min, 1e-9, grid_ctx);
  table.add("h_argmin_nearest_one", -std::abs(h_at - nearest), 0.0, grid_ctx);
  table.add("h_at_one", -std::abs(kl_condition_h(1.0)), 1e-12, grid_ctx);
  rep.values["h_min"] = h_min;
  rep.values["h_argmin"] = h_at;

  for (const FGenerator& f : {make_kl(), make_tsallis(0.5), make_tsallis(1.5), make_tsallis(2.0)}) {
    const ConditionReport c = check_pinsker_condition(f, grid);
    table.add("pinsker_condition_" + f.name, c.worst_margin, c.tolerance, [&c] {
      std::ostringstream os;
      os.precision(17);
      os << "t=" << c.worst_at;
      return os.str();
    });
    rep.values["pinsker_condition_" + f.name + "_worst_margin"] = c.worst_margin;
  }
  rep.checks = table.take();
  return rep;
}

}  // namespace sdpi
