#include "sdpi/cli.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <limits>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "sdpi/bounds.hpp"
#include "sdpi/divergence.hpp"
#include "sdpi/error.hpp"
#include "sdpi/execution.hpp"
#include "sdpi/io.hpp"
#include "sdpi/suites.hpp"

namespace sdpi::cli {

namespace {

enum class Format { json, csv };

struct Globals {
  std::optional<std::uint64_t> seed;
  std::string config_path;
  std::string out_path;
  std::string format = "json";
  bool balance_dp = false;
};

struct Config {
  OptimizerConfig optimizer;
  Json sweep;  // null when absent
};

Config load_config(const Globals& g) {
  Config c;
  if (!g.config_path.empty()) {
    const Json j = read_json_file(g.config_path);
    if (!j.is_object()) throw InputError(g.config_path + ": expected a JSON object");
    for (auto it = j.begin(); it != j.end(); ++it) {
      if (it.key() == "optimizer") {
        apply_optimizer_config(it.value(), c.optimizer);
      } else if (it.key() == "sweep") {
        c.sweep = it.value();
      } else {
        throw InputError(g.config_path + ": unknown key '" + it.key() + "'");
      }
    }
  }
  if (g.seed) c.optimizer.seed = *g.seed;
  return c;
}

Format parse_format(const std::string& s) {
  if (s == "json") return Format::json;
  if (s == "csv") return Format::csv;
  throw InputError("--format must be json or csv");
}

// Writes to --out when given, otherwise to the command's stream.
void emit(const Globals& g, std::ostream& out, const std::string& text) {
  if (g.out_path.empty()) {
    out << text;
    return;
  }
  std::ofstream file(g.out_path, std::ios::binary);
  if (!file) throw InputError("cannot write '" + g.out_path + "'");
  file << text;
  if (!file) throw InputError("failed writing '" + g.out_path + "'");
}

std::string csv_line(const std::vector<std::string>& cells) {
  std::string s;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) s += ',';
    s += cells[i];
  }
  return s + '\n';
}

std::string opt_cell(const std::optional<double>& v) { return v ? format_double(*v) : "nan"; }

// ---- compute ---------------------------------------------------------------

int cmd_compute(const Globals& g, const std::string& spec_arg, const std::string& f_name, std::ostream& out) {
  const Format fmt = parse_format(g.format);
  const Config cfg = load_config(g);
  const JointSpec spec = load_channel_spec(spec_arg);
  const FGenerator f = parse_f(f_name);
  CertifyOptions options;
  options.optimizer = cfg.optimizer;
  options.balance_mode = g.balance_dp ? BalanceMode::dp : BalanceMode::exact;
  const BoundReport r = certify(f, spec, options);
  if (fmt == Format::json) {
    emit(g, out, to_json(r).dump(2) + '\n');
  } else {
    std::string text = csv_line({"f", "eta_chi2", "rho", "eta_f_est", "p_star", "balance", "thm3_raw", "thm2_raw",
                                 "thm3_clip", "thm2_clip", "thm4_raw", "eq33_raw", "eq34_raw", "pass"});
    text += csv_line({r.f_name, format_double(r.eta_chi2), format_double(r.rho), format_double(r.eta_f_estimate),
                      format_double(r.p_star), format_double(r.balance), format_double(r.thm3),
                      format_double(r.thm2), format_double(r.thm3_clipped), format_double(r.thm2_clipped),
                      opt_cell(r.thm4), opt_cell(r.eq33), opt_cell(r.eq34), r.all_pass() ? "1" : "0"});
    emit(g, out, text);
  }
  return r.all_pass() ? kOk : kVerificationFailed;
}

// ---- sweep -----------------------------------------------------------------

enum class Endpoints { closed, open, left_open, right_open };

struct Axis {
  double start = 0.0;
  double stop = 0.0;
  int count = 0;
  Endpoints endpoints = Endpoints::closed;

  std::vector<double> values() const {
    const int lead = (endpoints == Endpoints::open || endpoints == Endpoints::left_open) ? 1 : 0;
    const int trail = (endpoints == Endpoints::open || endpoints == Endpoints::right_open) ? 1 : 0;
    const int intervals = count - 1 + lead + trail;
    std::vector<double> v;
    for (int i = 0; i < count; ++i) {
      const int k = i + lead;
      // extended precision so decimal grids such as 0.05 steps round to the nearest double
      const long double t = (static_cast<long double>(start) * (intervals - k) + static_cast<long double>(stop) * k) /
                            intervals;
      v.push_back(static_cast<double>(t));
    }
    return v;
  }
};

Axis parse_axis(const std::string& name, const std::string& text) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  for (std::string part; std::getline(ss, part, ':');) parts.push_back(part);
  if (parts.size() != 3 && parts.size() != 4) {
    throw InputError("axis " + name + ": expected start:stop:count[:closed|open|left-open|right-open], got '" +
                     text + "'");
  }
  Axis a;
  try {
    std::size_t used = 0;
    a.start = std::stod(parts[0], &used);
    if (used != parts[0].size()) throw std::invalid_argument("start");
    a.stop = std::stod(parts[1], &used);
    if (used != parts[1].size()) throw std::invalid_argument("stop");
    a.count = std::stoi(parts[2], &used);
    if (used != parts[2].size()) throw std::invalid_argument("count");
  } catch (const std::logic_error&) {
    throw InputError("axis " + name + ": cannot parse '" + text + "'");
  }
  if (parts.size() == 4) {
    if (parts[3] == "closed") {
      a.endpoints = Endpoints::closed;
    } else if (parts[3] == "open") {
      a.endpoints = Endpoints::open;
    } else if (parts[3] == "left-open") {
      a.endpoints = Endpoints::left_open;
    } else if (parts[3] == "right-open") {
      a.endpoints = Endpoints::right_open;
    } else {
      throw InputError("axis " + name + ": unknown endpoint mode '" + parts[3] + "'");
    }
  }
  if (a.count < 2) throw InputError("axis " + name + ": count must be at least 2");
  if (!std::isfinite(a.start) || !std::isfinite(a.stop) || !(a.start < a.stop)) {
    throw InputError("axis " + name + ": need start < stop");
  }
  return a;
}

void require_within(const std::string& name, const std::vector<double>& v, double lo, double hi, bool open) {
  for (double x : v) {
    const bool ok = open ? (x > lo && x < hi) : (x >= lo && x <= hi);
    if (!ok) {
      throw InputError("axis " + name + ": value " + format_double(x) + " outside " + (open ? "(" : "[") +
                       format_double(lo) + ", " + format_double(hi) + (open ? ")" : "]"));
    }
  }
}

struct SweepPlan {
  std::string family;
  std::vector<std::string> key_columns;
  std::vector<std::vector<double>> keys;  // one per row
  std::vector<JointSpec> specs;
  std::vector<std::string> extra_f;
};

struct SweepArgs {
  std::string family;
  std::string p_axis;
  std::string q_axis;
  std::string alpha_axis;
  std::string specs_path;
  std::vector<std::string> f_list;
};

// Fills unset arguments from the config's "sweep" object.
void merge_sweep_config(const Json& j, SweepArgs& a) {
  if (j.is_null()) return;
  if (!j.is_object()) throw InputError("config: sweep must be an object");
  auto text = [&](const std::string& key) {
    const Json& v = j.at(key);
    if (!v.is_string()) throw InputError("config: sweep." + key + " must be a string");
    return v.get<std::string>();
  };
  for (auto it = j.begin(); it != j.end(); ++it) {
    const std::string& k = it.key();
    if (k == "family") {
      if (a.family.empty()) a.family = text(k);
    } else if (k == "p") {
      if (a.p_axis.empty()) a.p_axis = text(k);
    } else if (k == "q") {
      if (a.q_axis.empty()) a.q_axis = text(k);
    } else if (k == "alpha") {
      if (a.alpha_axis.empty()) a.alpha_axis = text(k);
    } else if (k == "specs") {
      if (a.specs_path.empty() && it.value().is_string()) a.specs_path = text(k);
    } else if (k == "f") {
      if (!it.value().is_array()) throw InputError("config: sweep.f must be an array of names");
      if (a.f_list.empty()) {
        for (const Json& n : it.value()) {
          if (!n.is_string()) throw InputError("config: sweep.f must be an array of names");
          a.f_list.push_back(n.get<std::string>());
        }
      }
    } else {
      throw InputError("config: unknown sweep key '" + k + "'");
    }
  }
}

SweepPlan plan_sweep(SweepArgs a) {
  SweepPlan plan;
  if (a.family.empty()) a.family = "bsc_over_p_q";
  plan.family = a.family;
  for (const std::string& name : a.f_list) {
    const FGenerator f = parse_f(name);
    if (f.name != "kl" && std::find(plan.extra_f.begin(), plan.extra_f.end(), f.name) == plan.extra_f.end()) {
      plan.extra_f.push_back(f.name);
    }
  }
  if (a.family == "bsc_over_p_q") {
    const std::vector<double> ps = parse_axis("p", a.p_axis.empty() ? "0.05:0.95:19" : a.p_axis).values();
    const std::vector<double> qs = parse_axis("q", a.q_axis.empty() ? "0.05:0.95:19" : a.q_axis).values();
    require_within("p", ps, 0.0, 1.0, false);
    require_within("q", qs, 0.0, 1.0, true);
    plan.key_columns = {"p", "q"};
    for (double p : ps) {
      for (double q : qs) {
        plan.keys.push_back({p, q});
        plan.specs.push_back(make_bsc(p, q));
      }
    }
  } else if (a.family == "dsbs_over_alpha") {
    const std::vector<double> as = parse_axis("alpha", a.alpha_axis.empty() ? "0:0.5:11" : a.alpha_axis).values();
    require_within("alpha", as, 0.0, 1.0, false);
    plan.key_columns = {"alpha"};
    for (double x : as) {
      plan.keys.push_back({x});
      plan.specs.push_back(make_dsbs(x));
    }
  } else if (a.family == "custom_json") {
    if (a.specs_path.empty()) throw InputError("sweep custom_json: --specs <file> is required");
    const Json j = read_json_file(a.specs_path);
    if (!j.is_array() || j.size() < 2) {
      throw InputError(a.specs_path + ": expected an array of at least 2 channel specs");
    }
    plan.key_columns = {"index"};
    for (std::size_t i = 0; i < j.size(); ++i) {
      try {
        plan.specs.push_back(j[i].is_string() ? load_channel_spec(j[i].get<std::string>()) : channel_from_json(j[i]));
      } catch (const InputError& e) {
        throw InputError(a.specs_path + ": entry " + std::to_string(i) + ": " + e.what());
      }
      plan.keys.push_back({static_cast<double>(i)});
    }
  } else {
    throw InputError("unknown sweep family '" + a.family + "' (bsc_over_p_q, dsbs_over_alpha, custom_json)");
  }
  for (std::size_t i = 0; i < plan.specs.size(); ++i) {
    if (!plan.specs[i].input().interior()) {
      throw InputError("sweep row " + std::to_string(i) + ": input pmf is not interior");
    }
  }
  return plan;
}

std::string key_cell(const std::string& column, double v) {
  if (column == "index") return std::to_string(static_cast<long>(v));
  return format_double(v);
}

int cmd_sweep(const Globals& g, SweepArgs args, std::ostream& out) {
  const Format fmt = parse_format(g.format);
  const Config cfg = load_config(g);
  merge_sweep_config(cfg.sweep, args);
  const SweepPlan plan = plan_sweep(args);

  const FGenerator kl = make_kl();
  std::vector<FGenerator> extras;
  std::vector<FConditions> extra_conditions;
  for (const std::string& name : plan.extra_f) {
    extras.push_back(parse_f(name));
    if (!extras.back().has_curvature()) {
      throw InputError("sweep: generator '" + name + "' has no curvature at 1 and no linear bound");
    }
    extra_conditions.push_back(assess_conditions(extras.back()));
  }
  CertifyOptions kl_options;
  kl_options.optimizer = cfg.optimizer;
  const Execution outer = cfg.optimizer.execution;
  kl_options.optimizer.execution = Execution::serial;
  kl_options.balance_mode = g.balance_dp ? BalanceMode::dp : BalanceMode::exact;
  kl_options.conditions = assess_conditions(kl);

  struct Row {
    BoundReport kl;
    std::vector<BoundReport> extra;
    bool pass = false;
  };
  std::vector<Row> rows(plan.specs.size());
  for_each_index(outer, rows.size(), [&](std::size_t i) {
    Row& row = rows[i];
    row.kl = certify(kl, plan.specs[i], kl_options);
    row.pass = row.kl.all_pass();
    for (std::size_t k = 0; k < extras.size(); ++k) {
      CertifyOptions o = kl_options;
      o.conditions = extra_conditions[k];
      row.extra.push_back(certify(extras[k], plan.specs[i], o));
      row.pass = row.pass && row.extra.back().all_pass();
    }
  });

  std::vector<std::string> header = plan.key_columns;
  for (const char* c : {"eta_chi2", "eta_kl_est", "thm3_raw", "thm2_raw", "thm3_clip", "thm2_clip"}) {
    header.push_back(c);
  }
  for (const std::string& name : plan.extra_f) {
    header.push_back("eta_" + name + "_est");
    header.push_back("thm4_" + name + "_raw");
    header.push_back("eq34_" + name + "_raw");
  }

  bool all_pass = true;
  std::string text;
  if (fmt == Format::csv) text = csv_line(header);
  Json json_rows = Json::array();
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const Row& row = rows[i];
    all_pass = all_pass && row.pass;
    std::vector<std::string> cells;
    Json obj = Json::object();
    for (std::size_t c = 0; c < plan.key_columns.size(); ++c) {
      cells.push_back(key_cell(plan.key_columns[c], plan.keys[i][c]));
      if (plan.key_columns[c] == "index") {
        obj["index"] = i;
      } else {
        obj[plan.key_columns[c]] = number(plan.keys[i][c]);
      }
    }
    const BoundReport& r = row.kl;
    const std::vector<double> main = {r.eta_chi2, r.eta_f_estimate, r.thm3, r.thm2, r.thm3_clipped, r.thm2_clipped};
    for (std::size_t c = 0; c < main.size(); ++c) {
      cells.push_back(format_double(main[c]));
      obj[header[plan.key_columns.size() + c]] = number(main[c]);
    }
    for (std::size_t k = 0; k < row.extra.size(); ++k) {
      const BoundReport& e = row.extra[k];
      const std::string& name = plan.extra_f[k];
      cells.push_back(format_double(e.eta_f_estimate));
      cells.push_back(opt_cell(e.thm4));
      cells.push_back(opt_cell(e.eq34));
      obj["eta_" + name + "_est"] = number(e.eta_f_estimate);
      obj["thm4_" + name + "_raw"] = e.thm4 ? number(*e.thm4) : Json(nullptr);
      obj["eq34_" + name + "_raw"] = e.eq34 ? number(*e.eq34) : Json(nullptr);
    }
    obj["pass"] = row.pass;
    if (fmt == Format::csv) {
      text += csv_line(cells);
    } else {
      json_rows.push_back(obj);
    }
  }
  if (fmt == Format::json) {
    const Json doc = {{"family", plan.family}, {"columns", header}, {"rows", json_rows}, {"pass", all_pass}};
    text = doc.dump(2) + '\n';
  }
  emit(g, out, text);
  return all_pass ? kOk : kVerificationFailed;
}

// ---- verify ----------------------------------------------------------------

int cmd_verify(const Globals& g, const std::string& suite, std::optional<long> samples, std::ostream& out) {
  const Format fmt = parse_format(g.format);
  const Config cfg = load_config(g);
  const std::uint64_t seed = g.seed.value_or(0);
  if (samples && *samples < 1) throw InputError("--samples must be positive");
  SuiteReport r;
  if (suite == "inequalities") {
    InequalityOptions o;
    o.seed = seed;
    if (samples) o.samples = *samples;
    o.execution = cfg.optimizer.execution;
    r = inequality_suite(o);
  } else if (suite == "properties") {
    PropertyOptions o;
    o.seed = seed;
    if (samples) o.samples = *samples;
    o.execution = cfg.optimizer.execution;
    o.optimizer = cfg.optimizer;
    r = properties_suite(o);
  } else if (suite == "local_limit") {
    LocalLimitOptions o;
    o.seed = seed;
    if (samples) o.specs = *samples;
    o.optimizer = cfg.optimizer;
    r = local_limit_suite(o);
  } else if (suite == "tensorization") {
    TensorizationOptions o;
    o.seed = seed;
    if (samples) o.specs = *samples;
    o.optimizer = cfg.optimizer;
    r = tensorization_suite(o);
  } else if (suite == "appendix_c") {
    r = appendix_c_suite();
  } else {
    throw InputError("unknown suite '" + suite +
                     "' (inequalities, properties, local_limit, tensorization, appendix_c)");
  }
  if (fmt == Format::json) {
    emit(g, out, to_json(r).dump(2) + '\n');
  } else {
    std::string text = csv_line({"check", "worst_margin", "tolerance", "count", "violations", "pass"});
    for (const CheckResult& c : r.checks) {
      text += csv_line({c.name, format_double(c.worst_margin), format_double(c.tolerance), std::to_string(c.count),
                        std::to_string(c.violations), c.pass() ? "1" : "0"});
    }
    emit(g, out, text);
  }
  return r.pass() ? kOk : kVerificationFailed;
}

// ---- fdiv ------------------------------------------------------------------

int cmd_fdiv(const Globals& g, const std::string& f_name, const std::string& r_arg, const std::string& p_arg,
             std::ostream& out) {
  const Format fmt = parse_format(g.format);
  const FGenerator f = parse_f(f_name);
  const Pmf r = load_pmf(r_arg);
  const Pmf p = load_pmf(p_arg);
  if (r.size() != p.size()) {
    throw InputError("fdiv: R has " + std::to_string(r.size()) + " entries but P has " + std::to_string(p.size()));
  }
  const DivergenceValue d = f_divergence(f, r, p);
  std::optional<std::array<double, 3>> bracket;
  if (f.name == "kl") {
    const DivergenceValue chi2 = chi2_divergence(r, p);
    const double c = chi2.finite ? chi2.value : std::numeric_limits<double>::infinity();
    bracket = std::array<double, 3>{d.finite ? d.value : std::numeric_limits<double>::infinity(), std::log1p(c), c};
  }
  if (fmt == Format::json) {
    Json j = {{"f", f.name}, {"value", number(d.finite ? d.value : std::numeric_limits<double>::infinity())},
              {"finite", d.finite}};
    if (bracket) {
      j["bracket"] = {{"kl", number((*bracket)[0])}, {"log1p_chi2", number((*bracket)[1])},
                      {"chi2", number((*bracket)[2])}};
    }
    emit(g, out, j.dump(2) + '\n');
  } else {
    std::vector<std::string> head = {"f", "value", "finite"};
    std::vector<std::string> row = {f.name, d.finite ? format_double(d.value) : "inf", d.finite ? "1" : "0"};
    if (bracket) {
      head.insert(head.end(), {"bracket_kl", "bracket_log1p_chi2", "bracket_chi2"});
      for (double v : *bracket) row.push_back(format_double(v));
    }
    emit(g, out, csv_line(head) + csv_line(row));
  }
  return kOk;
}

const char* kFooter =
    "Channel specs: bsc:<p>[:<q>], bec:<beta>:<q>, dsbs:<alpha>, inline JSON or a JSON file\n"
    "  {\"p_x\": [...], \"W\": [[...], ...]} with one W row per output letter.\n"
    "Generators: kl, chi2, tv, tsallis:<alpha>.\n"
    "Config file: {\"optimizer\": {...}, \"sweep\": {...}}. Optimizer keys and defaults:\n"
    "  restarts 64, max_iters 500, step_tolerance 1e-10, ratio_tolerance 1e-9, seed 0,\n"
    "  include_chi2_seed true, include_vertex_seeds true, execution \"parallel\".\n"
    "Exit codes: 0 success, 1 verification failure, 2 input error.";

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Contraction coefficients and linear bounds for discrete channels", "sdpi"};
  app.footer(kFooter);
  app.require_subcommand(1);

  Globals g;
  std::uint64_t seed = 0;
  auto add_globals = [&](CLI::App* a) {
    a->add_option("--seed", seed, "Seed for optimizer restarts and suite sampling");
    a->add_option("--config", g.config_path, "JSON config file")->check(CLI::ExistingFile);
    a->add_option("--out", g.out_path, "Write output to this path instead of stdout");
    a->add_option("--format", g.format, "Output format")->check(CLI::IsMember({"json", "csv"}));
    a->add_flag("--balance-dp", g.balance_dp, "Approximate the balance coefficient by dynamic programming");
  };

  auto* compute = app.add_subcommand("compute", "Bound report for one channel spec");
  std::string spec_arg;
  std::string f_name = "kl";
  compute->add_option("spec", spec_arg, "Channel spec")->required();
  compute->add_option("--f", f_name, "Generator")->capture_default_str();
  add_globals(compute);

  auto* sweep = app.add_subcommand("sweep", "Evaluate bounds over a parameter grid");
  SweepArgs sa;
  sweep->add_option("--family", sa.family, "bsc_over_p_q (default), dsbs_over_alpha or custom_json");
  sweep->add_option("--p", sa.p_axis, "p axis start:stop:count[:closed|open|left-open|right-open]");
  sweep->add_option("--q", sa.q_axis, "q axis, strictly inside (0, 1)");
  sweep->add_option("--alpha", sa.alpha_axis, "alpha axis for dsbs_over_alpha");
  sweep->add_option("--specs", sa.specs_path, "JSON array of channel specs for custom_json");
  sweep->add_option("--f", sa.f_list, "Extra generators, adding eta/thm4/eq34 columns");
  add_globals(sweep);

  auto* verify = app.add_subcommand("verify", "Run a verification suite");
  std::string suite;
  long samples = 0;
  verify->add_option("suite", suite, "inequalities, properties, local_limit, tensorization or appendix_c")
      ->required();
  auto* samples_opt = verify->add_option("--samples", samples, "Sample budget (pairs per dimension or specs)");
  add_globals(verify);

  auto* fdiv = app.add_subcommand("fdiv", "Evaluate D_f(R||P)");
  std::string fdiv_f;
  std::string r_arg;
  std::string p_arg;
  fdiv->add_option("f", fdiv_f, "Generator")->required();
  fdiv->add_option("R", r_arg, "Inline JSON array or file")->required();
  fdiv->add_option("P", p_arg, "Inline JSON array or file")->required();
  add_globals(fdiv);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return kOk;
    }
    err << "error: " << e.what() << '\n';
    return kInputError;
  }

  for (CLI::App* sub : {compute, sweep, verify, fdiv}) {
    if (sub->parsed() && sub->get_option("--seed")->count() > 0) g.seed = seed;
  }

  try {
    if (compute->parsed()) return cmd_compute(g, spec_arg, f_name, out);
    if (sweep->parsed()) return cmd_sweep(g, sa, out);
    if (verify->parsed()) {
      return cmd_verify(g, suite, samples_opt->count() ? std::optional<long>(samples) : std::nullopt, out);
    }
    return cmd_fdiv(g, fdiv_f, r_arg, p_arg, out);
  } catch (const InputError& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  } catch (const Json::exception& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  }
}

}  // namespace sdpi::cli
