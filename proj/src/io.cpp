#include "sdpi/io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "sdpi/error.hpp"

namespace sdpi {

namespace {

double parse_number(std::string_view text, const char* what) {
  const std::string s(text);
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size() || !std::isfinite(v)) {
    throw InputError(std::string("cannot parse ") + what + " from '" + s + "'");
  }
  return v;
}

std::vector<std::string_view> split(std::string_view text, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  for (;;) {
    const std::size_t pos = text.find(sep, start);
    parts.push_back(text.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

double element(const Json& j, const std::string& where) {
  if (!j.is_number()) throw InputError(where + ": expected a number");
  return j.get<double>();
}

Json vector_json(const Vector& v) {
  Json a = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(number(v[i]));
  return a;
}

Json vector_json(const std::vector<double>& v) {
  Json a = Json::array();
  for (double x : v) a.push_back(number(x));
  return a;
}

template <typename T>
Json optional_number(const std::optional<T>& v) {
  return v ? number(*v) : Json(nullptr);
}

}  // namespace

Json number(double x) {
  if (std::isfinite(x)) return x;
  if (std::isnan(x)) return "nan";
  return x > 0 ? "inf" : "-inf";
}

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

bool is_builtin_spec(std::string_view text) {
  return text.rfind("bsc:", 0) == 0 || text.rfind("bec:", 0) == 0 || text.rfind("dsbs:", 0) == 0;
}

JointSpec parse_builtin_spec(std::string_view text) {
  const auto parts = split(text, ':');
  const std::string_view name = parts[0];
  if (name == "bsc" && (parts.size() == 2 || parts.size() == 3)) {
    const double p = parse_number(parts[1], "bsc crossover probability");
    if (parts.size() == 2) return make_bsc(p);
    return make_bsc(p, parse_number(parts[2], "input probability q"));
  }
  if (name == "bec" && parts.size() == 3) {
    return make_bec(parse_number(parts[1], "bec erasure probability"),
                    parse_number(parts[2], "input probability q"));
  }
  if (name == "dsbs" && parts.size() == 2) return make_dsbs(parse_number(parts[1], "dsbs crossover probability"));
  throw InputError("malformed channel spec '" + std::string(text) +
                   "' (expected bsc:<p>[:<q>], bec:<beta>:<q> or dsbs:<alpha>)");
}

JointSpec channel_from_json(const Json& j) {
  if (!j.is_object()) throw InputError("channel spec: expected a JSON object with p_x and W");
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (it.key() != "p_x" && it.key() != "W") throw InputError("channel spec: unknown field '" + it.key() + "'");
  }
  if (!j.contains("p_x") || !j["p_x"].is_array()) throw InputError("channel spec: field p_x must be an array");
  if (!j.contains("W") || !j["W"].is_array()) throw InputError("channel spec: field W must be an array of rows");
  const Json& px = j["p_x"];
  const Json& w = j["W"];
  const std::size_t nx = px.size();
  if (nx == 0) throw InputError("channel spec: p_x is empty");
  if (w.empty()) throw InputError("channel spec: W has no rows");
  Vector p(static_cast<Eigen::Index>(nx));
  for (std::size_t x = 0; x < nx; ++x) p[static_cast<Eigen::Index>(x)] = element(px[x], "p_x[" + std::to_string(x) + "]");
  Matrix m(static_cast<Eigen::Index>(w.size()), static_cast<Eigen::Index>(nx));
  for (std::size_t y = 0; y < w.size(); ++y) {
    const Json& row = w[y];
    if (!row.is_array()) throw InputError("channel spec: W row " + std::to_string(y) + " is not an array");
    if (row.size() != nx) {
      throw InputError("channel spec: W row " + std::to_string(y) + " has " + std::to_string(row.size()) +
                       " entries, expected " + std::to_string(nx) + " (one per input letter)");
    }
    for (std::size_t x = 0; x < nx; ++x) {
      m(static_cast<Eigen::Index>(y), static_cast<Eigen::Index>(x)) =
          element(row[x], "W row " + std::to_string(y) + " column " + std::to_string(x));
    }
  }
  return JointSpec(Pmf(std::move(p)), Channel(std::move(m)));
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path + "'");
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw InputError(path + ": " + e.what());
  }
}

namespace {

Json parse_inline(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw InputError("inline JSON: " + std::string(e.what()));
  }
}

}  // namespace

JointSpec load_channel_spec(const std::string& arg) {
  if (is_builtin_spec(arg)) return parse_builtin_spec(arg);
  if (!arg.empty() && arg.front() == '{') return channel_from_json(parse_inline(arg));
  return channel_from_json(read_json_file(arg));
}

Pmf load_pmf(const std::string& arg) {
  const Json j = (!arg.empty() && arg.front() == '[') ? parse_inline(arg) : read_json_file(arg);
  if (!j.is_array()) throw InputError("pmf: expected a JSON array of masses");
  std::vector<double> m;
  for (std::size_t i = 0; i < j.size(); ++i) m.push_back(element(j[i], "pmf[" + std::to_string(i) + "]"));
  return Pmf(m);
}

void apply_optimizer_config(const Json& j, OptimizerConfig& cfg) {
  if (!j.is_object()) throw InputError("config: optimizer must be an object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    const std::string& k = it.key();
    const Json& v = it.value();
    auto need_int = [&] {
      if (!v.is_number_integer()) throw InputError("config: optimizer." + k + " must be an integer");
    };
    auto need_num = [&] {
      if (!v.is_number()) throw InputError("config: optimizer." + k + " must be a number");
    };
    auto need_bool = [&] {
      if (!v.is_boolean()) throw InputError("config: optimizer." + k + " must be true or false");
    };
    if (k == "restarts") {
      need_int();
      cfg.restarts = v.get<int>();
    } else if (k == "max_iters") {
      need_int();
      cfg.max_iters = v.get<int>();
    } else if (k == "step_tolerance") {
      need_num();
      cfg.step_tolerance = v.get<double>();
    } else if (k == "ratio_tolerance") {
      need_num();
      cfg.ratio_tolerance = v.get<double>();
    } else if (k == "seed") {
      if (!v.is_number_unsigned()) throw InputError("config: optimizer.seed must be a non-negative integer");
      cfg.seed = v.get<std::uint64_t>();
    } else if (k == "include_chi2_seed") {
      need_bool();
      cfg.include_chi2_seed = v.get<bool>();
    } else if (k == "include_vertex_seeds") {
      need_bool();
      cfg.include_vertex_seeds = v.get<bool>();
    } else if (k == "execution") {
      const std::string e = v.is_string() ? v.get<std::string>() : "";
      if (e == "serial") {
        cfg.execution = Execution::serial;
      } else if (e == "parallel") {
        cfg.execution = Execution::parallel;
      } else {
        throw InputError("config: optimizer.execution must be \"serial\" or \"parallel\"");
      }
    } else {
      throw InputError("config: unknown optimizer key '" + k + "'");
    }
  }
  cfg.validate();
}

Json to_json(const DivergenceValue& d) { return {{"value", number(d.value)}, {"finite", d.finite}}; }

Json to_json(const SpectralResult& s) {
  return {{"singular_values", vector_json(s.singular_values)},
          {"rho", number(s.rho)},
          {"eta_chi2", number(s.eta_chi2)},
          {"principal_k", vector_json(s.principal_k)},
          {"input_support", s.input_support},
          {"output_support", s.output_support}};
}

Json to_json(const EtaEstimate& e) {
  Json restarts = Json::array();
  for (const RestartRecord& r : e.diagnostics) {
    restarts.push_back({{"origin", r.origin},
                        {"ratio", number(r.ratio)},
                        {"input_divergence", number(r.input_divergence)},
                        {"iterations", r.iterations}});
  }
  return {{"value", number(e.value)},
          {"argmax", vector_json(e.argmax.masses())},
          {"input_divergence", number(e.input_divergence)},
          {"output_divergence", number(e.output_divergence)},
          {"exceeds_one", e.exceeds_one},
          {"restarts", restarts}};
}

Json to_json(const ConditionReport& c) {
  Json j = {{"condition", c.condition},
            {"generator", c.generator},
            {"t_min", number(c.t_min)},
            {"t_max", number(c.t_max)},
            {"points", c.points},
            {"worst_margin", number(c.worst_margin)},
            {"worst_at", number(c.worst_at)},
            {"tolerance", number(c.tolerance)},
            {"pass", c.pass}};
  if (c.h_min) {
    j["h_min"] = number(*c.h_min);
    j["h_argmin"] = number(*c.h_argmin);
  }
  return j;
}

Json to_json(const BoundReport& r) {
  Json conditions = Json::object();
  if (r.conditions.pinsker) conditions["pinsker"] = to_json(*r.conditions.pinsker);
  if (r.conditions.difference_quotient) {
    conditions["difference_quotient_concave"] = to_json(*r.conditions.difference_quotient);
  }
  if (r.conditions.second_derivative) {
    conditions["nonincreasing_second_derivative"] = to_json(*r.conditions.second_derivative);
  }
  Json verdicts = Json::array();
  for (const Verdict& v : r.verdicts) {
    verdicts.push_back({{"name", v.name},
                        {"lhs", number(v.lhs)},
                        {"rhs", number(v.rhs)},
                        {"tolerance", number(v.tolerance)},
                        {"pass", v.pass}});
  }
  Json j = {{"f", r.f_name},
            {"eta_chi2", number(r.eta_chi2)},
            {"rho", number(r.rho)},
            {"eta_f_estimate", number(r.eta_f_estimate)},
            {"eta_f_argmax", vector_json(r.eta_f_argmax)},
            {"eta_f_input_divergence", number(r.eta_f_input_divergence)},
            {"eta_f_output_divergence", number(r.eta_f_output_divergence)},
            {"eta_f_exceeds_one", r.eta_f_exceeds_one},
            {"p_star", number(r.p_star)},
            {"balance", number(r.balance)},
            {"balance_exact", r.balance_exact},
            {"phi_of_balance", number(r.phi_of_balance)},
            {"thm2_raw", number(r.thm2)},
            {"thm3_raw", number(r.thm3)},
            {"thm2_clip", number(r.thm2_clipped)},
            {"thm3_clip", number(r.thm3_clipped)},
            {"thm4_raw", optional_number(r.thm4)},
            {"eq33_raw", optional_number(r.eq33)},
            {"eq34_raw", optional_number(r.eq34)},
            {"thm4_certified", r.thm4_certified},
            {"eq33_certified", r.eq33_certified},
            {"conditions", conditions},
            {"verdicts", verdicts},
            {"pass", r.all_pass()}};
  if (r.tensor) {
    const TensorInfo& t = *r.tensor;
    j["tensor"] = {{"n", t.n},
                   {"product_inputs", t.product_inputs},
                   {"single_eta_chi2", number(t.single_eta_chi2)},
                   {"product_eta_chi2", number(t.product_eta_chi2)},
                   {"product_eta_f_lower", number(t.product_eta_f_lower)},
                   {"product_p_star", number(t.product_p_star)},
                   {"naive_constant", number(t.naive_constant)},
                   {"corollary_constant", number(t.corollary_constant)},
                   {"naive_bound", number(t.naive_bound)},
                   {"corollary_bound", number(t.corollary_bound)},
                   {"f_corollary_constant", optional_number(t.f_corollary_constant)}};
  }
  return j;
}

Json to_json(const CheckResult& c) {
  return {{"name", c.name},
          {"worst_margin", number(c.worst_margin)},
          {"worst_context", c.worst_context},
          {"tolerance", number(c.tolerance)},
          {"count", c.count},
          {"violations", c.violations},
          {"pass", c.pass()}};
}

Json to_json(const SuiteReport& r) {
  Json checks = Json::array();
  for (const CheckResult& c : r.checks) checks.push_back(to_json(c));
  Json values = Json::object();
  for (const auto& [k, v] : r.values) values[k] = number(v);
  return {{"suite", r.suite}, {"seed", r.seed}, {"samples", r.samples},
          {"checks", checks}, {"values", values}, {"pass", r.pass()}};
}

Json to_json(const ConvergenceReport& r) {
  return {{"deltas", vector_json(r.deltas)},
          {"taus", vector_json(r.taus)},
          {"eta_chi2", number(r.eta_chi2)},
          {"max_increase", number(r.max_increase)},
          {"non_increasing", r.non_increasing},
          {"final_gap", number(r.final_gap)},
          {"pass", r.pass}};
}

}  // namespace sdpi
