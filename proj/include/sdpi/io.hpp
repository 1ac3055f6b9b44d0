#pragma once

#include <string>
#include <string_view>

#include <json.hpp>

#include "sdpi/bounds.hpp"
#include "sdpi/channel.hpp"
#include "sdpi/contraction.hpp"
#include "sdpi/divergence.hpp"
#include "sdpi/spectral.hpp"
#include "sdpi/suites.hpp"

namespace sdpi {

using Json = nlohmann::json;

/// Finite doubles as numbers; +inf, -inf and NaN as the strings "inf",
/// "-inf" and "nan" since JSON has no literal for them.
Json number(double x);

/// "bsc:<p>", "bsc:<p>:<q>", "bec:<beta>:<q>", "dsbs:<alpha>".
bool is_builtin_spec(std::string_view text);
JointSpec parse_builtin_spec(std::string_view text);

/// {"p_x": [...], "W": [[...], ...]} with W given row by row (|Y| rows of
/// |X| entries). Errors name the offending field, row and column.
JointSpec channel_from_json(const Json& j);

/// Builtin spec string, inline JSON object, or path to a JSON file.
JointSpec load_channel_spec(const std::string& arg);

/// Inline JSON array such as "[0.5,0.5]" or a path to a file holding one.
Pmf load_pmf(const std::string& arg);

/// Reads a JSON document from disk, reporting parse errors with line and
/// column.
Json read_json_file(const std::string& path);

/// Applies the keys of an "optimizer" object onto `cfg`; unknown keys are
/// rejected.
void apply_optimizer_config(const Json& j, OptimizerConfig& cfg);

Json to_json(const DivergenceValue& d);
Json to_json(const SpectralResult& s);
Json to_json(const EtaEstimate& e);
Json to_json(const ConditionReport& c);
Json to_json(const BoundReport& r);
Json to_json(const CheckResult& c);
Json to_json(const SuiteReport& r);
Json to_json(const ConvergenceReport& r);

/// %.17g, or inf/-inf/nan.
std::string format_double(double x);

}  // namespace sdpi
