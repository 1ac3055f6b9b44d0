#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>

#include <gtest/gtest.h>

#include "sdpi/error.hpp"
#include "sdpi/io.hpp"
#include "sdpi/spectral.hpp"

using namespace sdpi;

namespace {

std::string message_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const InputError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST(BuiltinSpec, Grammar) {
  EXPECT_TRUE(is_builtin_spec("bsc:0.1"));
  EXPECT_FALSE(is_builtin_spec("channel.json"));
  EXPECT_NEAR(analyze(parse_builtin_spec("dsbs:0.1")).eta_chi2, 0.64, 1e-12);
  EXPECT_NEAR(analyze(parse_builtin_spec("bec:0.3:0.5")).eta_chi2, 0.7, 1e-12);
  EXPECT_NEAR(parse_builtin_spec("bsc:0.1:0.3").input()[1], 0.3, 1e-15);
  EXPECT_THROW(parse_builtin_spec("bsc:"), InputError);
  EXPECT_THROW(parse_builtin_spec("bec:0.3"), InputError);
  EXPECT_THROW(parse_builtin_spec("dsbs:0.1:0.2"), InputError);
  EXPECT_THROW(parse_builtin_spec("bsc:abc"), InputError);
}

TEST(ChannelJson, ParsesRowsAsOutputs) {
  const JointSpec s = channel_from_json(Json::parse(R"({"p_x":[0.4,0.6],"W":[[0.9,0.2],[0.1,0.8]]})"));
  EXPECT_EQ(s.channel().matrix()(0, 1), 0.2);
  EXPECT_NEAR(s.output()[0], 0.4 * 0.9 + 0.6 * 0.2, 1e-15);
  const JointSpec bec = channel_from_json(Json::parse(R"({"p_x":[0.5,0.5],"W":[[0.7,0],[0.3,0.3],[0,0.7]]})"));
  EXPECT_EQ(bec.channel().outputs(), 3u);
}

TEST(ChannelJson, ErrorsNameRowAndColumn) {
  EXPECT_NE(message_of([] { channel_from_json(Json::parse(R"({"p_x":[0.5,0.5],"W":[[1,0],[0]]})")); })
                .find("row 1"),
            std::string::npos);
  EXPECT_NE(message_of([] { channel_from_json(Json::parse(R"({"p_x":[0.5,0.5],"W":[[1,"x"],[0,1]]})")); })
                .find("column 1"),
            std::string::npos);
  EXPECT_NE(message_of([] { channel_from_json(Json::parse(R"({"p_x":[0.5,0.5],"W":[[0.9,0],[0,1]]})")); })
                .find("column 0"),
            std::string::npos);
  EXPECT_THROW(channel_from_json(Json::parse(R"({"p_x":[0.5,0.5]})")), InputError);
  EXPECT_THROW(channel_from_json(Json::parse(R"({"p_x":[0.5,0.5],"W":[[1,0],[0,1]],"extra":1})")), InputError);
}

TEST(Files, ParseErrorsCarryPosition) {
  const auto path = std::filesystem::temp_directory_path() / "sdpi_io_bad.json";
  {
    std::ofstream f(path);
    f << "{\n  \"p_x\": [0.5, 0.5],\n  \"W\": [[1, 0] [0, 1]]\n}\n";
  }
  const std::string msg = message_of([&] { load_channel_spec(path.string()); });
  EXPECT_NE(msg.find("line 3"), std::string::npos) << msg;
  std::filesystem::remove(path);
  EXPECT_THROW(load_channel_spec("/nonexistent/spec.json"), InputError);
}

TEST(Pmfs, InlineAndErrors) {
  EXPECT_EQ(load_pmf("[0.25,0.75]")[1], 0.75);
  EXPECT_THROW(load_pmf("[0.25,"), InputError);
  EXPECT_THROW(load_pmf("[0.5,\"a\"]"), InputError);
  EXPECT_THROW(load_pmf("[0.5,0.6]"), InputError);
}

TEST(OptimizerJson, AppliesKnownKeysAndRejectsOthers) {
  OptimizerConfig c;
  apply_optimizer_config(Json::parse(R"({"restarts":5,"seed":9,"execution":"serial","include_vertex_seeds":false})"),
                         c);
  EXPECT_EQ(c.restarts, 5);
  EXPECT_EQ(c.seed, 9u);
  EXPECT_EQ(c.execution, Execution::serial);
  EXPECT_FALSE(c.include_vertex_seeds);
  EXPECT_THROW(apply_optimizer_config(Json::parse(R"({"restart":5})"), c), InputError);
  EXPECT_THROW(apply_optimizer_config(Json::parse(R"({"restarts":0})"), c), InputError);
  EXPECT_THROW(apply_optimizer_config(Json::parse(R"({"execution":"gpu"})"), c), InputError);
}

TEST(Numbers, NonFiniteAsStringsAndRoundTrip) {
  EXPECT_EQ(number(std::numeric_limits<double>::infinity()), "inf");
  EXPECT_EQ(number(-std::numeric_limits<double>::infinity()), "-inf");
  EXPECT_EQ(number(std::nan("")), "nan");
  for (double x : {0.1, 1.0 / 3.0, 0.64000000000000012, 1e-300}) {
    EXPECT_EQ(std::stod(format_double(x)), x);
    EXPECT_EQ(Json::parse(number(x).dump()).get<double>(), x);
  }
  EXPECT_EQ(format_double(0.5), "0.5");
  EXPECT_EQ(format_double(0.1), "0.10000000000000001");
}

TEST(Serialization, StableFieldNames) {
  const Json s = to_json(analyze(parse_builtin_spec("dsbs:0.1")));
  for (const char* k : {"singular_values", "rho", "eta_chi2", "principal_k", "input_support", "output_support"}) {
    EXPECT_TRUE(s.contains(k)) << k;
  }
  const Json d = to_json(DivergenceValue::infinite());
  EXPECT_EQ(d["value"], "inf");
  EXPECT_EQ(d["finite"], false);
}
