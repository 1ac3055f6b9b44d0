#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "sdpi/cli.hpp"
#include "sdpi/io.hpp"

using namespace sdpi;

namespace {

struct Result {
  int code = 0;
  std::string out;
  std::string err;
};

Result run(const std::vector<std::string>& args) {
  std::ostringstream out;
  std::ostringstream err;
  Result r;
  r.code = cli::run(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::filesystem::path temp(const std::string& name) { return std::filesystem::temp_directory_path() / name; }

std::vector<std::vector<std::string>> csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) {
    std::vector<std::string> cells;
    std::istringstream ls(line);
    for (std::string cell; std::getline(ls, cell, ',');) cells.push_back(cell);
    rows.push_back(cells);
  }
  return rows;
}

}  // namespace

TEST(Cli, ComputeExamples) {
  const Result d = run({"compute", "dsbs:0.1", "--f", "kl"});
  ASSERT_EQ(d.code, 0) << d.err;
  const Json j = Json::parse(d.out);
  EXPECT_NEAR(j["eta_chi2"].get<double>(), 0.64, 1e-12);
  EXPECT_TRUE(j["pass"].get<bool>());

  const Result b = run({"compute", "bec:0.3:0.5", "--f", "kl"});
  ASSERT_EQ(b.code, 0) << b.err;
  EXPECT_NEAR(Json::parse(b.out)["eta_chi2"].get<double>(), 0.7, 1e-12);

  const Result id = run({"compute", R"({"p_x":[0.5,0.5],"W":[[1,0],[0,1]]})", "--f", "kl"});
  ASSERT_EQ(id.code, 0) << id.err;
  const Json ij = Json::parse(id.out);
  EXPECT_NEAR(ij["eta_chi2"].get<double>(), 1.0, 1e-12);
  EXPECT_NEAR(ij["thm2_raw"].get<double>(), 2.0, 1e-12);
}

TEST(Cli, ComputeInputErrors) {
  EXPECT_EQ(run({"compute", "bsc:0.1:0"}).code, 2);
  EXPECT_EQ(run({"compute", "bsc:0.1", "--f", "tv"}).code, 2);
  EXPECT_EQ(run({"compute", "nosuchfile.json"}).code, 2);
  EXPECT_EQ(run({"compute", "dsbs:0.1", "--format", "xml"}).code, 2);
  EXPECT_EQ(run({"frobnicate"}).code, 2);
  EXPECT_EQ(run({}).code, 2);
  const Result bad = run({"compute", R"({"p_x":[0.5,0.5],"W":[[1,0],[0.5]]})"});
  EXPECT_EQ(bad.code, 2);
  EXPECT_NE(bad.err.find("row 1"), std::string::npos);
}

TEST(Cli, HelpDocumentsOptimizerDefaults) {
  const Result h = run({"--help"});
  EXPECT_EQ(h.code, 0);
  EXPECT_NE(h.out.find("restarts 64"), std::string::npos);
  EXPECT_NE(h.out.find("compute"), std::string::npos);
}

TEST(Cli, ConfigAndSeed) {
  const auto cfg = temp("sdpi_cli_cfg.json");
  {
    std::ofstream f(cfg);
    f << R"({"optimizer": {"restarts": 4, "execution": "serial"}})";
  }
  const Result a = run({"compute", "bsc:0.2:0.3", "--config", cfg.string(), "--seed", "11"});
  const Result b = run({"compute", "bsc:0.2:0.3", "--config", cfg.string(), "--seed", "11"});
  ASSERT_EQ(a.code, 0) << a.err;
  EXPECT_EQ(a.out, b.out);
  {
    std::ofstream f(cfg);
    f << R"({"optimizer": {"restarts": 4, "bogus": 1}})";
  }
  EXPECT_EQ(run({"compute", "bsc:0.2:0.3", "--config", cfg.string()}).code, 2);
  std::filesystem::remove(cfg);
}

TEST(Cli, SweepHeaderRowsAndExamples) {
  const Result r = run({"sweep", "--p", "0.05:0.95:19", "--q", "0.05:0.95:19", "--format", "csv"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto rows = csv(r.out);
  ASSERT_EQ(rows.size(), 362u);
  EXPECT_EQ(r.out.substr(0, r.out.find('\n')), "p,q,eta_chi2,eta_kl_est,thm3_raw,thm2_raw,thm3_clip,thm2_clip");
  bool saw_half = false;
  bool saw_dsbs = false;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const double p = std::stod(rows[i][0]);
    const double q = std::stod(rows[i][1]);
    const double c = std::stod(rows[i][2]);
    const double k = std::stod(rows[i][3]);
    const double t3 = std::stod(rows[i][4]);
    const double t2 = std::stod(rows[i][5]);
    EXPECT_LE(c, k + 1e-6);
    EXPECT_LE(k, t3 + 1e-9);
    EXPECT_LE(t3, t2 + 1e-9);
    if (p == 0.5) {
      saw_half = true;
      for (int col = 2; col < 6; ++col) EXPECT_NEAR(std::stod(rows[i][col]), 0.0, 1e-15);
    }
    if (p == 0.1 && q == 0.5) {
      saw_dsbs = true;
      EXPECT_NEAR(c, 0.64, 1e-12);
      EXPECT_NEAR(k, 0.64, 1e-4);
    }
  }
  EXPECT_TRUE(saw_half);
  EXPECT_TRUE(saw_dsbs);
}

TEST(Cli, SweepIsDeterministicAcrossExecution) {
  const auto cfg = temp("sdpi_cli_serial.json");
  {
    std::ofstream f(cfg);
    f << R"({"optimizer": {"execution": "serial"}})";
  }
  const std::vector<std::string> base = {"sweep", "--p", "0.1:0.4:3", "--q", "0.2:0.8:3", "--format", "csv"};
  std::vector<std::string> serial = base;
  serial.insert(serial.end(), {"--config", cfg.string()});
  EXPECT_EQ(run(base).out, run(serial).out);
  EXPECT_EQ(run(base).out, run(base).out);
  std::filesystem::remove(cfg);
}

TEST(Cli, SweepFamiliesAndExtraGenerators) {
  const Result d = run({"sweep", "--family", "dsbs_over_alpha", "--alpha", "0:0.5:6", "--format", "csv"});
  ASSERT_EQ(d.code, 0) << d.err;
  EXPECT_EQ(d.out.substr(0, 6), "alpha,");
  EXPECT_EQ(csv(d.out).size(), 7u);

  const Result e = run({"sweep", "--p", "0.1:0.3:2", "--q", "0.3:0.5:2", "--f", "tsallis:1.5", "--format", "csv"});
  ASSERT_EQ(e.code, 0) << e.err;
  EXPECT_NE(e.out.find("eta_tsallis:1.5_est,thm4_tsallis:1.5_raw,eq34_tsallis:1.5_raw"), std::string::npos);

  const auto specs = temp("sdpi_cli_specs.json");
  {
    std::ofstream f(specs);
    f << R"(["dsbs:0.1", {"p_x":[0.3,0.7],"W":[[0.9,0.2],[0.1,0.8]]}])";
  }
  const Result c = run({"sweep", "--family", "custom_json", "--specs", specs.string(), "--format", "csv"});
  ASSERT_EQ(c.code, 0) << c.err;
  const auto rows = csv(c.out);
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_EQ(rows[0][0], "index");
  EXPECT_EQ(rows[2][0], "1");
  std::filesystem::remove(specs);
}

TEST(Cli, SweepRejectsBadGrids) {
  EXPECT_EQ(run({"sweep", "--q", "0:1:5"}).code, 2);
  EXPECT_EQ(run({"sweep", "--q", "0.1:0.9:1"}).code, 2);
  EXPECT_EQ(run({"sweep", "--p", "0.1:1.2:3"}).code, 2);
  EXPECT_EQ(run({"sweep", "--family", "nope"}).code, 2);
  // open endpoints keep q interior
  const Result open = run({"sweep", "--p", "0.1:0.2:2", "--q", "0:1:3:open", "--format", "csv"});
  ASSERT_EQ(open.code, 0) << open.err;
  EXPECT_NE(open.out.find(",0.25,"), std::string::npos);
  EXPECT_NE(open.out.find(",0.75,"), std::string::npos);
}

TEST(Cli, OutWritesFileAndReportsUnwritablePath) {
  const auto out = temp("sdpi_cli_out.csv");
  const Result r = run({"sweep", "--p", "0.1:0.2:2", "--q", "0.3:0.5:2", "--format", "csv", "--out", out.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(r.out.empty());
  std::ifstream f(out);
  std::string header;
  std::getline(f, header);
  EXPECT_EQ(header.substr(0, 4), "p,q,");
  std::filesystem::remove(out);
  EXPECT_EQ(run({"sweep", "--p", "0.1:0.2:2", "--out", "/nonexistent/dir/x.csv"}).code, 2);
}

TEST(Cli, VerifyConditionSuite) {
  const Result r = run({"verify", "appendix_c"});
  ASSERT_EQ(r.code, 0) << r.err;
  const Json j = Json::parse(r.out);
  EXPECT_TRUE(j["pass"].get<bool>());
  EXPECT_EQ(j["values"]["h_min"].get<double>(), 0.0);
  EXPECT_EQ(j["values"]["h_argmin"].get<double>(), 1.0);
  EXPECT_EQ(run({"verify", "nonsense"}).code, 2);
}

TEST(Cli, VerifySmallBudgets) {
  EXPECT_EQ(run({"verify", "inequalities", "--samples", "200"}).code, 0);
  EXPECT_EQ(run({"verify", "tensorization", "--samples", "3"}).code, 0);
  EXPECT_EQ(run({"verify", "inequalities", "--samples", "0"}).code, 2);
}

TEST(Cli, FdivExamples) {
  const Result k = run({"fdiv", "kl", "[0.5,0.5]", "[0.25,0.75]"});
  ASSERT_EQ(k.code, 0) << k.err;
  const Json kj = Json::parse(k.out);
  EXPECT_NEAR(kj["value"].get<double>(), 0.143841, 1e-6);
  EXPECT_TRUE(kj["finite"].get<bool>());
  EXPECT_NEAR(kj["bracket"]["log1p_chi2"].get<double>(), std::log(4.0 / 3.0), 1e-15);
  EXPECT_NEAR(kj["bracket"]["chi2"].get<double>(), 1.0 / 3.0, 1e-15);

  EXPECT_NEAR(Json::parse(run({"fdiv", "tv", "[1,0]", "[0,1]"}).out)["value"].get<double>(), 1.0, 1e-15);
  EXPECT_EQ(Json::parse(run({"fdiv", "chi2", "[0.3,0.7]", "[0.3,0.7]"}).out)["value"].get<double>(), 0.0);
  const Json inf = Json::parse(run({"fdiv", "kl", "[1,0]", "[0,1]"}).out);
  EXPECT_EQ(inf["value"], "inf");
  EXPECT_FALSE(inf["finite"].get<bool>());
  EXPECT_EQ(run({"fdiv", "kl", "[0.5,0.5]", "[0.2,0.3,0.5]"}).code, 2);
  EXPECT_EQ(run({"fdiv", "kl", "[0.5,0.5"}).code, 2);
}
