#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "oscillab/explab.hpp"

using namespace osc;

namespace {

std::string temp_file(const std::string& name, const std::string& text) {
  const auto p = std::filesystem::temp_directory_path() / ("oscillab_test_" + name);
  std::ofstream(p, std::ios::binary) << text;
  return p.string();
}

std::vector<ReportRow> sample_rows() {
  return {make_row("demo", "plain", {{"n", "2"}, {"lambda", "4096"}}, 0.125, "<=", 1.0),
          make_row("demo", "needs,quote", {{"note", "say \"hi\""}}, -3.5e-7, "in", -1.0, 1.0),
          make_row("demo", "missing", {}, kNaN, ">=", 0.0)};
}

}  // namespace

TEST(Verdict, Relations) {
  EXPECT_TRUE(verdict(1, "<=", 1));
  EXPECT_FALSE(verdict(1, "<", 1));
  EXPECT_TRUE(verdict(2, ">", 1));
  EXPECT_TRUE(verdict(0, "==", 0));
  EXPECT_TRUE(verdict(0.5, "in", 0.25, 4));
  EXPECT_FALSE(verdict(5, "in", 0.25, 4));
  EXPECT_FALSE(verdict(kNaN, "<=", 1));
  EXPECT_THROW(verdict(1, "~", 1), ArgumentError);
}

TEST(Report, CsvFormat) {
  EXPECT_EQ(to_csv({}),
            "experiment,metric,parameters,measured,relation,reference,reference_upper,pass\r\n");
  const std::string csv = to_csv(sample_rows());
  EXPECT_NE(csv.find("demo,plain,n=2;lambda=4096,1.2500000000e-01,<=,1.0000000000e+00,,true\r\n"),
            std::string::npos);
  EXPECT_NE(csv.find("\"needs,quote\",\"note=say \"\"hi\"\"\""), std::string::npos);
  EXPECT_NE(csv.find("demo,missing,,,>=,0.0000000000e+00,,false\r\n"), std::string::npos);
  EXPECT_EQ(to_csv(sample_rows()), csv);
  EXPECT_EQ(fmt_double(1.0 / 3), "3.3333333333e-01");
}

TEST(Report, JsonRoundTrip) {
  const std::string j = to_json(sample_rows());
  EXPECT_EQ(j.front(), '[');
  EXPECT_NE(j.find("null"), std::string::npos);
  const auto back = rows_from_json(j);
  ASSERT_EQ(back.size(), 3u);
  EXPECT_EQ(back[0].parameters, sample_rows()[0].parameters);
  EXPECT_TRUE(std::isnan(back[2].measured));
  EXPECT_EQ(to_json(back), j);
  EXPECT_EQ(to_json({}), "[]\n");
}

TEST(Report, PlotScriptAndFiles) {
  const std::string s = plot_script("out.csv");
  EXPECT_NE(s.find("out.csv"), std::string::npos);
  EXPECT_NE(s.find("matplotlib"), std::string::npos);
  const auto path = (std::filesystem::temp_directory_path() / "oscillab_test_rows.csv").string();
  emit(sample_rows(), "csv", path);
  std::ifstream f(path, std::ios::binary);
  std::stringstream ss;
  ss << f.rdbuf();
  EXPECT_EQ(ss.str(), to_csv(sample_rows()));
}

TEST(Config, DefaultsAndOptions) {
  ExperimentConfig c = default_config("transequi");
  EXPECT_EQ(c.pairs.size(), 2u);
  set_option(c, "pairs", "256:64,1024:128,4096:256");
  EXPECT_EQ(c.pairs.back(), (std::pair<double, double>{4096, 256}));
  set_option(c, "lambda", "65536");
  EXPECT_NO_THROW(c.validate());
  EXPECT_THROW(set_option(c, "lambda", "12abc"), ArgumentError);
  EXPECT_THROW(set_option(c, "bogus", "1"), ArgumentError);
  EXPECT_THROW(set_option(c, "seed", "-1"), ArgumentError);
  EXPECT_THROW(default_config("nope"), ArgumentError);
  const auto keys = config_keys();
  EXPECT_NE(std::find(keys.begin(), keys.end(), "pairs"), keys.end());
}

TEST(Config, ValidationRanges) {
  ExperimentConfig w = default_config("wavepackets");
  w.rho = 8;  // below r^{1/2} = 16
  EXPECT_THROW(w.validate(), ArgumentError);
  w.rho = 64;
  w.r = 8192;  // above lambda^{1-eps}
  EXPECT_THROW(w.validate(), ArgumentError);
  ExperimentConfig b = default_config("broadnorm");
  b.k = 3;  // n = 3 needs k <= 2
  EXPECT_THROW(b.validate(), ArgumentError);
  ExperimentConfig r = default_config("rescale");
  r.K = 32;  // K^2 > r
  EXPECT_THROW(r.validate(), ArgumentError);
  ExperimentConfig t = default_config("transequi");
  t.variety = "torus";
  EXPECT_THROW(t.validate(), ArgumentError);
}

TEST(Config, TomlAndJsonFiles) {
  ExperimentConfig a = default_config("transequi");
  load_config_file(a, temp_file("a.toml", "n = 2\nlambda = 8192.0\npairs = [[256, 64]]\nseed = 7\n"));
  EXPECT_EQ(a.lambda, 8192);
  EXPECT_EQ(a.seed, 7u);
  ASSERT_EQ(a.pairs.size(), 1u);
  ExperimentConfig b = default_config("broadnorm");
  load_config_file(b, temp_file("b.json", R"({"K": 4, "a_values": [1, 3], "instances": 5})"));
  EXPECT_EQ(b.K, 4);
  EXPECT_EQ(b.a_values, (std::vector<int>{1, 3}));
  EXPECT_EQ(b.instances, 5);
  ExperimentConfig c = default_config("knapp");
  EXPECT_THROW(load_config_file(c, temp_file("c.toml", "typo = 1\n")), ArgumentError);
  EXPECT_THROW(load_config_file(c, temp_file("d.json", "{ broken")), ArgumentError);
  EXPECT_THROW(load_config_file(c, "/nonexistent/oscillab.toml"), ArgumentError);
}

TEST(Inputs, RandomSmoothIsDeterministicAndVanishesAtEdges) {
  const GridFunction a = random_smooth(1, 512, CounterRng(3, "x"));
  const GridFunction b = random_smooth(1, 512, CounterRng(3, "x"));
  EXPECT_EQ(a.samples, b.samples);
  EXPECT_EQ(std::abs(a.samples[0]), 0.0);
  EXPECT_GT(a.l2_norm(), 0.0);
}

TEST(Knapp, GuardsAndZeroInput) {
  EXPECT_THROW(knapp_input(2, 64, 16, 0.05), ResolutionError);  // 2 delta L < 4
  EXPECT_THROW(knapp_input(2, 64, 32, 0.25), ResolutionError);  // N / L < 2.5
  const GridFunction z = GridFunction::zeros({0.0, 0.0}, {1.0, 1.0}, {16, 16});
  EXPECT_FALSE(knapp_ratio(z, 0.0, 4, 1).has_value());
}

TEST(Experiments, ExponentRowsPass) {
  for (const auto& row : run_exponents(default_config("exponents"))) EXPECT_TRUE(row.pass) << row.metric;
}

TEST(Experiments, SingleCapDecouplingIsExact) {
  ExperimentConfig c = default_config("decouple");
  const auto rows = run_decoupling_scan(c);
  for (const auto& row : rows)
    if (row.metric == "single_cap_ratio" || row.metric == "hessian_identity_error") {
      EXPECT_TRUE(row.pass) << row.metric;
    }
}

TEST(Experiments, RescaleWithKOneIsIdentity) {
  ExperimentConfig c = default_config("rescale");
  c.K = 1;
  c.points = 20;
  for (const auto& row : run_parabolic_rescale(c))
    if (row.metric == "max_relative_deviation") {
      EXPECT_LE(row.measured, 1e-12);
    }
}

TEST(Experiments, WholeSpaceEquidistributionIsBounded) {
  ExperimentConfig c = default_config("transequi");
  c.variety = "whole";
  c.instances = 2;
  const auto rows = run_transverse_equidistribution(c);
  EXPECT_EQ(rows.back().metric, "max_mass_ratio");
  EXPECT_TRUE(rows.back().pass);
}
