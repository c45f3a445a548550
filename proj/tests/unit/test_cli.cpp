#include <gtest/gtest.h>

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <random>
#include <regex>
#include <sstream>

#include "cli.hpp"
#include "output.hpp"

namespace C = rqmc::cli;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = C::run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::vector<std::string> row;
    std::istringstream ls(line);
    std::string field;
    while (std::getline(ls, field, ',')) row.push_back(field);
    rows.push_back(row);
  }
  return rows;
}

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / "rqmc_cli_tests";
  fs::create_directories(dir);
  return dir / name;
}

std::size_t count(const std::string& hay, const std::string& needle) {
  std::size_t n = 0;
  for (auto pos = hay.find(needle); pos != std::string::npos; pos = hay.find(needle, pos + 1)) ++n;
  return n;
}

}  // namespace

TEST(FormatDouble, SeventeenSignificantDigits) {
  EXPECT_EQ(C::format_double(0.1), "0.10000000000000001");
  EXPECT_EQ(C::format_double(1.0), "1");
  EXPECT_EQ(C::format_double(0.0), "0");
  EXPECT_EQ(C::format_double(-2.5), "-2.5");
  EXPECT_EQ(C::format_double(1.0 / 3.0), "0.33333333333333331");
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-30, 30);
  for (int i = 0; i < 2000; ++i) {
    const double v = std::exp2(u(rng)) * (i % 2 ? 1 : -1);
    const auto s = C::format_double(v);
    double back = 0;
    std::from_chars(s.data(), s.data() + s.size(), back);
    EXPECT_EQ(back, v) << s;
    EXPECT_EQ(s.find(','), std::string::npos);
  }
}

TEST(CsvWriter, HeaderRowsAndQuoting) {
  C::CsvWriter csv({"a", "b"});
  csv.add_row({"1", "x,y"});
  csv.add_row({"say \"hi\"", "2"});
  EXPECT_EQ(csv.str(), "a,b\r\n1,\"x,y\"\r\n\"say \"\"hi\"\"\",2\r\n");
  EXPECT_THROW(csv.add_row({"only one"}), std::invalid_argument);
  EXPECT_THROW(C::CsvWriter({}), std::invalid_argument);
}

TEST(Svg, RejectsEmptySeriesList) { EXPECT_THROW((void)C::render_svg({}, {}, "t"), std::invalid_argument); }

TEST(Svg, ConstantSeriesIsHorizontal) {
  const auto svg = C::render_svg({{"flat", {0, 1, 2, 3}, {0.25, 0.25, 0.25, 0.25}}}, {}, "flat");
  const std::regex poly("points=\"([^\"]*)\"");
  std::smatch m;
  ASSERT_TRUE(std::regex_search(svg, m, poly));
  std::istringstream pts(m[1].str());
  std::string pair;
  std::set<std::string> ys;
  int n = 0;
  while (pts >> pair) {
    ys.insert(pair.substr(pair.find(',') + 1));
    ++n;
  }
  EXPECT_EQ(n, 4);
  EXPECT_EQ(ys.size(), 1U);
}

TEST(Svg, FigureStyleHasThreeCurvesAndTwoDashedReferences) {
  std::vector<double> x{0, 1, 2, 3, 4};
  std::vector<C::Series> series{{"median", x, {1, 0.1, 0.01, 1e-3, 1e-4}},
                                {"plain", x, {1, 0.4, 0.15, 0.05, 0.02}},
                                {"proxy", x, {0.3, 0.12, 0.05, 0.015, 0.006}}};
  std::vector<C::Series> refs{{"ref", x, {1, 0.35, 0.125, 0.044, 0.016}}, {"ref/sqrt", x, {0.3, 0.1, 0.04, 0.013, 0.005}}};
  const auto svg = C::render_svg(series, refs, "fig");
  EXPECT_EQ(count(svg, "<polyline"), 5U);
  // Dashed legend swatches plus dashed polylines.
  EXPECT_EQ(count(svg, "stroke-dasharray"), 4U);
  EXPECT_EQ(svg.rfind("<svg", 0), 0U);
  EXPECT_EQ(svg.find("href"), std::string::npos);
  EXPECT_NE(svg.find("log2 n"), std::string::npos);
}

TEST(Svg, EmitSurfacesIoFailure) {
  EXPECT_THROW(C::emit_svg({{"a", {0}, {1}}}, {}, "t", "/nonexistent-dir/x.svg"), std::runtime_error);
}

TEST(Manifest, RoundTrip) {
  C::RunManifest m;
  m.subcommand = "converge";
  m.config = {{"bits", 32}, {"integrand", "smooth1d"}};
  m.seed = 18446744073709551615ULL;
  m.tool_version = "1.2.3";
  m.outputs = {"a.csv"};
  m.wall_seconds = 1.5;
  const auto back = C::RunManifest::from_json(nlohmann::json::parse(m.to_json().dump()));
  EXPECT_EQ(back.subcommand, m.subcommand);
  EXPECT_EQ(back.config, m.config);
  EXPECT_EQ(back.seed, m.seed);
  EXPECT_EQ(back.outputs, m.outputs);
  EXPECT_THROW(C::RunManifest::from_json(nlohmann::json{{"subcommand", "x"}, {"config", 3}}), std::invalid_argument);
}

TEST(Cli, UsageErrorsExitTwo) {
  EXPECT_EQ(run({}).code, C::kExitUsage);
  EXPECT_EQ(run({"frobnicate"}).code, C::kExitUsage);
  EXPECT_EQ(run({"converge", "--median-count", "4"}).code, C::kExitUsage);
  EXPECT_EQ(run({"converge", "--bits", "10", "--m-max", "12"}).code, C::kExitUsage);
  EXPECT_EQ(run({"converge", "--m-min", "5", "--m-max", "3"}).code, C::kExitUsage);
  EXPECT_EQ(run({"converge", "--integrand", "nope", "--m-max", "2", "--replicates", "1"}).code, C::kExitUsage);
  EXPECT_EQ(run({"converge", "--integrand", "otl6d", "--generator", "identity", "--m-max", "2"}).code, C::kExitUsage);
  EXPECT_EQ(run({"verify"}).code, C::kExitUsage);
  EXPECT_EQ(run({"verify", "sideways"}).code, C::kExitUsage);
  const auto r = run({"converge", "--median-count", "4"});
  EXPECT_NE(r.err.find("odd"), std::string::npos);
}

TEST(Cli, HelpAndVersionExitZero) {
  const auto h = run({"--help"});
  EXPECT_EQ(h.code, C::kExitOk);
  EXPECT_NE(h.out.find("converge"), std::string::npos);
  EXPECT_EQ(run({"--version"}).code, C::kExitOk);
}

TEST(Cli, ConvergeConstHasZeroRmse) {
  const auto r = run({"converge", "--integrand", "const", "--m-max", "4", "--replicates", "5"});
  ASSERT_EQ(r.code, C::kExitOk) << r.err;
  const auto rows = parse_csv(r.out);
  ASSERT_EQ(rows.size(), 6U);
  EXPECT_EQ(rows[0], (std::vector<std::string>{"m", "n", "rmse_median", "rmse_plain", "rmse_mean_proxy"}));
  for (std::size_t i = 1; i < rows.size(); ++i) {
    EXPECT_EQ(rows[i][0], std::to_string(i - 1));
    EXPECT_EQ(rows[i][1], std::to_string(1U << (i - 1)));
    EXPECT_EQ(rows[i][2], "0");
    EXPECT_EQ(rows[i][3], "0");
    EXPECT_EQ(rows[i][4], "0");
  }
}

TEST(Cli, ConvergeWritesFilesAndManifestReproducesCsv) {
  const auto prefix = scratch("smooth").string();
  const auto r = run({"converge", "--integrand", "smooth1d", "--m-max", "6", "--replicates", "20", "--median-count",
                      "5", "--out", prefix});
  ASSERT_EQ(r.code, C::kExitOk) << r.err;
  for (const char* ext : {".csv", ".svg", ".manifest.json"}) EXPECT_TRUE(fs::exists(prefix + ext)) << ext;
  const auto csv = C::read_file(prefix + ".csv");
  const auto svg = C::read_file(prefix + ".svg");
  EXPECT_EQ(count(svg, "<polyline"), 5U);

  const auto manifest = nlohmann::json::parse(C::read_file(prefix + ".manifest.json"));
  EXPECT_EQ(manifest["subcommand"], "converge");
  EXPECT_EQ(manifest["config"]["median-count"], 5);
  EXPECT_EQ(manifest["outputs"].size(), 3U);

  const auto again = scratch("smooth_again").string();
  const auto r2 = run({"converge", "--from-manifest", prefix + ".manifest.json", "--out", again, "--threads", "3"});
  ASSERT_EQ(r2.code, C::kExitOk) << r2.err;
  EXPECT_EQ(C::read_file(again + ".csv"), csv);

  EXPECT_EQ(run({"points-dump", "--from-manifest", prefix + ".manifest.json"}).code, C::kExitUsage);
}

TEST(Cli, ConvergeSmoothRmseDecreases) {
  const auto r = run({"converge", "--m-min", "2", "--m-max", "8", "--replicates", "40"});
  ASSERT_EQ(r.code, C::kExitOk) << r.err;
  const auto rows = parse_csv(r.out);
  const double first = std::stod(rows[1][3]);
  const double last = std::stod(rows.back()[3]);
  EXPECT_LT(last, first / 100);
  for (std::size_t i = 1; i < rows.size(); ++i) {
    EXPECT_NEAR(std::stod(rows[i][4]), std::stod(rows[i][3]) / std::sqrt(11.0), 1e-12 * std::stod(rows[i][3]));
  }
}

TEST(Cli, VerifyTargetsPass) {
  for (const std::vector<std::string>& args :
       {std::vector<std::string>{"verify", "partitions", "--m-max", "50"},
        std::vector<std::string>{"verify", "independence"},
        std::vector<std::string>{"verify", "decomposition", "--degree", "3", "--m", "3"},
        std::vector<std::string>{"verify", "chi"},
        std::vector<std::string>{"verify", "concentration", "--m", "8", "10", "--trials", "300"}}) {
    const auto r = run(args);
    EXPECT_EQ(r.code, C::kExitOk) << args[1] << "\n" << r.out << r.err;
    EXPECT_EQ(r.out.find("FAIL"), std::string::npos) << args[1];
    EXPECT_NE(r.out.find("checks passed"), std::string::npos);
  }
  const auto p = run({"verify", "partitions", "--m-max", "50"});
  EXPECT_EQ(count(p.out, "PASS m="), 50U);
  const auto ind = run({"verify", "independence"});
  EXPECT_EQ(count(ind.out, "P(S=1) = 1/2, P(S=S'=1) = 1/4"), 50U);
}

TEST(Cli, MindepReportsFractionBelowBound) {
  const auto r = run({"mindep", "--m", "10", "--trials", "1000"});
  ASSERT_EQ(r.code, C::kExitOk) << r.out << r.err;
  EXPECT_NE(r.out.find("threshold = 14"), std::string::npos);
  const std::regex frac("fraction = ([0-9.e-]+)");
  std::smatch m;
  ASSERT_TRUE(std::regex_search(r.out, m, frac));
  const double p = 0.4 / std::sqrt(10.0);
  EXPECT_LT(std::stod(m[1].str()), p + 3 * std::sqrt(p * (1 - p) / 1000));

  const auto zero = run({"mindep", "--m", "10", "--trials", "50", "--threshold", "0"});
  EXPECT_EQ(zero.code, C::kExitOk);
  EXPECT_NE(zero.out.find("hits = 0, fraction = 0\n"), std::string::npos);

  const auto asm3 = run({"mindep", "--m", "3", "--asm"});
  EXPECT_EQ(asm3.code, C::kExitOk);
  EXPECT_NE(asm3.out.find("ASM min dependent norm = 7 (rows {3,4})"), std::string::npos) << asm3.out;
}

TEST(Cli, PartitionsDumpTables) {
  const auto q = run({"partitions-dump", "--n-max", "10"});
  ASSERT_EQ(q.code, C::kExitOk);
  const auto rows = parse_csv(q.out);
  ASSERT_EQ(rows.size(), 12U);
  EXPECT_EQ(rows[0], (std::vector<std::string>{"N", "q_distinct", "cumulative"}));
  // Distinct partitions of 0..10: 1 1 1 2 2 3 4 5 6 8 10.
  const std::vector<int> q_expected{1, 1, 1, 2, 2, 3, 4, 5, 6, 8, 10};
  int cum = 0;
  for (int n = 0; n <= 10; ++n) {
    if (n >= 1) cum += q_expected[static_cast<std::size_t>(n)];
    EXPECT_EQ(rows[static_cast<std::size_t>(n) + 1][1], std::to_string(q_expected[static_cast<std::size_t>(n)]));
    EXPECT_EQ(rows[static_cast<std::size_t>(n) + 1][2], std::to_string(cum));
  }
  const auto lemma = run({"partitions-dump", "--table", "lemma", "--m-max", "12"});
  ASSERT_EQ(lemma.code, C::kExitOk);
  const auto lrows = parse_csv(lemma.out);
  ASSERT_EQ(lrows.size(), 13U);
  EXPECT_EQ(lrows[3][1], "1");
  EXPECT_EQ(lrows[3][2], "1");
  for (std::size_t i = 1; i < lrows.size(); ++i) EXPECT_EQ(lrows[i][4], "true");

  const auto prefix = scratch("q").string();
  ASSERT_EQ(run({"partitions-dump", "--n-max", "30", "--out", prefix}).code, C::kExitOk);
  const auto first = C::read_file(prefix + ".csv");
  fs::remove(prefix + ".csv");
  ASSERT_EQ(run({"partitions-dump", "--from-manifest", prefix + ".manifest.json", "--out", prefix}).code, C::kExitOk);
  EXPECT_EQ(C::read_file(prefix + ".csv"), first);
}

TEST(Cli, PointsDumpRawSobol) {
  const auto r = run({"points-dump", "--m", "2", "--bits", "2", "--dim", "2", "--raw"});
  ASSERT_EQ(r.code, C::kExitOk) << r.err;
  const auto rows = parse_csv(r.out);
  ASSERT_EQ(rows.size(), 5U);
  const std::vector<std::vector<std::string>> expected{
      {"0", "0", "0"}, {"1", "0.5", "0.5"}, {"2", "0.25", "0.75"}, {"3", "0.75", "0.25"}};
  for (std::size_t i = 0; i < 4; ++i) EXPECT_EQ(rows[i + 1], expected[i]);
}

TEST(Cli, PointsDumpScrambledIsANetAndDeterministic) {
  const auto a = run({"points-dump", "--m", "5", "--bits", "32", "--format", "int", "--seed", "9"});
  const auto b = run({"points-dump", "--m", "5", "--bits", "32", "--format", "int", "--seed", "9"});
  ASSERT_EQ(a.code, C::kExitOk);
  EXPECT_EQ(a.out, b.out);
  const auto rows = parse_csv(a.out);
  ASSERT_EQ(rows.size(), 33U);
  std::set<std::uint64_t> cells;
  for (std::size_t i = 1; i < rows.size(); ++i) cells.insert(std::stoull(rows[i][1]) >> 27);
  EXPECT_EQ(cells.size(), 32U);  // one point in each interval of width 2^-5
  const auto c = run({"points-dump", "--m", "5", "--bits", "32", "--format", "int", "--seed", "9", "--replicate", "1"});
  EXPECT_NE(a.out, c.out);
}

TEST(Cli, DirectionFileEnvironmentVariable) {
  const auto bad = scratch("bad_directions.txt");
  C::write_file(bad, "d s a m_i\n2 1 0 2\n");  // m_1 must be odd
  ::setenv("RQMC_SOBOL_DIRECTIONS", bad.c_str(), 1);
  const auto r = run({"points-dump", "--m", "2", "--bits", "2", "--dim", "2", "--raw"});
  ::unsetenv("RQMC_SOBOL_DIRECTIONS");
  EXPECT_NE(r.code, C::kExitOk);
  EXPECT_NE(r.err.find("bad_directions"), std::string::npos) << r.err;
  EXPECT_EQ(run({"points-dump", "--m", "2", "--bits", "2", "--dim", "2", "--raw"}).code, C::kExitOk);
}
