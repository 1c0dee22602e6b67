#include <cstdlib>
#include <unistd.h>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "ptmc/cli.hpp"
#include "ptmc/paths.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = ptmc::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

class TempDir {
 public:
  TempDir() {
    static int counter = 0;
    path_ = fs::temp_directory_path() /
            ("ptmc_cli_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    fs::remove_all(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  fs::path operator/(const std::string& name) const { return path_ / name; }
  std::string str() const { return path_.string(); }

 private:
  fs::path path_;
};

}  // namespace

TEST(Cli, HelpAndUsage) {
  EXPECT_EQ(cli({"--help"}).code, 0);
  EXPECT_EQ(cli({}).code, ptmc::cli::kUsage);
  EXPECT_EQ(cli({"frobnicate"}).code, ptmc::cli::kUsage);
}

TEST(Convert, Examples) {
  auto r = cli({"convert", "UD", ""});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "(()())\n()\n");
  r = cli({"convert", "(()())", "--profile"});
  EXPECT_EQ(r.out, "UD\t2\t0\t1\n");
  r = cli({"convert", "--to", "tree", "I", "--format", "json", "--adjacency"});
  ASSERT_EQ(r.code, 0);
  const auto doc = json::parse(r.out);
  EXPECT_EQ(doc[0]["output"], "(())");
  EXPECT_EQ(doc[0]["adjacency"], json::parse("[[1],[2],[]]"));
}

TEST(Convert, PerLineDiagnostics) {
  const auto r = cli({"convert", "UD", "UX", "(()", "DU"});
  EXPECT_EQ(r.code, ptmc::cli::kValidation);
  EXPECT_EQ(r.out, "(()())\n");
  EXPECT_NE(r.err.find("line 2"), std::string::npos);
  EXPECT_NE(r.err.find("line 3"), std::string::npos);
  EXPECT_NE(r.err.find("line 4"), std::string::npos);
  EXPECT_EQ(cli({"convert", "--to", "path", ""}).code, ptmc::cli::kValidation);
}

TEST(Convert, RoundTripFileOfAllLengthFivePaths) {
  TempDir dir;
  fs::create_directories(dir / "");
  {
    std::ofstream f(dir / "paths.txt");
    ptmc::write_paths(f, ptmc::enumerate_paths(5));
  }
  ASSERT_EQ(cli({"convert", "--input", (dir / "paths.txt").string(), "--out", (dir / "trees").string()}).code, 0);
  ASSERT_EQ(cli({"convert", "--input", (dir / "trees" / "converted.txt").string(), "--out",
                 (dir / "back").string()})
                .code,
            0);
  EXPECT_EQ(slurp(dir / "back" / "converted.txt"), slurp(dir / "paths.txt"));
}

TEST(Exact, PiUniformAtLengthTwo) {
  const auto r = cli({"exact", "pi", "--m", "2", "--alpha", "0", "--beta", "0"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto doc = json::parse(r.out);
  ASSERT_EQ(doc["pi"].size(), 5u);
  for (const auto& p : doc["pi"]) EXPECT_NEAR(p.get<double>(), 0.2, 1e-15);
  EXPECT_EQ(doc["m"], 2);
  EXPECT_TRUE(doc.contains("state_order_hash"));
  EXPECT_LE(doc["residual"].get<double>(), 1e-12);
}

TEST(Exact, GapInRange) {
  for (const char* method : {"auto", "dense", "power"}) {
    const auto r = cli({"exact", "gap", "--m", "4", "--alpha", "0", "--beta", "0", "--method", method});
    ASSERT_EQ(r.code, 0) << r.err;
    const double gap = json::parse(r.out)["gap"];
    EXPECT_GT(gap, 0.0);
    EXPECT_LE(gap, 0.5);
  }
}

TEST(Exact, TvCurveNonincreasing) {
  const auto r = cli({"exact", "tv-curve", "--m", "3", "--from", "HHH", "--horizon", "300",
                      "--format", "csv"});
  ASSERT_EQ(r.code, 0) << r.err;
  std::istringstream in(r.out);
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "t,tv");
  double prev = 2.0;
  int rows = 0;
  while (std::getline(in, line)) {
    const double tv = std::stod(line.substr(line.find(',') + 1));
    EXPECT_LE(tv, prev + 1e-12);
    prev = tv;
    ++rows;
  }
  EXPECT_EQ(rows, 301);
}

TEST(Exact, Errors) {
  EXPECT_EQ(cli({"exact", "pi", "--m", "11"}).code, ptmc::cli::kCapacity);
  EXPECT_EQ(cli({"exact", "pi", "--m", "0"}).code, ptmc::cli::kValidation);
  EXPECT_EQ(cli({"exact", "tv-curve", "--m", "3", "--from", "HH"}).code, ptmc::cli::kValidation);
  EXPECT_EQ(cli({"exact", "tv-curve", "--m", "3", "--from", "HDU"}).code, ptmc::cli::kValidation);
  EXPECT_EQ(cli({"exact", "gap", "--m", "3", "--params", "nope"}).code, ptmc::cli::kValidation);
  EXPECT_EQ(cli({"exact", "gap", "--m", "3", "--method", "lanczos"}).code, ptmc::cli::kUsage);
  EXPECT_EQ(cli({"exact"}).code, ptmc::cli::kUsage);
}

TEST(Sample, ZeroStepsEmitsInitialStateOnly) {
  const auto r = cli({"sample", "--n", "5", "--params", "turner04-cg", "--steps", "0"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out, "step,path,energy,d0,d1,r\n0,HHHH,-14.000000000000004,5,0,5\n");
}

TEST(Sample, FlagValidation) {
  using ptmc::cli::kUsage;
  using ptmc::cli::kValidation;
  EXPECT_EQ(cli({"sample", "--n", "5"}).code, kUsage);
  EXPECT_EQ(cli({"sample", "--n", "5", "--alpha", "1"}).code, kUsage);
  EXPECT_EQ(cli({"sample", "--n", "5", "--alpha", "1", "--beta", "0", "--params", "turner04-cg"}).code,
            kUsage);
  EXPECT_EQ(cli({"sample", "--n", "1", "--alpha", "0", "--beta", "0"}).code, kValidation);
  EXPECT_EQ(cli({"sample", "--n", "5", "--alpha", "0", "--beta", "0", "--steps", "1.5"}).code, kUsage);
  EXPECT_EQ(cli({"sample", "--n", "5", "--alpha", "0", "--beta", "0", "--steps", "-3"}).code, kUsage);
  EXPECT_EQ(cli({"sample", "--n", "5", "--alpha", "0", "--beta", "0", "--thin", "0"}).code, kValidation);
  EXPECT_EQ(cli({"sample", "--n", "5", "--alpha", "0", "--beta", "0", "--burn-in", "9", "--steps", "3"}).code,
            kValidation);
  EXPECT_EQ(cli({"sample", "--n", "5", "--alpha", "0", "--beta", "0", "--chains", "2"}).code, kUsage);
  EXPECT_EQ(cli({"sample", "--n", "5", "--alpha", "0", "--beta", "0", "--init", "UDH"}).code, kValidation);
  EXPECT_EQ(cli({"sample", "--n", "5", "--alpha", "0", "--beta", "0", "--format", "xml"}).code, kUsage);
}

TEST(Sample, ScientificStepsAndFormats) {
  const auto r = cli({"sample", "--n", "4", "--alpha", "0", "--beta", "0", "--steps", "2e1",
                      "--format", "jsonl"});
  ASSERT_EQ(r.code, 0) << r.err;
  std::istringstream in(r.out);
  std::string line;
  int rows = 0;
  while (std::getline(in, line)) {
    const auto rec = json::parse(line);
    EXPECT_EQ(rec["step"], rows);
    EXPECT_EQ(rec["path"].get<std::string>().size(), 3u);
    ++rows;
  }
  EXPECT_EQ(rows, 21);
  const auto j = cli({"sample", "--n", "4", "--alpha", "0", "--beta", "0", "--steps", "5", "--format", "json"});
  EXPECT_EQ(json::parse(j.out).size(), 6u);
}

TEST(Sample, DeterministicAcrossRuns) {
  TempDir a, b;
  const std::vector<std::string> flags{"sample", "--n", "8", "--params", "turner99-gc", "--steps",
                                       "20000", "--thin", "7", "--seed", "42"};
  auto with = [&](const TempDir& d) {
    auto args = flags;
    args.insert(args.end(), {"--out", d.str()});
    return cli(args);
  };
  ASSERT_EQ(with(a).code, 0);
  ASSERT_EQ(with(b).code, 0);
  EXPECT_EQ(slurp(a / "samples.csv"), slurp(b / "samples.csv"));
  EXPECT_EQ(slurp(a / "summary.json"), slurp(b / "summary.json"));
  EXPECT_TRUE(fs::exists(a / "manifest.json"));
}

TEST(Sample, ParallelChainsMatchSingleStreams) {
  TempDir one, many;
  const std::vector<std::string> flags{"sample", "--n", "6", "--alpha", "0.5", "--beta", "-0.5",
                                       "--steps", "5000", "--seed", "9"};
  auto args = flags;
  args.insert(args.end(), {"--out", one.str()});
  ASSERT_EQ(cli(args).code, 0);
  args = flags;
  args.insert(args.end(), {"--chains", "3", "--out", many.str()});
  ASSERT_EQ(cli(args).code, 0);
  EXPECT_EQ(slurp(one / "samples.csv"), slurp(many / "samples-0.csv"));
  EXPECT_NE(slurp(many / "samples-0.csv"), slurp(many / "samples-1.csv"));
  const auto summary = json::parse(slurp(many / "summary.json"));
  EXPECT_EQ(summary["samples"], 3 * 5001);
  EXPECT_EQ(summary["per_chain"].size(), 3u);
}

TEST(Sample, SummaryAgainstExactDistribution) {
  TempDir d;
  ASSERT_EQ(cli({"sample", "--n", "4", "--alpha", "0", "--beta", "0", "--steps", "200000", "--seed",
                 "3", "--out", d.str()})
                .code,
            0);
  const auto s = json::parse(slurp(d / "summary.json"));
  EXPECT_EQ(s["exact"]["states"], 14);
  EXPECT_LT(s["exact"]["tv"].get<double>(), 0.03);
  EXPECT_LT(std::abs(s["exact"]["mean_d0_z"].get<double>()), 4.0);
  std::uint64_t total = 0;
  for (const auto& bin : s["histograms"]["d0"]) total += bin[1].get<std::uint64_t>();
  EXPECT_EQ(total, s["samples"].get<std::uint64_t>());
}

TEST(Decompose, Examples) {
  auto r = cli({"decompose", "report", "--m", "4", "--alpha", "1", "--beta", "-1"});
  ASSERT_EQ(r.code, 0) << r.err;
  auto doc = json::parse(r.out);
  EXPECT_TRUE(doc["all_pass"].get<bool>());
  EXPECT_FALSE(doc.contains("kqs_table"));
  r = cli({"decompose", "report", "--m", "4", "--level", "kqs"});
  ASSERT_EQ(r.code, 0) << r.err;
  doc = json::parse(r.out);
  ASSERT_TRUE(doc.contains("kqs_table"));
  for (const auto& cell : doc["kqs_table"]) EXPECT_TRUE(cell["sizes_match"].get<bool>());
  EXPECT_EQ(cli({"decompose", "report", "--m", "4", "--level", "q"}).code, ptmc::cli::kUsage);
  EXPECT_EQ(cli({"decompose", "report", "--m", "8"}).code, ptmc::cli::kCapacity);
  r = cli({"decompose", "report", "--m", "3", "--format", "csv"});
  EXPECT_EQ(r.out.substr(0, r.out.find('\n')), "k,q,s,size,mass,gap");
}

TEST(Manifest, ReplayReproducesDataFiles) {
  TempDir first, second;
  const std::vector<std::vector<std::string>> commands{
      {"sample", "--n", "6", "--params", "turner89-cg", "--steps", "3000", "--seed", "5"},
      {"exact", "gap", "--m", "5", "--method", "power", "--seed", "2"},
      {"decompose", "report", "--m", "4", "--level", "kq"},
      {"convert", "UHD", "II", "--profile", "--format", "csv"}};
  for (auto args : commands) {
    TempDir a, b;
    args.insert(args.end(), {"--out", a.str()});
    ASSERT_EQ(cli(args).code, 0) << args[0];
    const auto manifest = json::parse(slurp(a / "manifest.json"));
    EXPECT_EQ(manifest["version"], ptmc::cli::kVersion);
    ASSERT_EQ(cli({"replay", (a / "manifest.json").string(), "--out", b.str()}).code, 0);
    for (const auto& name : manifest["outputs"]) {
      EXPECT_EQ(slurp(a / name.get<std::string>()), slurp(b / name.get<std::string>())) << name;
    }
  }
  EXPECT_EQ(cli({"replay", (first / "missing.json").string()}).code, ptmc::cli::kValidation);
}

TEST(Manifest, EnvironmentDefaultOutputDirectory) {
  TempDir d;
  ::setenv(ptmc::cli::kOutputDirEnv, d.str().c_str(), 1);
  const auto r = cli({"exact", "pi", "--m", "3"});
  ::unsetenv(ptmc::cli::kOutputDirEnv);
  ASSERT_EQ(r.code, 0);
  EXPECT_TRUE(r.out.empty());
  EXPECT_TRUE(fs::exists(d / "pi.json"));
  EXPECT_TRUE(fs::exists(d / "manifest.json"));
}
