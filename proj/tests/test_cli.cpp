#include <gtest/gtest.h>

#include <httplib.h>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

#include "copent/assoc.hpp"
#include "copent/rng.hpp"
#include "copent/synth.hpp"
#include "copent_cli/cli.hpp"
#include "copent_cli/fetch.hpp"
#include "json.hpp"

namespace fs = std::filesystem;
using namespace copent;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "copent");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

void spit(const fs::path& p, const std::string& text) {
  std::ofstream f(p, std::ios::binary);
  f << text;
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("copent_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  // X ~ N(0,1), X^3, Z independent; 2000 rows.
  std::string cube_csv() const {
    SplitMix64 rng(5);
    std::vector<double> x(2000), x3(2000), z(2000);
    for (std::size_t i = 0; i < x.size(); ++i) {
      x[i] = normal_quantile(rng.uniform_open());
      x3[i] = x[i] * x[i] * x[i];
      z[i] = normal_quantile(rng.uniform_open());
    }
    const std::string p = path("cube.csv");
    save_csv(Dataset({{"X", x, {}}, {"X3", x3, {}}, {"Z", z, {}}}), p);
    return p;
  }

  fs::path dir_;
};

}  // namespace

TEST_F(CliTest, AssocThenGroupsFindsCubePair) {
  const auto in = cube_csv();
  auto r = run_cli({"assoc", "--input", in, "--measure", "ce", "--k", "3", "--output", path("m.csv")});
  ASSERT_EQ(r.code, 0) << r.err;
  r = run_cli({"groups", "--matrix", path("m.csv"), "--threshold", "0.5", "--output", path("g.json")});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = nlohmann::json::parse(slurp(path("g.json")));
  ASSERT_EQ(j.at("groups").size(), 1u);
  EXPECT_EQ(j["groups"][0]["indices"], nlohmann::json::array({1, 2}));
  EXPECT_EQ(j["groups"][0]["names"], nlohmann::json::array({"X", "X3"}));
}

TEST_F(CliTest, PearsonHeatmapHasOneCellPerEntry) {
  const auto in = cube_csv();
  ASSERT_EQ(run_cli({"assoc", "--input", in, "--measure", "pearson", "--output", path("m.csv")}).code, 0);
  const auto r = run_cli({"heatmap", "--matrix", path("m.csv"), "--measure", "pearson", "--out", path("h.svg")});
  ASSERT_EQ(r.code, 0) << r.err;
  const std::string svg = slurp(path("h.svg"));
  std::size_t cells = 0, rects = 0;
  for (auto pos = svg.find("class=\"cell\""); pos != std::string::npos; pos = svg.find("class=\"cell\"", pos + 1))
    ++cells;
  for (auto pos = svg.find("<rect"); pos != std::string::npos; pos = svg.find("<rect", pos + 1)) ++rects;
  EXPECT_EQ(cells, 9u);
  EXPECT_EQ(rects, 9u);
  EXPECT_NE(svg.find(">X3<"), std::string::npos);
  EXPECT_NE(svg.find("#d9d9d9"), std::string::npos);
}

TEST_F(CliTest, KTooLargeIsUsageError) {
  const auto in = cube_csv();
  const auto r = run_cli({"assoc", "--input", in, "--measure", "ce", "--k", "5000"});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("k must be < number of rows"), std::string::npos);
}

TEST_F(CliTest, ExitCodeMapping) {
  const auto in = cube_csv();
  EXPECT_EQ(run_cli({"assoc", "--input", in, "--measure", "pearson", "--k", "3"}).code, 1);
  EXPECT_EQ(run_cli({"assoc", "--input", in, "--measure", "mic"}).code, 1);
  EXPECT_EQ(run_cli({"assoc", "--bogus"}).code, 1);
  EXPECT_EQ(run_cli({}).code, 1);
  EXPECT_EQ(run_cli({"--help"}).code, 0);
  EXPECT_EQ(run_cli({"assoc", "--input", path("missing.csv")}).code, 2);
  EXPECT_EQ(run_cli({"convert", "--xpt", in}).code, 2);
  EXPECT_EQ(run_cli({"assoc", "--input", in, "--columns", "NOPE"}).code, 2);
  spit(path("bad.csv"), "a,b\n1,x\n");
  const auto r = run_cli({"assoc", "--input", path("bad.csv"), "--measure", "pearson"});
  EXPECT_EQ(r.code, 2);
  EXPECT_EQ(std::count(r.err.begin(), r.err.end(), '\n'), 1);
}

TEST_F(CliTest, RerunsAreByteIdentical) {
  const auto in = cube_csv();
  for (const char* tag : {"a", "b"}) {
    const std::string t(tag);
    ASSERT_EQ(run_cli({"assoc", "--input", in, "--output", path("m" + t + ".csv"), "--jobs", t == "a" ? "1" : "3"}).code,
              0);
    ASSERT_EQ(run_cli({"assoc", "--input", in, "--json", "--output", path("m" + t + ".json")}).code, 0);
    ASSERT_EQ(run_cli({"groups", "--matrix", path("m" + t + ".csv"), "--output", path("g" + t + ".json")}).code, 0);
    ASSERT_EQ(run_cli({"heatmap", "--matrix", path("m" + t + ".csv"), "--out", path("h" + t + ".svg")}).code, 0);
  }
  for (const char* f : {"m%.csv", "m%.json", "g%.json", "h%.svg"}) {
    std::string a(f), b(f);
    a.replace(a.find('%'), 1, "a");
    b.replace(b.find('%'), 1, "b");
    EXPECT_EQ(slurp(path(a)), slurp(path(b))) << f;
  }
}

TEST_F(CliTest, ColumnSelectionCommutes) {
  const auto ds = synth::generate({synth::Blocks{{2, 2, 2}, 0.5, 0.1}, 300, 4});
  save_csv(ds, path("full.csv"));
  const std::vector<std::string> keep{"G1_2", "G2_1", "G2_2", "G3_1"};
  save_csv(select_columns(ds, keep), path("part.csv"));
  ASSERT_EQ(run_cli({"assoc", "--input", path("full.csv"), "--columns", "2-4,G3_1", "--output", path("a.csv")}).code,
            0);
  ASSERT_EQ(run_cli({"assoc", "--input", path("part.csv"), "--output", path("b.csv")}).code, 0);
  EXPECT_EQ(slurp(path("a.csv")), slurp(path("b.csv")));
}

TEST_F(CliTest, ImputeMeanAfterSelection) {
  spit(path("gaps.csv"), "a,b,c\n1,2,\n2,,1\n3,5,2\n4,3,3\n5,7,\n");
  EXPECT_EQ(run_cli({"assoc", "--input", path("gaps.csv"), "--measure", "pearson", "--impute", "none"}).code, 2);
  const auto r = run_cli({"assoc", "--input", path("gaps.csv"), "--measure", "pearson", "--columns", "a,b"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto m = parse_matrix_csv(r.out, Measure::pearson);
  const std::vector<double> b{2, 4.25, 5, 3, 7};
  EXPECT_DOUBLE_EQ(m.at(0, 1), pearson_r(std::vector<double>{1, 2, 3, 4, 5}, b).value);
  const auto d = run_cli({"assoc", "--input", path("gaps.csv"), "--measure", "pearson", "--impute", "drop_rows"});
  ASSERT_EQ(d.code, 0) << d.err;
}

TEST_F(CliTest, ConstantColumnWarnsOnStderr) {
  spit(path("const.csv"), "a,b,c\n1,2,7\n2,1,7\n3,5,7\n4,3,7\n");
  const auto r = run_cli({"assoc", "--input", path("const.csv"), "--measure", "kendall"});
  ASSERT_EQ(r.code, 0);
  EXPECT_NE(r.err.find("warning"), std::string::npos);
  EXPECT_NE(r.out.find("NA"), std::string::npos);
}

TEST_F(CliTest, ConvertGoldenXpt) {
  const std::string dir = COPENT_TEST_DATA_DIR;
  const auto r = run_cli({"convert", "--xpt", dir + "/golden_pair.xpt", "--out", path("pair.csv")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(load_csv(path("pair.csv")), load_csv(dir + "/golden_pair.csv"));
}

TEST_F(CliTest, SynthPassthrough) {
  const std::string spec = R"({"kind":"gaussian_pair","rho":0.5,"n_rows":50,"seed":3})";
  const auto r = run_cli({"synth", "--spec", spec, "--out", path("s.csv")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(load_csv(path("s.csv")), synth::generate(synth::parse_spec(spec)));
  EXPECT_EQ(run_cli({"synth", "--spec", R"({"kind":"nope"})"}).code, 1);
}

TEST_F(CliTest, JsonMatrixFeedsGroupsAndHeatmap) {
  const auto in = cube_csv();
  ASSERT_EQ(run_cli({"assoc", "--input", in, "--format", "json", "--output", path("m.json")}).code, 0);
  const auto g = run_cli({"groups", "--matrix", path("m.json")});
  ASSERT_EQ(g.code, 0) << g.err;
  EXPECT_EQ(nlohmann::json::parse(g.out).at("measure"), "ce");
  EXPECT_EQ(run_cli({"heatmap", "--matrix", path("m.json"), "--clamp-nonneg", "--no-mask-diagonal"}).code, 0);
}

class FetchTest : public CliTest {
 protected:
  void SetUp() override {
    CliTest::SetUp();
    server_.Get("/files/a.xpt", [](const httplib::Request&, httplib::Response& res) {
      res.set_content("AAAA-content", "application/octet-stream");
    });
    server_.Get("/files/b.xpt", [](const httplib::Request&, httplib::Response& res) {
      res.set_content("BB", "application/octet-stream");
    });
    port_ = server_.bind_to_any_port("127.0.0.1");
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }
  void TearDown() override {
    server_.stop();
    thread_.join();
    CliTest::TearDown();
  }
  std::string url(const std::string& name) const {
    return "http://127.0.0.1:" + std::to_string(port_) + "/files/" + name;
  }

  httplib::Server server_;
  int port_ = 0;
  std::thread thread_;
};

TEST_F(FetchTest, DownloadsSkipsAndRecordsFailures) {
  const auto dest = dir_ / "dl";
  auto res = cli::fetch_files({url("a.xpt"), url("missing.xpt"), url("b.xpt")}, dest, 2);
  ASSERT_EQ(res.size(), 3u);
  EXPECT_EQ(res[0].status, cli::FetchResult::Status::downloaded);
  EXPECT_EQ(res[1].status, cli::FetchResult::Status::failed);
  EXPECT_NE(res[1].error.find("404"), std::string::npos);
  EXPECT_EQ(res[2].status, cli::FetchResult::Status::downloaded);
  EXPECT_EQ(slurp(dest / "a.xpt"), "AAAA-content");
  EXPECT_FALSE(fs::exists(dest / "missing.xpt"));
  EXPECT_FALSE(fs::exists(dest / "missing.xpt.part"));

  res = cli::fetch_files({url("a.xpt")}, dest, 1);
  EXPECT_EQ(res[0].status, cli::FetchResult::Status::skipped);
  spit(dest / "b.xpt", "truncated");
  res = cli::fetch_files({url("b.xpt")}, dest, 1);
  EXPECT_EQ(res[0].status, cli::FetchResult::Status::downloaded);
  EXPECT_EQ(slurp(dest / "b.xpt"), "BB");
  EXPECT_TRUE(cli::fetch_files({}, dest).empty());
}

TEST_F(FetchTest, CliExitCodes) {
  spit(path("ok.txt"), "# comment\n" + url("a.xpt") + "\n\n");
  auto r = run_cli({"fetch", "--manifest", path("ok.txt"), "--dest", path("dl")});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("downloaded"), std::string::npos);
  spit(path("bad.txt"), url("nope.xpt") + "\n");
  r = run_cli({"fetch", "--manifest", path("bad.txt"), "--dest", path("dl")});
  EXPECT_EQ(r.code, 2);
  spit(path("empty.txt"), "");
  EXPECT_EQ(run_cli({"fetch", "--manifest", path("empty.txt"), "--dest", path("dl")}).code, 0);
}
