#include <doctest.h>

#include <unistd.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "laprmt/cli.hpp"

namespace fs = std::filesystem;

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "laprmt");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out;
  std::ostringstream err;
  const int code = laprmt::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct TempDir {
  fs::path path;
  TempDir() {
    static int counter = 0;
    path = fs::temp_directory_path() /
           ("laprmt_cli_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    fs::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
  std::string file(const std::string& name) const { return (path / name).string(); }
};

const char* const kSubcommands[] = {"esd",    "max-diag", "max-eig", "block", "ratio",
                                    "bounds", "moments",  "gen",     "replay"};

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("moments") {
  const auto r = invoke({"moments", "--k", "2"});
  CHECK(r.code == 0);
  CHECK(r.out == "m2 = 2\nm4 = 9\n");
  CHECK(invoke({"moments", "--k", "7"}).code == 2);
}

TEST_CASE("bounds without a campaign") {
  const auto r = invoke({"bounds", "--n", "100", "--eps", "1"});
  CHECK(r.code == 0);
  std::istringstream in(r.out);
  std::string key, eq;
  double upper = 0.0, lower = 0.0;
  in >> key >> eq >> upper;
  CHECK(key == "upper");
  in >> key >> eq >> lower;
  CHECK(key == "lower");
  CHECK(upper == doctest::Approx(37.169).epsilon(1e-4));
  CHECK(lower == doctest::Approx(23.528).epsilon(1e-4));
}

TEST_CASE("campaign output is byte-identical across runs and thread counts") {
  TempDir dir;
  const auto a = invoke({"max-diag", "--n", "50", "--reps", "3", "--seed", "7", "--out", dir.file("a.csv")});
  const auto b = invoke({"max-diag", "--n", "50", "--reps", "3", "--seed", "7", "--out", dir.file("b.csv"),
                         "--threads", "8"});
  REQUIRE(a.code == 0);
  REQUIRE(b.code == 0);
  CHECK(slurp(dir.file("a.csv")) == slurp(dir.file("b.csv")));
  CHECK(fs::exists(dir.file("a.manifest.json")));
  CHECK(a.out.find("replicates = 3") != std::string::npos);
}

TEST_CASE("standard output carries the CSV when --out is absent") {
  TempDir dir;
  const auto r = invoke({"max-eig", "--n", "8", "--reps", "2", "--seed", "1", "--manifest",
                         dir.file("m.json")});
  REQUIRE(r.code == 0);
  CHECK(r.out.rfind("replicate,lambda_max,max_diag,m_n,r_n,minmax_ok,upper_ok,comparison_ok,wall_ms\n", 0) == 0);
  const auto manifest = nlohmann::json::parse(slurp(dir.file("m.json")));
  CHECK(manifest["schema"] == "laprmt.manifest/1");
  CHECK(manifest["config"]["n"] == 8);
}

TEST_CASE("every campaign kind writes a replayable manifest") {
  TempDir dir;
  const std::vector<std::vector<std::string>> runs = {
      {"esd", "--n", "20", "--reps", "2"},
      {"max-diag", "--n", "20", "--reps", "5"},
      {"max-eig", "--n", "20", "--reps", "3", "--dist", "rademacher"},
      {"block", "--n", "20", "--reps", "3", "--k", "2"},
      {"ratio", "--n", "20", "--reps", "3", "--dist", "uniform"},
      {"bounds", "--n", "20", "--reps", "3", "--eps", "0.5", "--K", "1.5", "--c", "2"},
  };
  for (std::size_t i = 0; i < runs.size(); ++i) {
    auto args = runs[i];
    const std::string csv = dir.file("run" + std::to_string(i) + ".csv");
    args.insert(args.end(), {"--seed", "11", "--out", csv});
    const auto r = invoke(args);
    REQUIRE_MESSAGE(r.code == 0, r.err);
    const std::string manifest = dir.file("run" + std::to_string(i) + ".manifest.json");
    const auto rep = invoke({"replay", "--manifest", manifest, "--threads", "3"});
    CHECK_MESSAGE(rep.code == 0, rep.err);
    CHECK(rep.out.find("records_file = match") != std::string::npos);
    CHECK(rep.out.find("replay = ok") != std::string::npos);
  }
}

TEST_CASE("replay rejects a tampered manifest") {
  TempDir dir;
  REQUIRE(invoke({"max-diag", "--n", "30", "--reps", "4", "--seed", "3", "--out", dir.file("r.csv")}).code == 0);
  auto manifest = nlohmann::json::parse(slurp(dir.file("r.manifest.json")));
  manifest["config"]["seed"] = 4;
  std::ofstream(dir.file("t.manifest.json")) << manifest.dump(2);
  const auto r = invoke({"replay", "--manifest", dir.file("t.manifest.json")});
  CHECK(r.code == 1);
  CHECK(r.err.find("error:") == 0);

  manifest = nlohmann::json::parse(slurp(dir.file("r.manifest.json")));
  manifest["version"] = "0.9.0";
  std::ofstream(dir.file("v.manifest.json")) << manifest.dump(2);
  CHECK(invoke({"replay", "--manifest", dir.file("v.manifest.json")}).code == 1);
  CHECK(invoke({"replay", "--manifest", dir.file("missing.json")}).code == 1);
}

TEST_CASE("gen prints a deterministic Laplacian") {
  const auto a = invoke({"gen", "--n", "4", "--seed", "9"});
  const auto b = invoke({"gen", "--n", "4", "--seed", "9"});
  REQUIRE(a.code == 0);
  CHECK(a.out == b.out);
  std::istringstream in(a.out);
  std::string line;
  int rows = 0;
  while (std::getline(in, line)) ++rows;
  CHECK(rows == 4);
  CHECK(invoke({"gen", "--n", "4", "--seed", "10"}).out != a.out);
}

TEST_CASE("usage errors exit with 2 and a one-line diagnostic") {
  const std::vector<std::vector<std::string>> bad = {
      {},
      {"frobnicate"},
      {"max-diag", "--n", "50"},
      {"max-diag", "--n", "50", "--reps", "3", "--bogus"},
      {"max-diag", "--n", "50", "--reps", "3", "--dist", "cauchy"},
      {"max-diag", "--n", "2", "--reps", "3"},
      {"block", "--n", "10", "--reps", "3", "--k", "3"},
      {"max-eig", "--n", "10", "--reps", "0"},
      {"moments"},
      {"bounds", "--n", "100", "--eps", "-1"},
      {"esd", "--n", "10", "--reps", "2", "--scale", "log"},
  };
  for (const auto& args : bad) {
    const auto r = invoke(args);
    CHECK(r.code == 2);
    CHECK(r.out.empty());
    CHECK(r.err.rfind("error: ", 0) == 0);
    CHECK(std::count(r.err.begin(), r.err.end(), '\n') == 1);
  }
}

TEST_CASE("help lists every flag and matches the golden file") {
  std::string all;
  for (const std::vector<std::string>& args :
       std::vector<std::vector<std::string>>{{"--help"}}) {
    const auto r = invoke(args);
    CHECK(r.code == 0);
    all += r.out;
  }
  for (const char* sub : kSubcommands) {
    const auto r = invoke({sub, "--help"});
    CHECK(r.code == 0);
    all += "\n" + r.out;
  }
  for (const char* flag : {"--n", "--reps", "--seed", "--dist", "--k", "--eps", "--sigma", "--K",
                           "--c", "--threads", "--out", "--manifest", "--bins", "--scale",
                           "--timing"}) {
    CHECK_MESSAGE(all.find(std::string(flag) + " ") != std::string::npos, flag);
  }
  const std::string golden = slurp(fs::path(LAPRMT_GOLDEN_DIR) / "help.txt");
  CHECK(all == golden);
}

}  // TEST_SUITE
