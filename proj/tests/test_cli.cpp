#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "stcurves/cli.hpp"

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  int status;
  std::string out;
  std::string err;
};

Outcome run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int status = stcurves::cli::main(args, out, err);
  return {status, out.str(), err.str()};
}

std::string golden(const std::string& name) {
  std::ifstream in(fs::path(STCURVES_GOLDEN_DIR) / name, std::ios::binary);
  REQUIRE(in);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("golden outputs") {
  CHECK(run({"count", "--l", "5", "--q", "7"}).out == golden("count_l5_q7.json"));
  CHECK(run({"moments", "theory", "--l", "5", "--nmax", "8"}).out ==
        golden("theory_l5.json"));
  CHECK(run({"group", "--l", "5", "--n", "2"}).out == golden("group_l5_n2.json"));
}

TEST_CASE("count") {
  const auto r = run({"count", "--l", "5", "--q", "7"});
  CHECK(r.status == 0);
  CHECK(r.out == "{\"l\":5,\"q\":7,\"count\":8,\"method\":\"lemma_congruence\",\"a1\":0}\n");
  const auto j = json::parse(run({"count", "--l", "3", "--q", "19", "--method", "naive"}).out);
  CHECK(j["count"] == 14);
  CHECK(j["method"] == "naive");
  CHECK(json::parse(run({"count", "--l", "5", "--q", "101"}).out)["method"] == "jacobi_trace");
}

TEST_CASE("theory moments") {
  const auto j = json::parse(run({"moments", "theory", "--l", "5", "--nmax", "8"}).out);
  CHECK(j["moments"]["2"] == "1");
  CHECK(j["moments"]["4"] == "57");
  CHECK(j["moments"]["6"] == "5140");
  CHECK(j["moments"]["8"] == "615545");
  CHECK(j["moments"]["3"] == "0");
}

TEST_CASE("group report") {
  const auto j = json::parse(run({"group", "--l", "5", "--n", "2"}).out);
  CHECK(j["alpha_exponents"] == json({24, 18, 12, 6, 23, 17, 11, 22, 16, 21}));
  CHECK(j["is_symplectic"] == true);
  CHECK(j["conjugation_matches_galois"] == true);
  CHECK(j["component_order"] == 20);
  CHECK(j["gamma_blocks"].size() == 10);
  const auto d = json::parse(run({"group", "--l", "7"}).out);
  CHECK(d["n"] == 3);
  CHECK(d["component_order"] == 42);
}

TEST_CASE("numeric moments and scan") {
  const auto j = json::parse(run({"moments", "numeric", "--l", "5", "--bound", "100"}).out);
  CHECK(j["primes"] == 24);
  CHECK(j["moments"]["2"] == 0.0);
  const auto s = run({"scan", "--l", "5", "--bound", "30"});
  CHECK(s.out == "l,p,count\n5,2,3\n5,3,4\n5,7,8\n5,11,12\n5,13,14\n5,17,18\n5,19,20\n"
                 "5,23,24\n5,29,30\n");
}

TEST_CASE("monte carlo is deterministic") {
  const std::vector<std::string> args{"moments", "mc", "--l", "3", "--samples", "5000",
                                      "--seed", "17", "--kmax", "2", "--nmax", "4"};
  const auto a = run(args);
  CHECK(a.status == 0);
  CHECK(a.out == run(args).out);
  const auto j = json::parse(a.out);
  CHECK(j["coefficients"].size() == 2);
  CHECK(j["diagnostics"]["nontrivial_nonzero_a1"] == 0);
}

TEST_CASE("histogram output") {
  const auto dir = fs::temp_directory_path() / "stcurves_cli_tests";
  fs::create_directories(dir);
  const auto svg = dir / "h.svg";
  fs::remove(svg);
  CHECK(run({"hist", "--l", "5", "--bound", "5000", "--filter", "res1", "--out", svg.string()})
            .status == 0);
  CHECK(fs::exists(svg));
  const auto csv = run({"hist", "--l", "5", "--bound", "100", "--bins", "3"});
  CHECK(csv.out == "bin_lo,bin_hi,count\n-20,-6.66666666667,0\n-6.66666666667,6.66666666667,24\n"
                   "6.66666666667,20,0\n");
}

TEST_CASE("errors are one JSON line on stderr") {
  for (const auto& args : std::vector<std::vector<std::string>>{
           {"count", "--l", "4", "--q", "7"},
           {"count", "--l", "5", "--q", "5"},
           {"count", "--l", "5"},
           {"bogus"},
           {"moments", "mc", "--l", "5", "--samples", "0"}}) {
    const auto r = run(args);
    CHECK(r.status != 0);
    CHECK(r.out.empty());
    REQUIRE(!r.err.empty());
    CHECK(r.err.back() == '\n');
    CHECK(r.err.find('\n') == r.err.size() - 1);
    CHECK(json::parse(r.err).contains("error"));
  }
}

TEST_CASE("cache directory from the environment") {
  const auto dir = fs::temp_directory_path() / "stcurves_cli_cache";
  fs::remove_all(dir);
  fs::create_directories(dir);
  ::setenv(stcurves::cli::kCacheDirEnv, dir.c_str(), 1);
  CHECK(run({"scan", "--l", "5", "--bound", "200"}).status == 0);
  ::unsetenv(stcurves::cli::kCacheDirEnv);
  CHECK(fs::exists(dir / "l5.csv"));
}
