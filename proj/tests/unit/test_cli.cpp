#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "ngls_cli/run.hpp"

using nlohmann::json;

namespace {

class TempConfig {
 public:
  explicit TempConfig(const std::string& text) {
    path_ = (std::filesystem::temp_directory_path() /
             ("ngls_test_" + std::to_string(counter_++) + ".json"))
                .string();
    std::ofstream out(path_);
    out << text;
  }
  ~TempConfig() { std::remove(path_.c_str()); }
  const std::string& path() const { return path_; }

 private:
  static inline int counter_ = 0;
  std::string path_;
};

struct RunResult {
  int code = 0;
  std::string out;
  std::string err;
};

RunResult run_cli(const std::vector<std::string>& args) {
  std::ostringstream out;
  std::ostringstream err;
  const int code = ngls::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

const char* kLuroth = R"({"symbols": [{"id": "L", "kind": "luroth"}]})";
const char* kBinary =
    R"({"symbols": [{"id": "B", "kind": "finite", "lengths": ["1/2", "1/2"]}]})";

}  // namespace

TEST_CASE("version and help exit cleanly") {
  CHECK(run_cli({"--version"}).code == 0);
  CHECK(run_cli({"--help"}).code == 0);
  CHECK(run_cli({"dim", "--help"}).code == 0);
}

TEST_CASE("a missing subcommand is a usage error") {
  CHECK(run_cli({}).code == 2);
  CHECK(run_cli({"frobnicate"}).code == 2);
}

TEST_CASE("dim emits a json report with the resolved config") {
  const TempConfig cfg(kLuroth);
  const RunResult r =
      run_cli({"dim", "--config", cfg.path(), "--alpha", "geometric:1/2"});
  REQUIRE(r.code == 0);
  const json doc = json::parse(r.out);
  CHECK(doc["command"] == "dim");
  CHECK(doc["config"]["alpha"] == "geometric:1/2");
  CHECK(doc["config"]["omega"] == "periodic:L");
  CHECK(doc["result"]["dim"].get<double>() ==
        doctest::Approx(0.9099394498169641).epsilon(1e-12));
  CHECK(doc["result"]["eta"].get<double>() == 0.5);
}

TEST_CASE("beta csv traces start with a config comment") {
  const TempConfig cfg(kBinary);
  const RunResult r = run_cli({"beta", "--config", cfg.path(), "--alpha",
                               "head:1/4,3/4", "--csv", "--M", "10"});
  REQUIRE(r.code == 0);
  CHECK(r.out.rfind("# {", 0) == 0);
  CHECK(r.out.find("m,numerator,denominator,value") != std::string::npos);
}

TEST_CASE("expand and digits agree through the cli") {
  const TempConfig cfg(kLuroth);
  const RunResult ex =
      run_cli({"expand", "--config", cfg.path(), "--word", "1,2,1,2"});
  REQUIRE(ex.code == 0);
  const json exdoc = json::parse(ex.out);
  CHECK(exdoc["result"]["point_exact"] == "209/288");

  const RunResult dg = run_cli(
      {"digits", "--config", cfg.path(), "--x", "209/288", "--n", "4"});
  REQUIRE(dg.code == 0);
  const json dgdoc = json::parse(dg.out);
  CHECK(dgdoc["result"]["word"] == json::array({1, 2, 1, 2}));
  CHECK(dgdoc["result"]["classification"] == "unique");
}

TEST_CASE("config mistakes exit with code two and name the field") {
  const TempConfig bad(R"({"symbols": [{"id": "L", "kind": "warp"}]})");
  const RunResult r = run_cli({"eta", "--config", bad.path()});
  CHECK(r.code == 2);
  CHECK(r.err.find("/symbols/0/kind") != std::string::npos);

  const TempConfig good(kLuroth);
  CHECK(run_cli({"dim", "--config", good.path(), "--alpha", "nope:1"}).code ==
        2);
  CHECK(run_cli({"dim", "--alpha", "geometric:1/2"}).code == 2);
  CHECK(run_cli({"dim", "--config", "/no/such/file.json", "--alpha",
                 "geometric:1/2"})
            .code == 2);
}

TEST_CASE("numeric guards exit with code three") {
  const TempConfig cfg(kLuroth);
  const RunResult r =
      run_cli({"coversum", "--config", cfg.path(), "--alpha", "geometric:1/2",
               "--n", "40", "--t", "0.9", "--m", "8", "--budget", "50"});
  CHECK(r.code == 3);
  CHECK_FALSE(r.err.empty());
}

TEST_CASE("sample traces are deterministic per seed") {
  const TempConfig cfg(kBinary);
  const std::vector<std::string> args{
      "sample", "--config", cfg.path(), "--alpha", "head:1/4,3/4",
      "--depth", "300",     "--seeds", "3",       "--stride", "100",
      "--seed", "7"};
  const RunResult a = run_cli(args);
  const RunResult b = run_cli(args);
  REQUIRE(a.code == 0);
  CHECK(a.out == b.out);
  CHECK(a.out.find("seed,n,log_mass,log_length,ratio,comparator") !=
        std::string::npos);
}

TEST_CASE("validate reports per-system partition health") {
  const TempConfig cfg(kLuroth);
  const RunResult r =
      run_cli({"validate", "--config", cfg.path(), "--digits", "64"});
  REQUIRE(r.code == 0);
  const json doc = json::parse(r.out);
  CHECK(doc["result"]["ok"] == true);
  CHECK(doc["result"]["systems"][0]["id"] == "L");
}

TEST_CASE("reports can be written to a file") {
  const TempConfig cfg(kLuroth);
  const std::string out_path =
      (std::filesystem::temp_directory_path() / "ngls_report.json").string();
  const RunResult r = run_cli({"eta", "--config", cfg.path(), "--out",
                               out_path, "--horizon", "65536"});
  REQUIRE(r.code == 0);
  CHECK(r.out.empty());
  std::ifstream in(out_path);
  REQUIRE(in.good());
  json doc;
  in >> doc;
  CHECK(doc["result"]["eta_T"].get<double>() == doctest::Approx(0.5).epsilon(2e-3));
  std::remove(out_path.c_str());
}
