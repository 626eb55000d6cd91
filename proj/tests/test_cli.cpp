#include <sys/wait.h>

#include <cstdlib>

#include "doctest.h"
#include "paracons/fileio.hpp"
#include "json.hpp"
#include "support/fixtures.hpp"

using namespace paracons;
using paracons::testing::synthetic_dataset;
using paracons::testing::TempDir;
namespace fs = std::filesystem;

namespace {

int run(const std::string& args, const fs::path& log) {
  const std::string cmd = std::string(PARACONS_CLI) + " " + args + " >" + log.string() + " 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string q(const fs::path& p) { return "'" + p.string() + "'"; }

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("exit codes") {
    TempDir dir;
    const auto log = dir / "log.txt";
    write_dataset(synthetic_dataset(2, 4, 3, 3), dir / "data");
    fs::create_directories(dir / "empty");

    CHECK(run("", log) == 1);
    CHECK(run("evaluate --data " + q(dir / "data"), log) == 1);
    CHECK(run("frobnicate", log) == 1);
    CHECK(run("evaluate --data " + q(dir / "empty") + " --out " + q(dir / "o") +
                  " --endpoint mock:oracle",
              log) == 2);
    CHECK(run("evaluate --data " + q(dir / "data") + " --out " + q(dir / "o") +
                  " --endpoint mock:nonsense",
              log) == 2);
    CHECK(run("evaluate --data " + q(dir / "data") + " --out " + q(dir / "o1") +
                  " --endpoint http:http://127.0.0.1:1/score",
              log) == 3);
    CHECK(run("evaluate --data " + q(dir / "data") + " --out " + q(dir / "o2") +
                  " --endpoint 'exec:" + FAKE_SCORER + " bad-json'",
              log) == 4);

    REQUIRE(run("evaluate --data " + q(dir / "data") + " --out " + q(dir / "o3") +
                    " --endpoint mock:oracle",
                log) == 0);
    write_dataset(synthetic_dataset(2, 5, 3, 3), dir / "other");
    CHECK(run("analyze --data " + q(dir / "other") + " --out " + q(dir / "a") + " --cache " +
                  q(dir / "o3" / "predictions.jsonl"),
              log) == 5);
    CHECK(read_file(log).find("digest") != std::string::npos);
  }

  TEST_CASE("curate, evaluate, analyze") {
    TempDir dir;
    const auto log = dir / "log.txt";
    write_dataset(synthetic_dataset(3, 6, 3, 4), dir / "raw");
    REQUIRE(run("curate --data " + q(dir / "raw") + " --out " + q(dir / "cur"), log) == 0);
    CHECK(fs::exists(dir / "cur" / "curation.txt"));
    CHECK(fs::exists(dir / "cur" / "manifest-curate.json"));
    REQUIRE(run("evaluate --data " + q(dir / "cur" / "data") + " --out " + q(dir / "ev") +
                    " --endpoint mock:oracle --seed 3",
                log) == 0);
    REQUIRE(run("analyze --data " + q(dir / "cur" / "data") + " --out " + q(dir / "an") +
                    " --cache " + q(dir / "ev" / "predictions.jsonl") +
                    " --format text,json,csv --label oracle",
                log) == 0);
    const auto text = read_file(dir / "an" / "report.txt");
    CHECK(text.rfind("run_digest: ", 0) == 0);
    CHECK(text.find("oracle  1.00 ±0.00  1.00 ±0.00  1.00 ±0.00") != std::string::npos);
    const auto j = nlohmann::json::parse(read_file(dir / "an" / "report.json"));
    CHECK(j.dump().find("\"unk_cons\":null") != std::string::npos);
    CHECK(fs::exists(dir / "an" / "strata.csv"));
    CHECK(fs::exists(dir / "an" / "consistency.csv"));
    const auto manifest = nlohmann::json::parse(read_file(dir / "an" / "manifest-analyze.json"));
    CHECK(manifest.dump().find("report.txt") != std::string::npos);
  }

  TEST_CASE("retrieval tables are reported absent without passages") {
    TempDir dir;
    const auto log = dir / "log.txt";
    write_dataset(synthetic_dataset(2, 4, 3, 3), dir / "data");
    REQUIRE(run("evaluate --data " + q(dir / "data") + " --out " + q(dir / "ev") +
                    " --endpoint mock:hash --n-passages 0",
                log) == 0);
    REQUIRE(run("analyze --data " + q(dir / "data") + " --out " + q(dir / "an") + " --cache " +
                    q(dir / "ev" / "predictions.jsonl"),
                log) == 0);
    CHECK(read_file(dir / "an" / "report.txt").find("absent") != std::string::npos);
  }

  TEST_CASE("retrieval commands and interventions") {
    TempDir dir;
    const auto log = dir / "log.txt";
    write_dataset(synthetic_dataset(2, 5, 3, 4), dir / "data");
    const std::string data = " --data " + q(dir / "data");
    const std::string cache = " --cache " + q(dir / "ev" / "predictions.jsonl");
    REQUIRE(run("evaluate" + data + " --out " + q(dir / "ev") + " --endpoint mock:reader", log) == 0);
    REQUIRE(run("retriever-metrics" + data + cache + " --out " + q(dir / "rm") +
                    " --baseline-samples 50",
                log) == 0);
    CHECK(read_file(dir / "rm" / "retriever.txt").find("r-subject") != std::string::npos);
    REQUIRE(run("rank-report" + data + cache + " --out " + q(dir / "rr"), log) == 0);
    CHECK(fs::exists(dir / "rr" / "rank.json"));
    REQUIRE(run("intervene" + data + cache + " --out " + q(dir / "iv") +
                    " --endpoint mock:reader --mode all",
                log) == 0);
    const auto text = read_file(dir / "iv" / "intervention.txt");
    for (const char* row : {"none", "relevant", "irr cohesive", "irr incohesive"}) {
      CHECK(text.find(row) != std::string::npos);
    }
    CHECK(fs::exists(dir / "iv" / "plan_irr_cohesive.jsonl"));
    CHECK(run("intervene" + data + cache + " --out " + q(dir / "iv2") +
                  " --endpoint mock:reader --mode sideways",
              log) == 2);
  }

  TEST_CASE("identical runs give identical bytes") {
    TempDir dir;
    const auto log = dir / "log.txt";
    write_dataset(synthetic_dataset(3, 6, 4, 4), dir / "data");
    for (const char* out : {"r1", "r2"}) {
      REQUIRE(run("evaluate --data " + q(dir / "data") + " --out " + q(dir / out) +
                      " --endpoint 'mock:parametric:0.7' --seed 9",
                  log) == 0);
      REQUIRE(run("analyze --data " + q(dir / "data") + " --out " + q(dir / out / "an") +
                      " --cache " + q(dir / out / "predictions.jsonl") + " --seed 9",
                  log) == 0);
    }
    CHECK(read_file(dir / "r1" / "predictions.jsonl") == read_file(dir / "r2" / "predictions.jsonl"));
    CHECK(read_file(dir / "r1" / "an" / "report.txt") == read_file(dir / "r2" / "an" / "report.txt"));
    CHECK(read_file(dir / "r1" / "an" / "report.json") == read_file(dir / "r2" / "an" / "report.json"));
  }
}
