#include <gtest/gtest.h>
#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>

#include "json.hpp"
#include "support.h"

namespace {

int run(const std::string& args) {
  const std::string cmd = std::string(SPEX_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

void write_file(const std::filesystem::path& p, const std::string& text) {
  std::ofstream(p) << text;
}

nlohmann::json tiny_config() {
  return {
      {"data", {{"source", "synthetic"}, {"seed", 2}, {"synth", {{"m_features", 60}, {"n_old", 30}, {"n_new", 15}}}}},
      {"scenarios", {"control", "realtime"}},
      {"models", {{{"name", "ridge"}, {"type", "ridge"}, {"alpha", 0.01}}}},
      {"selections", {"full", "ridge"}},
      {"selector", {{"rule", {{"kind", "count"}, {"k", 10}}}}},
      {"n_repeats", 2},
  };
}

class Cli : public ::testing::Test {
 protected:
  spex::test::TempDir dir{"cli"};
  std::string path(const std::string& name) const { return (dir / name).string(); }
};

TEST_F(Cli, SynthThenSelectAndEvaluate) {
  write_file(path("cfg.json"), tiny_config().dump());
  ASSERT_EQ(run("synth --config " + path("cfg.json") + " --out " + path("data")), 0);
  EXPECT_TRUE(std::filesystem::exists(dir / "data/old.csv"));
  EXPECT_TRUE(std::filesystem::exists(dir / "data/expert.txt"));
  EXPECT_EQ(run("select --data " + path("data/old.csv") + " --method ridge --k 5 --out " + path("subset.txt") +
                " --expert " + path("data/expert.txt")),
            0);
  std::ifstream subset(path("subset.txt"));
  std::size_t lines = 0;
  for (std::string l; std::getline(subset, l);) lines += !l.empty() && l[0] != '#';
  EXPECT_EQ(lines, 5u);
  ASSERT_EQ(run("evaluate --config " + path("cfg.json") + " --out " + path("eval")), 0);
  EXPECT_TRUE(std::filesystem::exists(dir / "eval/report.json"));
  EXPECT_TRUE(std::filesystem::exists(dir / "eval/performance.csv"));
  EXPECT_EQ(run("report --in " + path("eval") + " --format csv --out " + path("again")), 0);
  EXPECT_TRUE(std::filesystem::exists(dir / "again/tradeoff.csv"));
}

TEST_F(Cli, FitAndExplain) {
  write_file(path("cfg.json"), tiny_config().dump());
  ASSERT_EQ(run("synth --config " + path("cfg.json") + " --out " + path("data")), 0);
  ASSERT_EQ(run("fit --config " + path("cfg.json") + " --model ridge --out " + path("model.json")), 0);
  for (const std::string m : {"shap", "lime", "surrogate"}) {
    EXPECT_EQ(run("explain --model " + path("model.json") + " --data " + path("data/old.csv") + " --method " + m +
                  " --rows 3 --perturbations 200 --permutations 5 --out " + path("ex_" + m)),
              0)
        << m;
    EXPECT_TRUE(std::filesystem::exists(dir / ("ex_" + m) / "ranking.csv")) << m;
  }
}

TEST_F(Cli, ExitCodes) {
  auto bad = tiny_config();
  bad["n_repeat"] = 1;
  write_file(path("bad.json"), bad.dump());
  EXPECT_EQ(run("evaluate --config " + path("bad.json") + " --out " + path("x")), 1);
  EXPECT_EQ(run("frobnicate"), 1);
  EXPECT_EQ(run("select --data " + path("missing.csv") + " --method rf --out " + path("s.txt")), 1);

  write_file(path("broken.csv"), "300,200,cn\n1,2,3\n");
  EXPECT_EQ(run("select --data " + path("broken.csv") + " --method rf --out " + path("s.txt")), 2);

  auto partial = tiny_config();
  partial["scenarios"] = {"control"};
  partial["models"].push_back({{"name", "blowup"},
                               {"type", "mlp"},
                               {"hidden", {64, 64}},
                               {"optimizer", "sgd"},
                               {"learning_rate", 1000.0},
                               {"epochs", 50}});
  write_file(path("partial.json"), partial.dump());
  EXPECT_EQ(run("evaluate --config " + path("partial.json") + " --out " + path("p")), 3);
  EXPECT_TRUE(std::filesystem::exists(dir / "p/report.json"));
}

}  // namespace
