#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "spex/harness/config.h"
#include "spex/harness/evaluation.h"
#include "spex/harness/report.h"
#include "spex/spectra/io.h"
#include "spex/spectra/synthetic.h"
#include "support.h"

namespace spex::harness {
namespace {

ModelEntry ridge_entry(double alpha = 1e-3) {
  ModelEntry e;
  e.name = "ridge";
  e.type = ModelType::kRidge;
  e.ridge_alpha = alpha;
  return e;
}

ExperimentConfig small_config() {
  ExperimentConfig cfg;
  cfg.data.synth = test::small_synth(80, 40, 20);
  cfg.data.synth_seed = 3;
  cfg.models = {ridge_entry()};
  cfg.selections = {"full", "rf"};
  cfg.selector.rule = selectors::SelectionRule::count(20);
  cfg.selector.rf.n_trees = 10;
  cfg.n_repeats = 2;
  cfg.base_seed = 5;
  return cfg;
}

TEST(Config, JsonRoundTrip) {
  auto cfg = small_config();
  cfg.models.push_back(default_models().front());
  cfg.scenarios = {spectra::ScenarioKind::kMixed};
  const auto j = config_to_json(cfg);
  const auto back = config_from_json(j);
  EXPECT_EQ(config_to_json(back), j);
  EXPECT_EQ(back.models.size(), 2u);
  EXPECT_EQ(back.models[1].svr.c, 0.7);
}

TEST(Config, RejectsUnknownKeys) {
  auto j = config_to_json(small_config());
  j["n_repeat"] = 3;
  EXPECT_THROW(config_from_json(j), ConfigError);
  auto m = config_to_json(small_config());
  m["models"][0]["alpah"] = 1.0;
  EXPECT_THROW(config_from_json(m), ConfigError);
}

TEST(Config, Validation) {
  auto cfg = small_config();
  cfg.n_repeats = 0;
  EXPECT_THROW(cfg.validate(), ConfigError);
  cfg = small_config();
  cfg.selections = {"full", "magic"};
  EXPECT_THROW(cfg.validate(), ConfigError);
  cfg = small_config();
  cfg.selections = {"rf", "rf"};
  EXPECT_THROW(cfg.validate(), ConfigError);
  cfg = small_config();
  cfg.data.kind = DataSource::Kind::kFiles;
  cfg.data.old_path = "old.csv";
  EXPECT_THROW(cfg.validate(), ConfigError);  // Mixed and Realtime need the new batch
  EXPECT_NO_THROW(small_config().validate());
}

TEST(Config, DefaultRoster) {
  const auto models = default_models();
  ASSERT_EQ(models.size(), 2u);
  EXPECT_EQ(models[0].svr.epsilon, 0.1);
  EXPECT_EQ(models[1].svr.epsilon, 0.66);
  EXPECT_TRUE(is_ranking_method("lime"));
  EXPECT_FALSE(is_ranking_method("full"));
  EXPECT_TRUE(is_known_selection("subset:/tmp/x.txt"));
}

TEST(Evaluation, SingleRepeatHasZeroSpread) {
  auto cfg = small_config();
  cfg.n_repeats = 1;
  cfg.scenarios = {spectra::ScenarioKind::kControl};
  cfg.selections = {"full"};
  const auto rep = run_evaluation(cfg);
  ASSERT_EQ(rep.cells.size(), 1u);
  EXPECT_EQ(rep.cells[0].n_repeats, 1u);
  EXPECT_EQ(rep.cells[0].test_mse.sd, 0.0);
  EXPECT_EQ(rep.cells[0].status, "ok");
  EXPECT_EQ(rep.failed_cells(), 0u);
}

TEST(Evaluation, NoiselessExpertSubsetIsRecovered) {
  auto cfg = small_config();
  auto& s = cfg.data.synth;
  s.m_features = 400;
  s.noise_sd = 0.0;
  s.response_noise_sd = 0.0;
  s.nonlinearity.clear();
  cfg.models = {ModelEntry{}};
  cfg.models[0].name = "ols";
  cfg.models[0].type = ModelType::kLinear;
  cfg.scenarios = {spectra::ScenarioKind::kControl};
  cfg.selections = {"expert"};
  const auto rep = run_evaluation(cfg);
  ASSERT_EQ(rep.cells.size(), 1u);
  EXPECT_EQ(rep.cells[0].status, "ok");
  EXPECT_GT(rep.cells[0].subset_size, 0.0);
  EXPECT_LT(rep.cells[0].test_mse.mean, 1e-6);
}

TEST(Evaluation, DeterministicReport) {
  const auto cfg = small_config();
  const auto a = report_to_json(run_evaluation(cfg), false);
  const auto b = report_to_json(run_evaluation(cfg), false);
  EXPECT_EQ(a.dump(), b.dump());
}

TEST(Evaluation, TradeoffHasOneRowPerRankingMethod) {
  auto cfg = small_config();
  cfg.selections = {"full", "rf", "ridge", "pls"};
  cfg.scenarios = {spectra::ScenarioKind::kControl};
  const auto rep = run_evaluation(cfg);
  EXPECT_EQ(rep.cells.size(), 4u);
  EXPECT_EQ(rep.correctness.size(), 3u);
  EXPECT_EQ(rep.tradeoff.size(), 3u);
  for (const auto& c : rep.correctness) EXPECT_EQ(c.curve.size(), cfg.correctness.ks.size() - std::count_if(
      cfg.correctness.ks.begin(), cfg.correctness.ks.end(), [](std::size_t k) { return k > 80; }));
}

TEST(Evaluation, FailedCellsAreRecordedNotThrown) {
  auto cfg = small_config();
  cfg.scenarios = {spectra::ScenarioKind::kControl};
  cfg.selections = {"full"};
  ModelEntry bad;
  bad.name = "bad";
  bad.type = ModelType::kMlp;
  bad.mlp_hidden = {64, 64};
  bad.mlp.optimizer = models::Optimizer::kSgd;
  bad.mlp.learning_rate = 1e3;
  bad.mlp.epochs = 50;
  cfg.models.push_back(bad);
  const auto rep = run_evaluation(cfg);
  ASSERT_EQ(rep.cells.size(), 2u);
  EXPECT_EQ(rep.failed_cells(), 1u);
  EXPECT_FALSE(rep.cells[1].errors.empty());
}

// Selection and training only see the old batch in Realtime, so corrupting
// the new batch may change test error and nothing else.
TEST(Evaluation, RealtimeSelectionNeverSeesTestRows) {
  const auto data = spectra::generate_synthetic(test::small_synth(80, 40, 20), 8);
  test::TempDir dir("leak");
  spectra::save_dataset(dir / "old.csv", data.old_data);
  spectra::save_dataset(dir / "new.csv", data.new_data);
  auto corrupted = data.new_data;
  corrupted.intensities.array() += 5.0;
  corrupted.response.array() *= -3.0;
  spectra::save_dataset(dir / "new_bad.csv", corrupted);

  auto cfg = small_config();
  cfg.data.kind = DataSource::Kind::kFiles;
  cfg.data.old_path = dir / "old.csv";
  cfg.data.new_path = dir / "new.csv";
  cfg.scenarios = {spectra::ScenarioKind::kRealtime};
  cfg.selections = {"rf", "pls", "ridge"};
  const auto clean = run_evaluation(cfg);
  cfg.data.new_path = dir / "new_bad.csv";
  const auto dirty = run_evaluation(cfg);
  ASSERT_EQ(clean.cells.size(), dirty.cells.size());
  for (std::size_t i = 0; i < clean.cells.size(); ++i) {
    EXPECT_EQ(clean.cells[i].train_mse.mean, dirty.cells[i].train_mse.mean);
    EXPECT_EQ(clean.cells[i].subset_size, dirty.cells[i].subset_size);
    EXPECT_EQ(clean.cells[i].complexity, dirty.cells[i].complexity);
    EXPECT_NE(clean.cells[i].test_mse.mean, dirty.cells[i].test_mse.mean);
  }
}

TEST(Report, EmptyReportEmitsHeaders) {
  test::TempDir dir("empty");
  EvalReport rep;
  emit_report(rep, dir.path() / "out");
  for (const char* f : {"report.json", "performance.csv", "correctness_curve.csv", "tradeoff.csv"}) {
    EXPECT_TRUE(std::filesystem::exists(dir.path() / "out" / f)) << f;
  }
  std::ifstream in(dir.path() / "out" / "tradeoff.csv");
  std::string header;
  std::getline(in, header);
  EXPECT_EQ(header, "method,correctness,test_mse_mean,test_mse_sd");
}

TEST(Report, JsonReloadPreservesCells) {
  auto cfg = small_config();
  cfg.scenarios = {spectra::ScenarioKind::kControl};
  cfg.selections = {"full"};
  cfg.n_repeats = 1;
  const auto rep = run_evaluation(cfg);
  test::TempDir dir("reload");
  emit_report(rep, dir.path(), {"json"});
  const auto back = load_report(dir / "report.json");
  ASSERT_EQ(back.cells.size(), 1u);
  EXPECT_EQ(back.cells[0].test_mse.mean, rep.cells[0].test_mse.mean);
  EXPECT_EQ(report_to_json(back).dump(), report_to_json(rep).dump());
  auto doc = report_to_json(rep);
  doc["version"] = kReportFormatVersion + 1;
  EXPECT_THROW(report_from_json(doc), std::runtime_error);
}

TEST(Summaries, SampleDeviation) {
  const auto s = summarize({1.0, 2.0, 3.0, 4.0});
  EXPECT_DOUBLE_EQ(s.mean, 2.5);
  EXPECT_DOUBLE_EQ(s.sd, std::sqrt(5.0 / 3.0));
}

}  // namespace
}  // namespace spex::harness
