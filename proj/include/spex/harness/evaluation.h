#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "spex/harness/config.h"
#include "spex/metrics/metrics.h"
#include "spex/models/regressor.h"
#include "spex/selectors/ranking.h"
#include "spex/spectra/dataset.h"

namespace spex::harness {

inline constexpr const char* kArtifactVersion = "1.0.0";

struct LoadedData {
  spectra::SpectraDataset old_data;
  spectra::SpectraDataset new_data;
  std::optional<metrics::ExpertFeatureSet> expert;
};

// Generates or loads the configured data and applies trimming.
LoadedData load_data(const DataSource& source);

// Partitions visible to feature selection and tuning. The test partition is
// deliberately absent: selection code cannot reach it.
struct TrainingView {
  const Eigen::MatrixXd& x_train;
  const Eigen::VectorXd& y_train;
  const Eigen::MatrixXd& x_val;
  const Eigen::VectorXd& y_val;
};

// Ranks features for one of the ranking methods (pca, pls, rf, ridge, shap,
// gs, lime) from the training view only.
selectors::FeatureRanking compute_ranking(const std::string& method, const TrainingView& view,
                                          const SelectorSettings& settings, std::uint64_t seed,
                                          std::size_t threads = 1);

// Feature subset for any selection method, including full, expert and
// subset:<path>.
selectors::FeatureSubset compute_subset(const std::string& method, const TrainingView& view,
                                        const spectra::WavenumberAxis& axis, const SelectorSettings& settings,
                                        const std::optional<metrics::ExpertFeatureSet>& expert,
                                        std::uint64_t seed, std::size_t threads = 1);

std::unique_ptr<models::Regressor> fit_model(const ModelEntry& entry, const Eigen::MatrixXd& x,
                                             const Eigen::VectorXd& y, std::uint64_t seed);

struct Stat {
  double mean = 0.0;
  double sd = 0.0;  // sample deviation; 0 for a single run
};

Stat summarize(const std::vector<double>& values);

struct EvalCell {
  std::string scenario;
  std::string model;
  std::string method;
  Stat train_mse;
  Stat test_mse;
  double wall_time = 0.0;          // fit + predict seconds summed over repeats
  double wall_time_per_fit = 0.0;
  double complexity = 0.0;         // mean over repeats
  double subset_size = 0.0;        // mean over repeats
  std::size_t n_ok = 0;
  std::size_t n_repeats = 0;
  std::string status = "ok";       // ok, partial, failed
  std::vector<std::string> errors;
};

struct SelectionTiming {
  std::string scenario;
  std::string method;
  double wall_time = 0.0;  // seconds summed over repeats
};

struct CorrectnessEntry {
  std::string method;
  metrics::CorrectnessResult at_k;
  std::vector<metrics::CorrectnessResult> curve;
};

struct EvalReport {
  std::string artifact_version = kArtifactVersion;
  nlohmann::json config;
  std::vector<EvalCell> cells;
  std::vector<SelectionTiming> selection_timing;
  std::vector<CorrectnessEntry> correctness;
  std::vector<metrics::TradeoffRow> tradeoff;
  std::vector<std::string> warnings;

  std::size_t failed_cells() const;
};

// Runs every (repeat, scenario, selection, model) combination. Repeat r uses
// seed base_seed + r; repeats run on up to cfg.threads workers and results
// are assembled in a fixed order, so the report does not depend on the
// schedule. Cell failures are recorded, never thrown.
EvalReport run_evaluation(const ExperimentConfig& cfg);

}  // namespace spex::harness
