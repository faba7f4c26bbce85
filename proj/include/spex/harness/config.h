#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "spex/explainers/lime.h"
#include "spex/metrics/metrics.h"
#include "spex/models/forest.h"
#include "spex/models/mlp.h"
#include "spex/models/architecture.h"
#include "spex/models/svr.h"
#include "spex/selectors/ranking.h"
#include "spex/spectra/scenario.h"
#include "spex/spectra/synthetic.h"

namespace spex::harness {

// Raised for malformed or inconsistent experiment settings.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct DataSource {
  enum class Kind { kSynthetic, kFiles };
  Kind kind = Kind::kSynthetic;
  spectra::SynthConfig synth = spectra::SynthConfig::defaults();
  std::uint64_t synth_seed = 0;
  std::filesystem::path old_path;
  std::filesystem::path new_path;     // optional for Control-only runs
  std::filesystem::path expert_path;  // optional; enables correctness
  std::optional<std::pair<double, double>> trim;
};

enum class ModelType { kSvr, kMlp, kLinear, kRidge, kForest };

const char* model_type_name(ModelType t);
ModelType parse_model_type(const std::string& s);

struct ModelEntry {
  std::string name;
  ModelType type = ModelType::kSvr;
  models::SvrHyperparams svr = models::SvrHyperparams::bo_default();
  models::MlpHyperparams mlp{};
  // Explicit hidden widths win over the generated pattern.
  std::vector<std::size_t> mlp_hidden;
  models::ArchitectureRequest mlp_arch{};
  models::Activation mlp_hidden_activation = models::Activation::kRelu;
  models::Activation mlp_output_activation = models::Activation::kLinear;
  double ridge_alpha = 1e-3;
  models::RfHyperparams rf{};
};

struct SelectorSettings {
  selectors::SelectionRule rule = selectors::SelectionRule::count(120);
  double ridge_alpha = 1e-3;
  models::RfHyperparams rf{};
  std::size_t pca_max_p = 10;
  std::size_t pls_max_p = 10;
  // Black box explained by shap, gs and lime; fitted on the training rows.
  models::SvrHyperparams explainer = models::SvrHyperparams::bo_default();
  std::size_t explain_rows = 20;     // seeded subsample of the training rows
  std::size_t background_rows = 10;  // stratified on the explainer output
  std::size_t background_strata = 5;
  std::size_t shap_permutations = 10;
  std::size_t lime_perturbations = 1000;
  double lime_kernel_width = 0.0;
  double lime_ridge = 1e-3;
  std::size_t lime_top_k = explainers::kLimeDefaultTopK;
  double surrogate_ridge = 1e-6;
};

struct CorrectnessSettings {
  std::optional<double> bin_width;  // default: twice the axis resolution
  std::size_t k = 120;
  std::vector<std::size_t> ks = metrics::default_curve_ks();
};

struct TradeoffSettings {
  std::string scenario;  // default: first scenario
  std::string model;     // default: first model
};

struct ExperimentConfig {
  DataSource data;
  std::vector<spectra::ScenarioKind> scenarios{spectra::ScenarioKind::kControl, spectra::ScenarioKind::kMixed,
                                               spectra::ScenarioKind::kRealtime};
  std::vector<ModelEntry> models;
  std::vector<std::string> selections{"full"};
  SelectorSettings selector{};
  CorrectnessSettings correctness{};
  TradeoffSettings tradeoff{};
  std::size_t n_repeats = 30;
  std::uint64_t base_seed = 0;
  std::size_t threads = 1;

  // Throws ConfigError.
  void validate() const;
};

// Method names accepted in `selections`: full, expert, pca, pls, rf, ridge,
// shap, gs, lime, and subset:<path>.
bool is_known_selection(const std::string& name);
// Ranking-based methods among the names above.
bool is_ranking_method(const std::string& name);

ExperimentConfig config_from_json(const nlohmann::json& j);
nlohmann::json config_to_json(const ExperimentConfig& cfg);
ExperimentConfig load_config(const std::filesystem::path& path);

spectra::SynthConfig synth_from_json(const nlohmann::json& j);
nlohmann::json synth_to_json(const spectra::SynthConfig& cfg);

// Roster used when a config lists no models: BO-default and fine-tuned SVR.
std::vector<ModelEntry> default_models();

}  // namespace spex::harness
