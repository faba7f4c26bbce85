#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "spex/models/mlp.h"
#include "spex/models/regressor.h"
#include "spex/models/svr.h"

namespace spex::models {

using ParamValue = std::variant<double, long long, std::string>;
using ParamSet = std::map<std::string, ParamValue>;

std::string param_to_string(const ParamValue& v);
double param_as_double(const ParamSet& p, const std::string& name);
long long param_as_int(const ParamSet& p, const std::string& name);
const std::string& param_as_string(const ParamSet& p, const std::string& name);

struct ParamRange {
  enum class Kind { kContinuous, kInteger, kCategorical };

  std::string name;
  Kind kind = Kind::kContinuous;
  double lo = 0.0;
  double hi = 1.0;
  bool log_scale = false;
  long long step = 1;                 // integer ranges only
  std::vector<ParamValue> choices;    // categorical values, or explicit grid points

  static ParamRange continuous(std::string name, double lo, double hi, bool log_scale = false);
  static ParamRange integer(std::string name, long long lo, long long hi, long long step = 1);
  static ParamRange categorical(std::string name, std::vector<ParamValue> choices);

  bool contains(const ParamValue& v) const;
};

enum class SearchStrategy { kRandom, kGrid };

struct TunerSpec {
  std::vector<ParamRange> space;
  std::size_t budget = 20;
  SearchStrategy strategy = SearchStrategy::kRandom;
  std::uint64_t seed = 0;
};

using Trainer = std::function<std::unique_ptr<Regressor>(const ParamSet&, const Eigen::MatrixXd&,
                                                         const Eigen::VectorXd&)>;

struct TrialRecord {
  std::size_t index = 0;
  ParamSet params;
  bool ok = false;
  double val_mse = 0.0;
  double seconds = 0.0;
  std::string error;
};

struct TuneResult {
  ParamSet best_params;
  std::size_t best_index = 0;
  double best_val_mse = 0.0;
  std::vector<TrialRecord> trials;
};

// Draws `budget` configurations (random) or walks the cartesian product of
// the ranges' discrete values (grid, truncated to budget), trains each on
// `train`, and keeps the lowest validation MSE. Trainer exceptions are
// recorded on the trial. Throws if every trial fails.
TuneResult tune(const Trainer& trainer, const TunerSpec& spec, const Eigen::MatrixXd& x_train,
                const Eigen::VectorXd& y_train, const Eigen::MatrixXd& x_val,
                const Eigen::VectorXd& y_val);

// Sampled configurations without training, in trial order.
std::vector<ParamSet> enumerate_trials(const TunerSpec& spec);

// One CSV row per trial: index, status, val_mse, seconds, then the params.
void write_trial_log(const TuneResult& result, const std::string& path);

// Default tuning search spaces.
std::vector<ParamRange> svr_search_space();
std::vector<ParamRange> mlp_search_space();

SvrHyperparams svr_from_params(const ParamSet& p, const SvrHyperparams& base = SvrHyperparams{});
// Returns hyperparameters and fills `arch` for the given input width.
MlpHyperparams mlp_from_params(const ParamSet& p, std::size_t input_width, MlpArchitecture& arch,
                               const MlpHyperparams& base = MlpHyperparams{});

Trainer svr_trainer(const SvrHyperparams& base = SvrHyperparams{});
Trainer mlp_trainer(const MlpHyperparams& base = MlpHyperparams{});

}  // namespace spex::models
