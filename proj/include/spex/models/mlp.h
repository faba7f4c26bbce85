#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "spex/models/regressor.h"
#include "spex/spectra/standardize.h"

namespace spex::models {

enum class Activation { kRelu, kSigmoid, kLinear };
enum class Optimizer { kAdam, kSgd, kRmsprop };
enum class WeightInit { kNormal, kGlorotUniform, kHeNormal };

const char* activation_name(Activation a);
Activation parse_activation(const std::string& s);
const char* optimizer_name(Optimizer o);
Optimizer parse_optimizer(const std::string& s);
const char* weight_init_name(WeightInit w);
WeightInit parse_weight_init(const std::string& s);

// Node counts per layer, input first; the last entry must be 1.
struct MlpArchitecture {
  std::vector<std::size_t> layer_sizes;
  Activation hidden = Activation::kRelu;
  Activation output = Activation::kLinear;
};

struct MlpHyperparams {
  Optimizer optimizer = Optimizer::kAdam;
  double learning_rate = 0.0011;
  std::size_t batch_size = 32;
  std::size_t epochs = 200;
  double l2_penalty = 0.0;  // adds l2 * sum(w^2) over weight matrices
  WeightInit weight_init = WeightInit::kGlorotUniform;
  std::uint64_t init_seed = 0;
  std::uint64_t shuffle_seed = 1;
  bool standardize_inputs = false;

  void validate() const;
};

class TrainingDiverged : public std::runtime_error {
 public:
  TrainingDiverged(std::size_t epoch, double loss);
  std::size_t epoch() const { return epoch_; }

 private:
  std::size_t epoch_;
};

struct MlpGradients {
  std::vector<Eigen::MatrixXd> weights;
  std::vector<Eigen::VectorXd> biases;
  double loss = 0.0;
};

class MlpModel final : public Regressor {
 public:
  MlpModel() = default;
  // Weights are zero-initialized.
  explicit MlpModel(const MlpArchitecture& arch);

  double predict(const Eigen::VectorXd& x) const override;
  Eigen::VectorXd predict_rows(const Eigen::MatrixXd& x) const override;
  Eigen::Index input_width() const override;
  std::string kind() const override { return "mlp"; }
  std::size_t complexity() const override;
  std::unique_ptr<PointEvaluator> evaluator() const override;

  const MlpArchitecture& architecture() const { return arch_; }
  std::size_t n_layers() const { return weights_.size(); }
  // weights()[l] maps layer l to layer l + 1 (rows = outputs).
  std::vector<Eigen::MatrixXd>& weights() { return weights_; }
  const std::vector<Eigen::MatrixXd>& weights() const { return weights_; }
  std::vector<Eigen::VectorXd>& biases() { return biases_; }
  const std::vector<Eigen::VectorXd>& biases() const { return biases_; }
  const std::vector<double>& loss_history() const { return loss_history_; }
  std::vector<double>& loss_history() { return loss_history_; }
  std::optional<spectra::StandardizationParams>& scaling() { return scaling_; }
  const std::optional<spectra::StandardizationParams>& scaling() const { return scaling_; }

  // Forward pass on inputs already in model space (columns are samples).
  Eigen::MatrixXd forward_columns(const Eigen::MatrixXd& inputs) const;

 private:
  friend class MlpEvaluator;
  MlpArchitecture arch_;
  std::vector<Eigen::MatrixXd> weights_;
  std::vector<Eigen::VectorXd> biases_;
  std::vector<double> loss_history_;
  std::optional<spectra::StandardizationParams> scaling_;
};

void mlp_initialize(MlpModel& model, WeightInit init, std::uint64_t seed);

// Mean squared error plus the weight penalty; x rows are samples in model space.
double mlp_loss(const MlpModel& model, const Eigen::MatrixXd& x, const Eigen::VectorXd& y, double l2);

// Backpropagation of mlp_loss.
MlpGradients mlp_gradients(const MlpModel& model, const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                           double l2);

MlpModel mlp_fit(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, const MlpArchitecture& arch,
                 const MlpHyperparams& h);

}  // namespace spex::models
