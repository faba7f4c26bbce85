#include "spex/models/mlp.h"

#include <cmath>
#include <numeric>

#include "spex/common/random.h"

namespace spex::models {
namespace {

void apply_activation(Activation a, Eigen::MatrixXd& z) {
  switch (a) {
    case Activation::kRelu: z = z.cwiseMax(0.0); break;
    case Activation::kSigmoid: z = (1.0 + (-z.array()).exp()).inverse().matrix(); break;
    case Activation::kLinear: break;
  }
}

// Derivative expressed through the activation output a = g(z).
Eigen::ArrayXXd activation_slope(Activation a, const Eigen::MatrixXd& out) {
  switch (a) {
    case Activation::kRelu: return (out.array() > 0.0).cast<double>();
    case Activation::kSigmoid: return out.array() * (1.0 - out.array());
    case Activation::kLinear: return Eigen::ArrayXXd::Ones(out.rows(), out.cols());
  }
  return {};
}

void validate_arch(const MlpArchitecture& arch) {
  if (arch.layer_sizes.size() < 2) throw std::invalid_argument("mlp: need at least input and output layers");
  if (arch.layer_sizes.back() != 1) throw std::invalid_argument("mlp: output layer must have one node");
  for (auto s : arch.layer_sizes) {
    if (s == 0) throw std::invalid_argument("mlp: empty layer");
  }
  if (arch.output == Activation::kRelu) throw std::invalid_argument("mlp: output activation must be linear or sigmoid");
}

// Per-parameter optimizer state for one tensor.
struct Moment {
  Eigen::MatrixXd m, v;
};

class OptimizerState {
 public:
  OptimizerState(const MlpModel& model, const MlpHyperparams& h) : h_(h) {
    for (std::size_t l = 0; l < model.n_layers(); ++l) {
      const auto& w = model.weights()[l];
      w_.push_back({Eigen::MatrixXd::Zero(w.rows(), w.cols()), Eigen::MatrixXd::Zero(w.rows(), w.cols())});
      const auto& b = model.biases()[l];
      b_.push_back({Eigen::MatrixXd::Zero(b.rows(), 1), Eigen::MatrixXd::Zero(b.rows(), 1)});
    }
  }

  void step(MlpModel& model, const MlpGradients& g) {
    ++t_;
    for (std::size_t l = 0; l < model.n_layers(); ++l) {
      update(model.weights()[l], g.weights[l], w_[l]);
      Eigen::MatrixXd b = model.biases()[l];
      update(b, g.biases[l], b_[l]);
      model.biases()[l] = b;
    }
  }

 private:
  void update(Eigen::MatrixXd& param, const Eigen::MatrixXd& grad, Moment& s) const {
    const double lr = h_.learning_rate;
    switch (h_.optimizer) {
      case Optimizer::kSgd:
        param -= lr * grad;
        break;
      case Optimizer::kRmsprop: {
        constexpr double rho = 0.9, eps = 1e-7;
        s.v = rho * s.v + (1.0 - rho) * grad.cwiseAbs2();
        param.array() -= lr * grad.array() / (s.v.array().sqrt() + eps);
        break;
      }
      case Optimizer::kAdam: {
        constexpr double b1 = 0.9, b2 = 0.999, eps = 1e-7;
        s.m = b1 * s.m + (1.0 - b1) * grad;
        s.v = b2 * s.v + (1.0 - b2) * grad.cwiseAbs2();
        const double td = static_cast<double>(t_);
        const double lr_t = lr * std::sqrt(1.0 - std::pow(b2, td)) / (1.0 - std::pow(b1, td));
        param.array() -= lr_t * s.m.array() / (s.v.array().sqrt() + eps);
        break;
      }
    }
  }

  const MlpHyperparams& h_;
  std::vector<Moment> w_, b_;
  long t_ = 0;
};

}  // namespace

const char* activation_name(Activation a) {
  switch (a) {
    case Activation::kRelu: return "relu";
    case Activation::kSigmoid: return "sigmoid";
    case Activation::kLinear: return "linear";
  }
  return "unknown";
}

Activation parse_activation(const std::string& s) {
  if (s == "relu") return Activation::kRelu;
  if (s == "sigmoid") return Activation::kSigmoid;
  if (s == "linear") return Activation::kLinear;
  throw std::invalid_argument("unknown activation '" + s + "'");
}

const char* optimizer_name(Optimizer o) {
  switch (o) {
    case Optimizer::kAdam: return "adam";
    case Optimizer::kSgd: return "sgd";
    case Optimizer::kRmsprop: return "rmsprop";
  }
  return "unknown";
}

Optimizer parse_optimizer(const std::string& s) {
  if (s == "adam") return Optimizer::kAdam;
  if (s == "sgd") return Optimizer::kSgd;
  if (s == "rmsprop") return Optimizer::kRmsprop;
  throw std::invalid_argument("unknown optimizer '" + s + "'");
}

const char* weight_init_name(WeightInit w) {
  switch (w) {
    case WeightInit::kNormal: return "random_normal";
    case WeightInit::kGlorotUniform: return "glorot_uniform";
    case WeightInit::kHeNormal: return "he_normal";
  }
  return "unknown";
}

WeightInit parse_weight_init(const std::string& s) {
  if (s == "random_normal" || s == "normal") return WeightInit::kNormal;
  if (s == "glorot_uniform" || s == "uniform") return WeightInit::kGlorotUniform;
  if (s == "he_normal") return WeightInit::kHeNormal;
  throw std::invalid_argument("unknown weight initializer '" + s + "'");
}

void MlpHyperparams::validate() const {
  if (!(learning_rate > 0)) throw std::invalid_argument("mlp: learning_rate must be positive");
  if (epochs < 1) throw std::invalid_argument("mlp: epochs must be >= 1");
  if (batch_size < 1) throw std::invalid_argument("mlp: batch_size must be >= 1");
  if (l2_penalty < 0) throw std::invalid_argument("mlp: l2_penalty must be non-negative");
}

TrainingDiverged::TrainingDiverged(std::size_t epoch, double loss)
    : std::runtime_error("mlp training diverged at epoch " + std::to_string(epoch) +
                         " (loss = " + std::to_string(loss) + ")"),
      epoch_(epoch) {}

MlpModel::MlpModel(const MlpArchitecture& arch) : arch_(arch) {
  validate_arch(arch_);
  for (std::size_t l = 0; l + 1 < arch_.layer_sizes.size(); ++l) {
    const auto in = static_cast<Eigen::Index>(arch_.layer_sizes[l]);
    const auto out = static_cast<Eigen::Index>(arch_.layer_sizes[l + 1]);
    weights_.push_back(Eigen::MatrixXd::Zero(out, in));
    biases_.push_back(Eigen::VectorXd::Zero(out));
  }
}

Eigen::Index MlpModel::input_width() const {
  return arch_.layer_sizes.empty() ? 0 : static_cast<Eigen::Index>(arch_.layer_sizes.front());
}

std::size_t MlpModel::complexity() const {
  std::size_t n = 0;
  for (std::size_t l = 0; l < weights_.size(); ++l) {
    n += static_cast<std::size_t>(weights_[l].size() + biases_[l].size());
  }
  return n;
}

Eigen::MatrixXd MlpModel::forward_columns(const Eigen::MatrixXd& inputs) const {
  Eigen::MatrixXd a = inputs;
  for (std::size_t l = 0; l < weights_.size(); ++l) {
    Eigen::MatrixXd z = weights_[l] * a;
    z.colwise() += biases_[l];
    apply_activation(l + 1 == weights_.size() ? arch_.output : arch_.hidden, z);
    a = std::move(z);
  }
  return a;
}

double MlpModel::predict(const Eigen::VectorXd& x) const {
  if (x.size() != input_width()) throw std::invalid_argument("mlp predict: input width mismatch");
  const Eigen::VectorXd z = scaling_ ? spectra::standardize_apply(*scaling_, x) : x;
  return forward_columns(z)(0, 0);
}

Eigen::VectorXd MlpModel::predict_rows(const Eigen::MatrixXd& x) const {
  if (x.cols() != input_width()) throw std::invalid_argument("mlp predict: input width mismatch");
  const Eigen::MatrixXd z = scaling_ ? spectra::standardize_apply(*scaling_, x) : x;
  return forward_columns(z.transpose()).row(0).transpose();
}

class MlpEvaluator final : public PointEvaluator {
 public:
  explicit MlpEvaluator(const MlpModel& m) : m_(m) {}

  void reset(const Eigen::VectorXd& x) override {
    z_ = m_.scaling_ ? spectra::standardize_apply(*m_.scaling_, x) : x;
    pre_ = m_.weights_[0] * z_ + m_.biases_[0];
  }

  void set(Eigen::Index feature, double value) override {
    if (m_.scaling_) value = (value - m_.scaling_->means(feature)) / m_.scaling_->stds(feature);
    const double delta = value - z_(feature);
    if (delta == 0.0) return;
    pre_.noalias() += delta * m_.weights_[0].col(feature);
    z_(feature) = value;
  }

  double value() override {
    Eigen::MatrixXd a = pre_;
    apply_activation(m_.weights_.size() == 1 ? m_.arch_.output : m_.arch_.hidden, a);
    for (std::size_t l = 1; l < m_.weights_.size(); ++l) {
      Eigen::MatrixXd z = m_.weights_[l] * a;
      z.colwise() += m_.biases_[l];
      apply_activation(l + 1 == m_.weights_.size() ? m_.arch_.output : m_.arch_.hidden, z);
      a = std::move(z);
    }
    return a(0, 0);
  }

 private:
  const MlpModel& m_;
  Eigen::VectorXd z_, pre_;
};

std::unique_ptr<PointEvaluator> MlpModel::evaluator() const {
  return std::make_unique<MlpEvaluator>(*this);
}

void mlp_initialize(MlpModel& model, WeightInit init, std::uint64_t seed) {
  Rng rng(derive_seed(seed, 0x1417));
  for (std::size_t l = 0; l < model.n_layers(); ++l) {
    auto& w = model.weights()[l];
    const double fan_in = static_cast<double>(w.cols());
    const double fan_out = static_cast<double>(w.rows());
    for (Eigen::Index c = 0; c < w.cols(); ++c) {
      for (Eigen::Index r = 0; r < w.rows(); ++r) {
        switch (init) {
          case WeightInit::kNormal: w(r, c) = rng.normal(0.0, 0.05); break;
          case WeightInit::kGlorotUniform: {
            const double limit = std::sqrt(6.0 / (fan_in + fan_out));
            w(r, c) = rng.uniform(-limit, limit);
            break;
          }
          case WeightInit::kHeNormal: w(r, c) = rng.normal(0.0, std::sqrt(2.0 / fan_in)); break;
        }
      }
    }
    model.biases()[l].setZero();
  }
}

double mlp_loss(const MlpModel& model, const Eigen::MatrixXd& x, const Eigen::VectorXd& y, double l2) {
  const Eigen::MatrixXd out = model.forward_columns(x.transpose());
  double loss = (out.row(0).transpose() - y).squaredNorm() / static_cast<double>(y.size());
  if (l2 > 0) {
    for (const auto& w : model.weights()) loss += l2 * w.squaredNorm();
  }
  return loss;
}

MlpGradients mlp_gradients(const MlpModel& model, const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                           double l2) {
  const std::size_t n_layers = model.n_layers();
  const auto& arch = model.architecture();
  const double n = static_cast<double>(y.size());

  // Forward: activations a^0 .. a^L, columns are samples.
  std::vector<Eigen::MatrixXd> act(n_layers + 1);
  act[0] = x.transpose();
  for (std::size_t l = 0; l < n_layers; ++l) {
    Eigen::MatrixXd z = model.weights()[l] * act[l];
    z.colwise() += model.biases()[l];
    apply_activation(l + 1 == n_layers ? arch.output : arch.hidden, z);
    act[l + 1] = std::move(z);
  }

  MlpGradients g;
  g.weights.resize(n_layers);
  g.biases.resize(n_layers);
  const Eigen::RowVectorXd residual = act[n_layers].row(0) - y.transpose();
  g.loss = residual.squaredNorm() / n;
  if (l2 > 0) {
    for (const auto& w : model.weights()) g.loss += l2 * w.squaredNorm();
  }

  // Output error, then errors of earlier layers through the transposed weights.
  Eigen::MatrixXd delta =
      ((2.0 / n) * residual).array() * activation_slope(arch.output, act[n_layers]).array();
  for (std::size_t l = n_layers; l-- > 0;) {
    g.weights[l] = delta * act[l].transpose();
    if (l2 > 0) g.weights[l] += 2.0 * l2 * model.weights()[l];
    g.biases[l] = delta.rowwise().sum();
    if (l > 0) {
      delta = (model.weights()[l].transpose() * delta).array() *
              activation_slope(arch.hidden, act[l]).array();
    }
  }
  return g;
}

MlpModel mlp_fit(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, const MlpArchitecture& arch,
                 const MlpHyperparams& h) {
  h.validate();
  validate_arch(arch);
  if (static_cast<Eigen::Index>(arch.layer_sizes.front()) != x.cols()) {
    throw std::invalid_argument("mlp_fit: input layer width must equal the feature count");
  }
  if (x.rows() != y.size() || x.rows() == 0) throw std::invalid_argument("mlp_fit: bad training data");

  MlpModel model(arch);
  mlp_initialize(model, h.weight_init, h.init_seed);
  Eigen::MatrixXd xs;
  if (h.standardize_inputs) {
    model.scaling() = spectra::standardize_fit(x);
    xs = spectra::standardize_apply(*model.scaling(), x);
  }
  const Eigen::MatrixXd& data = h.standardize_inputs ? xs : x;

  OptimizerState opt(model, h);
  Rng rng(derive_seed(h.shuffle_seed, 0x5bu));
  const auto n = static_cast<std::size_t>(x.rows());
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  for (std::size_t epoch = 0; epoch < h.epochs; ++epoch) {
    rng.shuffle(order);
    double epoch_loss = 0.0;
    for (std::size_t start = 0; start < n; start += h.batch_size) {
      const std::size_t end = std::min(n, start + h.batch_size);
      const auto b = static_cast<Eigen::Index>(end - start);
      Eigen::MatrixXd xb(b, data.cols());
      Eigen::VectorXd yb(b);
      for (std::size_t k = start; k < end; ++k) {
        xb.row(static_cast<Eigen::Index>(k - start)) = data.row(static_cast<Eigen::Index>(order[k]));
        yb(static_cast<Eigen::Index>(k - start)) = y(static_cast<Eigen::Index>(order[k]));
      }
      const MlpGradients g = mlp_gradients(model, xb, yb, h.l2_penalty);
      if (!std::isfinite(g.loss)) throw TrainingDiverged(epoch, g.loss);
      epoch_loss += g.loss * static_cast<double>(b);
      opt.step(model, g);
    }
    epoch_loss /= static_cast<double>(n);
    if (!std::isfinite(epoch_loss)) throw TrainingDiverged(epoch, epoch_loss);
    model.loss_history().push_back(epoch_loss);
  }
  for (const auto& w : model.weights()) {
    if (!w.allFinite()) throw TrainingDiverged(h.epochs, std::nan(""));
  }
  return model;
}

}  // namespace spex::models
