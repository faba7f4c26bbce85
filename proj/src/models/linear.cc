#include "spex/models/linear.h"

#include <cmath>
#include <stdexcept>

namespace spex::models {
namespace {

class LinearEvaluator final : public PointEvaluator {
 public:
  explicit LinearEvaluator(const LinearModel& m) : m_(m) {}
  void reset(const Eigen::VectorXd& x) override {
    x_ = x;
    value_ = m_.weights().dot(x) + m_.intercept();
  }
  void set(Eigen::Index feature, double value) override {
    value_ += m_.weights()(feature) * (value - x_(feature));
    x_(feature) = value;
  }
  double value() override { return value_; }

 private:
  const LinearModel& m_;
  Eigen::VectorXd x_;
  double value_ = 0.0;
};

// Solves min |b - A w|^2 + alpha |w|^2 for centered A, b.
Eigen::VectorXd solve_centered(const Eigen::MatrixXd& a, const Eigen::VectorXd& b, double alpha) {
  if (alpha <= 0.0) {
    return a.completeOrthogonalDecomposition().solve(b);
  }
  if (a.cols() <= a.rows()) {
    Eigen::MatrixXd gram = a.transpose() * a;
    gram.diagonal().array() += alpha;
    return gram.ldlt().solve(a.transpose() * b);
  }
  // Dual form when features outnumber samples.
  Eigen::MatrixXd gram = a * a.transpose();
  gram.diagonal().array() += alpha;
  return a.transpose() * gram.ldlt().solve(b);
}

void check_inputs(const Eigen::MatrixXd& x, const Eigen::VectorXd& y) {
  if (x.rows() < 1) throw std::invalid_argument("linear fit: no samples");
  if (x.rows() != y.size()) throw std::invalid_argument("linear fit: X and y row counts differ");
  if (!x.allFinite() || !y.allFinite()) throw std::invalid_argument("linear fit: non-finite input");
}

}  // namespace

double LinearModel::predict(const Eigen::VectorXd& x) const {
  if (x.size() != weights_.size()) throw std::invalid_argument("linear predict: input width mismatch");
  return weights_.dot(x) + intercept_;
}

Eigen::VectorXd LinearModel::predict_rows(const Eigen::MatrixXd& x) const {
  if (x.cols() != weights_.size()) throw std::invalid_argument("linear predict: input width mismatch");
  return (x * weights_).array() + intercept_;
}

std::unique_ptr<PointEvaluator> LinearModel::evaluator() const {
  return std::make_unique<LinearEvaluator>(*this);
}

LinearModel ridge_fit(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, double alpha,
                      bool fit_intercept) {
  check_inputs(x, y);
  if (!(alpha >= 0)) throw std::invalid_argument("ridge_fit: alpha must be non-negative");
  if (!fit_intercept) {
    return LinearModel(solve_centered(x, y, alpha), 0.0, alpha, alpha > 0 ? "ridge" : "ols");
  }
  const Eigen::RowVectorXd x_mean = x.colwise().mean();
  const double y_mean = y.mean();
  const Eigen::MatrixXd xc = x.rowwise() - x_mean;
  const Eigen::VectorXd yc = y.array() - y_mean;
  Eigen::VectorXd w = solve_centered(xc, yc, alpha);
  const double b = y_mean - x_mean.dot(w);
  return LinearModel(std::move(w), b, alpha, alpha > 0 ? "ridge" : "ols");
}

LinearModel ols_fit(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, bool fit_intercept) {
  return ridge_fit(x, y, 0.0, fit_intercept);
}

LinearModel weighted_ridge_fit(const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                               const Eigen::VectorXd& sample_weights, double alpha) {
  check_inputs(x, y);
  if (sample_weights.size() != y.size()) throw std::invalid_argument("weighted_ridge_fit: weight count");
  const double total = sample_weights.sum();
  if (!(total > 0)) throw std::invalid_argument("weighted_ridge_fit: weights sum to zero");
  const Eigen::RowVectorXd x_mean = (sample_weights.transpose() * x) / total;
  const double y_mean = sample_weights.dot(y) / total;
  const Eigen::VectorXd root = sample_weights.cwiseSqrt();
  const Eigen::MatrixXd a = (x.rowwise() - x_mean).array().colwise() * root.array();
  const Eigen::VectorXd b = (y.array() - y_mean) * root.array();
  Eigen::VectorXd w = solve_centered(a, b, alpha);
  const double intercept = y_mean - x_mean.dot(w);
  return LinearModel(std::move(w), intercept, alpha, "weighted_ridge");
}

}  // namespace spex::models
