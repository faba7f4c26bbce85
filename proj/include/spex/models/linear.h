#pragma once

#include <string>

#include <Eigen/Dense>

#include "spex/models/regressor.h"

namespace spex::models {

// y = w'x + intercept. Produced by ridge_fit and ols_fit.
class LinearModel final : public Regressor {
 public:
  LinearModel() = default;
  LinearModel(Eigen::VectorXd weights, double intercept, double alpha, std::string method)
      : weights_(std::move(weights)), intercept_(intercept), alpha_(alpha), method_(std::move(method)) {}

  double predict(const Eigen::VectorXd& x) const override;
  Eigen::VectorXd predict_rows(const Eigen::MatrixXd& x) const override;
  Eigen::Index input_width() const override { return weights_.size(); }
  std::string kind() const override { return "linear"; }
  std::size_t complexity() const override { return static_cast<std::size_t>(weights_.size()) + 1; }
  std::unique_ptr<PointEvaluator> evaluator() const override;

  const Eigen::VectorXd& weights() const { return weights_; }
  double intercept() const { return intercept_; }
  double alpha() const { return alpha_; }
  const std::string& method() const { return method_; }

 private:
  Eigen::VectorXd weights_;
  double intercept_ = 0.0;
  double alpha_ = 0.0;
  std::string method_ = "ols";
};

// Minimizes |y - Xw - b|^2 + alpha |w|^2 with the intercept unpenalized.
// alpha = 0 falls back to the minimum-norm least-squares solution.
LinearModel ridge_fit(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, double alpha,
                      bool fit_intercept = true);

// Rank-tolerant least squares; minimum-norm weights when M > N.
LinearModel ols_fit(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, bool fit_intercept = true);

// Weighted ridge: minimizes sum_i s_i (y_i - w'x_i - b)^2 + alpha |w|^2.
LinearModel weighted_ridge_fit(const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                               const Eigen::VectorXd& sample_weights, double alpha);

}  // namespace spex::models
