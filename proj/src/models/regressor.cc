#include "spex/models/regressor.h"

namespace spex::models {
namespace {

class RecomputingEvaluator final : public PointEvaluator {
 public:
  explicit RecomputingEvaluator(const Regressor& model) : model_(model) {}
  void reset(const Eigen::VectorXd& x) override { x_ = x; }
  void set(Eigen::Index feature, double value) override { x_(feature) = value; }
  double value() override { return model_.predict(x_); }

 private:
  const Regressor& model_;
  Eigen::VectorXd x_;
};

}  // namespace

Eigen::VectorXd Regressor::predict_rows(const Eigen::MatrixXd& x) const {
  Eigen::VectorXd out(x.rows());
  for (Eigen::Index i = 0; i < x.rows(); ++i) out(i) = predict(x.row(i).transpose());
  return out;
}

std::unique_ptr<PointEvaluator> Regressor::evaluator() const {
  return std::make_unique<RecomputingEvaluator>(*this);
}

}  // namespace spex::models
