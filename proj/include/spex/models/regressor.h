#pragma once

#include <functional>
#include <memory>
#include <string>

#include <Eigen/Dense>

namespace spex::models {

// Evaluates a model at a point that changes one coordinate at a time.
// Attribution methods walk coalitions feature by feature; models that can
// update their internal state in less than a full forward pass override
// Regressor::evaluator() to exploit that.
class PointEvaluator {
 public:
  virtual ~PointEvaluator() = default;
  virtual void reset(const Eigen::VectorXd& x) = 0;
  virtual void set(Eigen::Index feature, double value) = 0;
  virtual double value() = 0;
};

// A fitted model: maps an M-vector of intensities to a scalar response.
// Implementations are immutable after fitting, so predict() is reentrant.
class Regressor {
 public:
  virtual ~Regressor() = default;

  virtual double predict(const Eigen::VectorXd& x) const = 0;
  virtual Eigen::VectorXd predict_rows(const Eigen::MatrixXd& x) const;

  virtual Eigen::Index input_width() const = 0;
  virtual std::string kind() const = 0;

  // Support-vector count for SVR, trainable parameter count otherwise.
  virtual std::size_t complexity() const = 0;

  virtual std::unique_ptr<PointEvaluator> evaluator() const;
};

// Adapts a plain callable into a Regressor. The callable must be safe to
// invoke concurrently if the adapter is shared across threads.
class FunctionModel final : public Regressor {
 public:
  FunctionModel(std::function<double(const Eigen::VectorXd&)> fn, Eigen::Index width)
      : fn_(std::move(fn)), width_(width) {}

  double predict(const Eigen::VectorXd& x) const override { return fn_(x); }
  Eigen::Index input_width() const override { return width_; }
  std::string kind() const override { return "function"; }
  std::size_t complexity() const override { return 0; }

 private:
  std::function<double(const Eigen::VectorXd&)> fn_;
  Eigen::Index width_;
};

}  // namespace spex::models
