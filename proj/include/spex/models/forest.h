#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "spex/models/regressor.h"

namespace spex::models {

struct RfHyperparams {
  std::size_t n_trees = 100;
  std::size_t max_features = 0;  // 0 selects max(1, M / 3)
  std::size_t min_leaf = 1;
  std::size_t max_depth = 0;  // 0 = unlimited
  bool bootstrap = true;
  std::uint64_t seed = 0;
  std::size_t threads = 1;

  void validate() const;
};

struct TreeNode {
  int feature = -1;  // -1 marks a leaf
  double threshold = 0.0;
  int left = -1;
  int right = -1;
  double value = 0.0;     // mean response of the node's training rows
  double impurity = 0.0;  // response variance i(t)
  std::size_t n_samples = 0;
  // n_t i(t) - n_L i(L) - n_R i(R); zero for leaves.
  double weighted_decrease = 0.0;

  bool is_leaf() const { return feature < 0; }
};

struct RegressionTree {
  std::vector<TreeNode> nodes;  // nodes[0] is the root

  double predict(const Eigen::VectorXd& x) const;
  std::size_t leaf_count() const;
};

class RfModel final : public Regressor {
 public:
  RfModel() = default;
  RfModel(std::vector<RegressionTree> trees, Eigen::Index n_features)
      : trees_(std::move(trees)), n_features_(n_features) {}

  double predict(const Eigen::VectorXd& x) const override;
  Eigen::Index input_width() const override { return n_features_; }
  std::string kind() const override { return "forest"; }
  // Total node count over all trees.
  std::size_t complexity() const override;

  const std::vector<RegressionTree>& trees() const { return trees_; }

 private:
  std::vector<RegressionTree> trees_;
  Eigen::Index n_features_ = 0;
};

// Grows one tree on the given (possibly repeated) row indices. Splits maximize
// the weighted variance reduction; ties go to the lowest feature index, then
// the lowest threshold.
RegressionTree grow_tree(const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                         std::vector<std::size_t> rows, const RfHyperparams& h, std::uint64_t seed);

RfModel rf_fit(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, const RfHyperparams& h);

}  // namespace spex::models
