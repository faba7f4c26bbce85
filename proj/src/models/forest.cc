#include "spex/models/forest.h"

#include <algorithm>
#include <numeric>
#include <stdexcept>

#include "spex/common/parallel.h"
#include "spex/common/random.h"

namespace spex::models {
namespace {

struct Split {
  int feature = -1;
  double threshold = 0.0;
  double decrease = 0.0;  // SSE(parent) - SSE(left) - SSE(right)
  std::size_t left_count = 0;
};

class TreeBuilder {
 public:
  TreeBuilder(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, const RfHyperparams& h,
              std::uint64_t seed)
      : x_(x), y_(y), h_(h), rng_(seed) {
    const auto m = static_cast<std::size_t>(x.cols());
    max_features_ = h.max_features == 0 ? std::max<std::size_t>(1, m / 3) : std::min(h.max_features, m);
  }

  RegressionTree build(std::vector<std::size_t> rows) {
    RegressionTree tree;
    grow(tree, rows, 0);
    return tree;
  }

 private:
  int grow(RegressionTree& tree, std::vector<std::size_t>& rows, std::size_t depth) {
    const int id = static_cast<int>(tree.nodes.size());
    tree.nodes.emplace_back();
    double sum = 0.0, sq = 0.0;
    for (auto r : rows) {
      const double v = y_(static_cast<Eigen::Index>(r));
      sum += v;
      sq += v * v;
    }
    const double n = static_cast<double>(rows.size());
    const double mean = sum / n;
    const double sse = std::max(0.0, sq - sum * mean);
    {
      auto& node = tree.nodes[static_cast<std::size_t>(id)];
      node.value = mean;
      node.impurity = sse / n;
      node.n_samples = rows.size();
    }
    const bool depth_ok = h_.max_depth == 0 || depth < h_.max_depth;
    if (!depth_ok || rows.size() < 2 * h_.min_leaf || sse <= 0.0) return id;

    const Split split = best_split(rows, sse);
    if (split.feature < 0) return id;

    std::vector<std::size_t> left, right;
    left.reserve(split.left_count);
    right.reserve(rows.size() - split.left_count);
    for (auto r : rows) {
      if (x_(static_cast<Eigen::Index>(r), split.feature) <= split.threshold) {
        left.push_back(r);
      } else {
        right.push_back(r);
      }
    }
    rows.clear();
    rows.shrink_to_fit();
    const int l = grow(tree, left, depth + 1);
    const int r = grow(tree, right, depth + 1);
    auto& node = tree.nodes[static_cast<std::size_t>(id)];
    node.feature = split.feature;
    node.threshold = split.threshold;
    node.left = l;
    node.right = r;
    node.weighted_decrease = split.decrease;
    return id;
  }

  // Visits features in random order until max_features non-constant ones have
  // been evaluated, then keeps the best candidate under the tie rule.
  Split best_split(const std::vector<std::size_t>& rows, double parent_sse) {
    const auto m = static_cast<std::size_t>(x_.cols());
    std::vector<std::size_t> features(m);
    std::iota(features.begin(), features.end(), 0);
    Split best;
    std::size_t evaluated = 0;
    std::vector<std::pair<double, double>> vals(rows.size());
    for (std::size_t k = 0; k < m && evaluated < max_features_; ++k) {
      const std::size_t pick = k + static_cast<std::size_t>(rng_.below(m - k));
      std::swap(features[k], features[pick]);
      const auto f = static_cast<Eigen::Index>(features[k]);
      for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto r = static_cast<Eigen::Index>(rows[i]);
        vals[i] = {x_(r, f), y_(r)};
      }
      std::sort(vals.begin(), vals.end());
      if (vals.front().first == vals.back().first) continue;
      ++evaluated;
      evaluate_feature(static_cast<int>(f), vals, parent_sse, best);
    }
    return best;
  }

  void evaluate_feature(int feature, const std::vector<std::pair<double, double>>& vals,
                        double parent_sse, Split& best) const {
    const std::size_t n = vals.size();
    double total = 0.0, total_sq = 0.0;
    for (const auto& v : vals) {
      total += v.second;
      total_sq += v.second * v.second;
    }
    double left_sum = 0.0, left_sq = 0.0;
    for (std::size_t i = 0; i + 1 < n; ++i) {
      left_sum += vals[i].second;
      left_sq += vals[i].second * vals[i].second;
      const std::size_t nl = i + 1, nr = n - nl;
      if (vals[i].first == vals[i + 1].first) continue;
      if (nl < h_.min_leaf || nr < h_.min_leaf) continue;
      const double right_sum = total - left_sum;
      const double right_sq = total_sq - left_sq;
      const double sse_l = std::max(0.0, left_sq - left_sum * left_sum / static_cast<double>(nl));
      const double sse_r = std::max(0.0, right_sq - right_sum * right_sum / static_cast<double>(nr));
      const double decrease = parent_sse - sse_l - sse_r;
      if (!(decrease > 0.0)) continue;
      double threshold = 0.5 * (vals[i].first + vals[i + 1].first);
      // Midpoint can round up to the right value for adjacent doubles.
      if (!(threshold < vals[i + 1].first)) threshold = vals[i].first;
      const bool better =
          best.feature < 0 || decrease > best.decrease ||
          (decrease == best.decrease &&
           (feature < best.feature || (feature == best.feature && threshold < best.threshold)));
      if (better) {
        best.feature = feature;
        best.threshold = threshold;
        best.decrease = decrease;
        best.left_count = nl;
      }
    }
  }

  const Eigen::MatrixXd& x_;
  const Eigen::VectorXd& y_;
  const RfHyperparams& h_;
  Rng rng_;
  std::size_t max_features_ = 1;
};

}  // namespace

void RfHyperparams::validate() const {
  if (n_trees < 1) throw std::invalid_argument("rf: n_trees must be >= 1");
  if (min_leaf < 1) throw std::invalid_argument("rf: min_leaf must be >= 1");
}

double RegressionTree::predict(const Eigen::VectorXd& x) const {
  std::size_t k = 0;
  while (!nodes[k].is_leaf()) {
    k = static_cast<std::size_t>(x(nodes[k].feature) <= nodes[k].threshold ? nodes[k].left : nodes[k].right);
  }
  return nodes[k].value;
}

std::size_t RegressionTree::leaf_count() const {
  return static_cast<std::size_t>(
      std::count_if(nodes.begin(), nodes.end(), [](const TreeNode& n) { return n.is_leaf(); }));
}

double RfModel::predict(const Eigen::VectorXd& x) const {
  if (x.size() != n_features_) throw std::invalid_argument("forest predict: input width mismatch");
  double s = 0.0;
  for (const auto& t : trees_) s += t.predict(x);
  return s / static_cast<double>(trees_.size());
}

std::size_t RfModel::complexity() const {
  std::size_t n = 0;
  for (const auto& t : trees_) n += t.nodes.size();
  return n;
}

RegressionTree grow_tree(const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                         std::vector<std::size_t> rows, const RfHyperparams& h, std::uint64_t seed) {
  TreeBuilder builder(x, y, h, seed);
  return builder.build(std::move(rows));
}

RfModel rf_fit(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, const RfHyperparams& h) {
  h.validate();
  if (x.rows() < 2) throw std::invalid_argument("rf_fit: at least two samples are required");
  if (x.rows() != y.size()) throw std::invalid_argument("rf_fit: X and y row counts differ");
  if (!x.allFinite() || !y.allFinite()) throw std::invalid_argument("rf_fit: non-finite input");

  const auto n = static_cast<std::size_t>(x.rows());
  std::vector<RegressionTree> trees(h.n_trees);
  parallel_for(h.n_trees, h.threads, [&](std::size_t t) {
    const std::uint64_t tree_seed = derive_seed(h.seed, t);
    std::vector<std::size_t> rows(n);
    if (h.bootstrap) {
      Rng rng(derive_seed(tree_seed, 0xb007));
      for (auto& r : rows) r = static_cast<std::size_t>(rng.below(n));
    } else {
      std::iota(rows.begin(), rows.end(), 0);
    }
    trees[t] = grow_tree(x, y, std::move(rows), h, tree_seed);
  });
  return RfModel(std::move(trees), x.cols());
}

}  // namespace spex::models
