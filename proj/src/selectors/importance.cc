#include "spex/selectors/importance.h"

#include <algorithm>
#include <limits>
#include <stdexcept>

#include "spex/spectra/standardize.h"

namespace spex::selectors {

FeatureRanking component_feature_scores(const PcaModel& model) {
  Eigen::VectorXd s = Eigen::VectorXd::Zero(model.loadings.cols());
  for (Eigen::Index p = 0; p < model.n_components(); ++p) {
    s += std::max(0.0, model.variance_ratios(p)) * model.loadings.row(p).cwiseAbs().transpose();
  }
  return FeatureRanking::from_scores(std::move(s), "pca");
}

FeatureRanking component_feature_scores(const PlsModel& model) {
  Eigen::VectorXd s = Eigen::VectorXd::Zero(model.weights.cols());
  for (Eigen::Index p = 0; p < model.n_components(); ++p) {
    s += std::max(0.0, model.per_component_ev(p)) * model.weights.row(p).cwiseAbs().transpose();
  }
  return FeatureRanking::from_scores(std::move(s), "pls");
}

FeatureRanking rf_rank(const models::RfModel& model) {
  Eigen::VectorXd s = Eigen::VectorXd::Zero(model.input_width());
  for (const auto& tree : model.trees()) {
    if (tree.nodes.empty()) continue;
    const double root_n = static_cast<double>(tree.nodes.front().n_samples);
    for (const auto& node : tree.nodes) {
      if (node.is_leaf()) continue;
      s(node.feature) += node.weighted_decrease / root_n;
    }
  }
  const double total = s.sum();
  if (total > 0) s /= total;
  return FeatureRanking::from_scores(std::move(s), "rf");
}

FeatureRanking ridge_rank(const models::LinearModel& model) {
  return FeatureRanking::from_scores(model.weights().cwiseAbs(), "ridge");
}

FeatureRanking ridge_rank_fit(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, double alpha) {
  const auto params = spectra::standardize_fit(x);
  return ridge_rank(models::ridge_fit(spectra::standardize_apply(params, x), y, alpha));
}

Eigen::Index elbow_index(const Eigen::VectorXd& c) {
  const Eigen::Index n = c.size();
  if (n < 2) return n;
  Eigen::Index best = 1;
  double best_curv = -std::numeric_limits<double>::infinity();
  for (Eigen::Index p = 1; p < n; ++p) {
    const double prev = p >= 2 ? c(p - 2) : 0.0;
    const double curv = -(c(p) - 2.0 * c(p - 1) + prev);
    if (curv > best_curv) {
      best_curv = curv;
      best = p;
    }
  }
  return best;
}

ComponentChoice choose_components(ComponentMethod method, const Eigen::MatrixXd& x_train,
                                  const Eigen::VectorXd& y_train, Eigen::Index max_p,
                                  const Eigen::MatrixXd& x_val, const Eigen::VectorXd& y_val) {
  if (max_p < 2) throw std::invalid_argument("choose_components: max_p must be >= 2");
  const Eigen::Index cap = std::min<Eigen::Index>(max_p, std::min(x_train.rows() - 1, x_train.cols()));
  if (cap < 1) throw std::invalid_argument("choose_components: not enough samples");
  ComponentChoice out;
  if (method == ComponentMethod::kPca) {
    const PcaModel model = pca_fit(x_train, cap);
    out.curve = model.cumulative_ratios().head(cap);
    out.p = elbow_index(out.curve);
    return out;
  }
  if (x_val.rows() < 1) throw std::invalid_argument("choose_components: PLS needs a validation set");
  const PlsModel model = pls_fit(x_train, y_train, cap);
  const Eigen::Index a = std::max<Eigen::Index>(model.n_components(), 1);
  out.curve.resize(a);
  for (Eigen::Index p = 1; p <= a; ++p) {
    out.curve(p - 1) = (pls_predict(model, x_val, p) - y_val).squaredNorm() / static_cast<double>(y_val.size());
  }
  const double best = out.curve.minCoeff();
  const double var = (y_val.array() - y_val.mean()).square().mean();
  const double slack = 1e-6 * best + 1e-9 * std::max(var, 1e-300);
  out.p = 1;
  for (Eigen::Index p = 0; p < a; ++p) {
    if (out.curve(p) <= best + slack) {
      out.p = p + 1;
      break;
    }
  }
  return out;
}

}  // namespace spex::selectors
