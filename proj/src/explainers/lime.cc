#include "spex/explainers/lime.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "spex/common/parallel.h"
#include "spex/common/random.h"
#include "spex/models/linear.h"

namespace spex::explainers {
namespace {

constexpr int kMaxWidenings = 8;

double weighted_r2(const Eigen::VectorXd& y, const Eigen::VectorXd& yhat, const Eigen::VectorXd& w) {
  const double total = w.sum();
  const double mean = w.dot(y) / total;
  const double ss_tot = (w.array() * (y.array() - mean).square()).sum();
  const double ss_res = (w.array() * (y - yhat).array().square()).sum();
  if (!(ss_tot > 0)) return ss_res > 0 ? 0.0 : 1.0;
  return 1.0 - ss_res / ss_tot;
}

}  // namespace

Attribution lime_local(const models::Regressor& f, const Eigen::VectorXd& x, const LimeConfig& cfg,
                       std::size_t instance_id) {
  const Eigen::Index m = x.size();
  if (cfg.train_stats.size() != m) throw std::invalid_argument("lime: train_stats width differs from x");
  if (cfg.n_perturbations < 2) throw std::invalid_argument("lime: n_perturbations must be >= 2");
  if (!(cfg.ridge_penalty >= 0)) throw std::invalid_argument("lime: ridge_penalty must be non-negative");

  Attribution a;
  a.instance_id = instance_id;
  if (cfg.n_perturbations < static_cast<std::size_t>(m)) {
    a.warnings.push_back("n_perturbations (" + std::to_string(cfg.n_perturbations) +
                         ") is below the feature count (" + std::to_string(m) + ")");
  }

  const auto n = static_cast<Eigen::Index>(cfg.n_perturbations);
  const Eigen::VectorXd xs = spectra::standardize_apply(cfg.train_stats, x);
  Eigen::MatrixXd zs(n, m);
  Rng rng(cfg.seed);
  zs.row(0) = xs.transpose();
  for (Eigen::Index i = 1; i < n; ++i) {
    for (Eigen::Index j = 0; j < m; ++j) zs(i, j) = xs(j) + rng.normal();
  }
  const Eigen::MatrixXd raw = spectra::standardize_invert(cfg.train_stats, zs);
  const Eigen::VectorXd target = f.predict_rows(raw);
  const Eigen::VectorXd d2 = (zs.rowwise() - xs.transpose()).rowwise().squaredNorm();

  double width = cfg.kernel_width > 0 ? cfg.kernel_width : 0.75 * std::sqrt(static_cast<double>(m));
  Eigen::VectorXd weights;
  for (int attempt = 0;; ++attempt) {
    weights = (-d2.array() / (width * width)).exp();
    // The instance itself always has weight 1; degeneracy means nothing else counts.
    const double others = weights.sum() - weights(0);
    if (others > 1e-8 * static_cast<double>(n) || attempt == kMaxWidenings) break;
    width *= 2.0;
    a.warnings.push_back("kernel weights degenerate; widened kernel to " + std::to_string(width));
  }

  // Coordinates centered on the instance, so the intercept is the local value.
  const Eigen::MatrixXd centered = zs.rowwise() - xs.transpose();
  const auto local = models::weighted_ridge_fit(centered, target, weights, cfg.ridge_penalty);
  a.values = local.weights();
  a.base_value = local.intercept();
  a.model_output = target(0);
  a.local_r2 = weighted_r2(target, local.predict_rows(centered), weights);
  return a;
}

std::vector<Attribution> lime_batch(const models::Regressor& f, const Eigen::MatrixXd& x_explain,
                                    const LimeConfig& cfg) {
  std::vector<Attribution> out(static_cast<std::size_t>(x_explain.rows()));
  parallel_for(out.size(), cfg.threads, [&](std::size_t i) {
    LimeConfig local = cfg;
    local.seed = derive_seed(cfg.seed, i);
    out[i] = lime_local(f, x_explain.row(static_cast<Eigen::Index>(i)).transpose(), local, i);
  });
  return out;
}

LimeRanking lime_rank(const std::vector<Attribution>& attrs, std::size_t per_instance_k) {
  if (attrs.empty()) throw std::invalid_argument("lime_rank: no instances to explain");
  if (per_instance_k < 1) throw std::invalid_argument("lime_rank: per_instance_k must be >= 1");
  const Eigen::Index m = attrs.front().values.size();
  const std::size_t k = std::min<std::size_t>(per_instance_k, static_cast<std::size_t>(m));
  LimeRanking out;
  out.frequency = Eigen::VectorXd::Zero(m);
  out.mean_abs_coef = Eigen::VectorXd::Zero(m);
  std::vector<std::size_t> idx(static_cast<std::size_t>(m));
  for (const auto& a : attrs) {
    const Eigen::VectorXd mag = a.values.cwiseAbs();
    out.mean_abs_coef += mag;
    std::iota(idx.begin(), idx.end(), 0);
    std::partial_sort(idx.begin(), idx.begin() + static_cast<long>(k), idx.end(), [&](std::size_t p, std::size_t q) {
      const double mp = mag(static_cast<Eigen::Index>(p)), mq = mag(static_cast<Eigen::Index>(q));
      return mp > mq || (mp == mq && p < q);
    });
    for (std::size_t i = 0; i < k; ++i) out.frequency(static_cast<Eigen::Index>(idx[i])) += 1.0;
  }
  const double n = static_cast<double>(attrs.size());
  out.frequency /= n;
  out.mean_abs_coef /= n;

  out.ranking = selectors::FeatureRanking::from_scores(out.frequency, "lime");
  std::stable_sort(out.ranking.order.begin(), out.ranking.order.end(), [&](std::size_t p, std::size_t q) {
    const auto pi = static_cast<Eigen::Index>(p), qi = static_cast<Eigen::Index>(q);
    if (out.frequency(pi) != out.frequency(qi)) return out.frequency(pi) > out.frequency(qi);
    if (out.mean_abs_coef(pi) != out.mean_abs_coef(qi)) return out.mean_abs_coef(pi) > out.mean_abs_coef(qi);
    return p < q;
  });
  return out;
}

LimeRanking lime_rank(const models::Regressor& f, const Eigen::MatrixXd& x_explain, const LimeConfig& cfg,
                      std::size_t per_instance_k) {
  return lime_rank(lime_batch(f, x_explain, cfg), per_instance_k);
}

}  // namespace spex::explainers
