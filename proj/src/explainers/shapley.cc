#include "spex/explainers/shapley.h"

#include <bit>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "spex/common/parallel.h"
#include "spex/common/random.h"

namespace spex::explainers {
namespace {

// |S|! (M - |S| - 1)! / M! for |S| = 0..M-1.
std::vector<double> coalition_weights(std::size_t m) {
  std::vector<double> w(m);
  for (std::size_t s = 0; s < m; ++s) {
    w[s] = std::exp(std::lgamma(static_cast<double>(s) + 1) + std::lgamma(static_cast<double>(m - s)) -
                    std::lgamma(static_cast<double>(m) + 1));
  }
  return w;
}

Eigen::VectorXd exact_values(const models::Regressor& f, const Eigen::VectorXd& x, const Eigen::MatrixXd& bg) {
  const auto m = static_cast<std::size_t>(x.size());
  const std::size_t n_masks = std::size_t{1} << m;
  // g[mask] = mean over background rows of f(x on mask, b elsewhere).
  std::vector<double> g(n_masks, 0.0);
  auto ev = f.evaluator();
  for (Eigen::Index b = 0; b < bg.rows(); ++b) {
    const Eigen::VectorXd row = bg.row(b).transpose();
    ev->reset(row);
    std::size_t mask = 0;
    g[0] += ev->value();
    // Gray-code walk flips one feature per step.
    for (std::size_t i = 1; i < n_masks; ++i) {
      const auto j = static_cast<Eigen::Index>(std::countr_zero(i));
      mask ^= std::size_t{1} << j;
      ev->set(j, (mask >> j) & 1 ? x(j) : row(j));
      g[mask] += ev->value();
    }
  }
  const double inv = 1.0 / static_cast<double>(bg.rows());
  for (auto& v : g) v *= inv;

  const auto w = coalition_weights(m);
  Eigen::VectorXd phi = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(m));
  for (std::size_t mask = 0; mask < n_masks; ++mask) {
    const auto size = static_cast<std::size_t>(std::popcount(mask));
    for (std::size_t j = 0; j < m; ++j) {
      if ((mask >> j) & 1) continue;
      phi(static_cast<Eigen::Index>(j)) += w[size] * (g[mask | (std::size_t{1} << j)] - g[mask]);
    }
  }
  return phi;
}

Eigen::VectorXd sampled_values(const models::Regressor& f, const Eigen::VectorXd& x, const Eigen::MatrixXd& bg,
                               std::size_t n_permutations, std::uint64_t seed) {
  const auto m = static_cast<std::size_t>(x.size());
  Eigen::VectorXd phi = Eigen::VectorXd::Zero(x.size());
  auto ev = f.evaluator();
  Rng rng(seed);
  for (std::size_t p = 0; p < n_permutations; ++p) {
    const auto order = rng.permutation(m);
    for (Eigen::Index b = 0; b < bg.rows(); ++b) {
      ev->reset(bg.row(b).transpose());
      double prev = ev->value();
      for (auto j : order) {
        const auto jj = static_cast<Eigen::Index>(j);
        ev->set(jj, x(jj));
        const double cur = ev->value();
        phi(jj) += cur - prev;
        prev = cur;
      }
    }
  }
  return phi / static_cast<double>(n_permutations * static_cast<std::size_t>(bg.rows()));
}

}  // namespace

Attribution shapley_local(const models::Regressor& f, const Eigen::VectorXd& x, const ShapConfig& cfg,
                          std::size_t instance_id) {
  if (cfg.background.rows() < 1) throw std::invalid_argument("shapley: background set is empty");
  if (cfg.background.cols() != x.size()) throw std::invalid_argument("shapley: background width differs from x");
  const auto m = static_cast<std::size_t>(x.size());
  bool exact = cfg.mode == ShapConfig::Mode::kExact ||
               (cfg.mode == ShapConfig::Mode::kAuto && m <= cfg.exact_limit);
  if (exact && m > cfg.exact_limit) {
    throw std::invalid_argument("shapley: exact mode needs M <= " + std::to_string(cfg.exact_limit));
  }
  if (!exact && cfg.n_permutations < 1) throw std::invalid_argument("shapley: n_permutations must be >= 1");

  Attribution a;
  a.instance_id = instance_id;
  a.model_output = f.predict(x);
  a.base_value = f.predict_rows(cfg.background).mean();
  a.values = exact ? exact_values(f, x, cfg.background)
                   : sampled_values(f, x, cfg.background, cfg.n_permutations, cfg.seed);
  return a;
}

std::vector<Attribution> shapley_batch(const models::Regressor& f, const Eigen::MatrixXd& x_explain,
                                       const ShapConfig& cfg) {
  std::vector<Attribution> out(static_cast<std::size_t>(x_explain.rows()));
  parallel_for(out.size(), cfg.threads, [&](std::size_t i) {
    ShapConfig local = cfg;
    local.seed = derive_seed(cfg.seed, i);
    out[i] = shapley_local(f, x_explain.row(static_cast<Eigen::Index>(i)).transpose(), local, i);
  });
  return out;
}

selectors::FeatureRanking shap_rank(const std::vector<Attribution>& attrs) {
  if (attrs.empty()) throw std::invalid_argument("shap_rank: no instances to explain");
  Eigen::VectorXd s = Eigen::VectorXd::Zero(attrs.front().values.size());
  for (const auto& a : attrs) s += a.values.cwiseAbs();
  return selectors::FeatureRanking::from_scores(s / static_cast<double>(attrs.size()), "shap");
}

selectors::FeatureRanking shap_rank(const models::Regressor& f, const Eigen::MatrixXd& x_explain,
                                    const ShapConfig& cfg) {
  return shap_rank(shapley_batch(f, x_explain, cfg));
}

}  // namespace spex::explainers
