#pragma once

#include <cstdint>

#include <Eigen/Dense>

#include "spex/explainers/attribution.h"
#include "spex/models/regressor.h"
#include "spex/selectors/ranking.h"

namespace spex::explainers {

inline constexpr std::size_t kExactShapleyLimit = 12;

struct ShapConfig {
  enum class Mode { kAuto, kExact, kSampled };

  Mode mode = Mode::kAuto;  // auto = exact when M <= exact_limit
  std::size_t n_permutations = 100;
  Eigen::MatrixXd background;  // rows = reference samples
  std::size_t exact_limit = kExactShapleyLimit;
  std::uint64_t seed = 0;
  std::size_t threads = 1;
};

// Shapley values of f at x under interventional masking: a coalition S keeps
// x on S and takes background values elsewhere, averaged over background
// rows. Exact mode enumerates all coalitions; sampled mode averages marginal
// contributions along seeded random feature orderings, each walked once per
// background row.
Attribution shapley_local(const models::Regressor& f, const Eigen::VectorXd& x, const ShapConfig& cfg,
                          std::size_t instance_id = 0);

// Per-instance attributions for every row of x_explain. Instance i uses the
// seed derive_seed(cfg.seed, i), so results do not depend on cfg.threads.
std::vector<Attribution> shapley_batch(const models::Regressor& f, const Eigen::MatrixXd& x_explain,
                                       const ShapConfig& cfg);

// score_j = mean over instances of |phi_j|.
selectors::FeatureRanking shap_rank(const models::Regressor& f, const Eigen::MatrixXd& x_explain,
                                    const ShapConfig& cfg);
selectors::FeatureRanking shap_rank(const std::vector<Attribution>& attrs);

}  // namespace spex::explainers
