#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "spex/explainers/attribution.h"
#include "spex/models/regressor.h"
#include "spex/selectors/ranking.h"
#include "spex/spectra/standardize.h"

namespace spex::explainers {

struct LimeConfig {
  std::size_t n_perturbations = 1000;
  double kernel_width = 0.0;  // 0 selects 0.75 * sqrt(M)
  double ridge_penalty = 1e-3;
  spectra::StandardizationParams train_stats;
  std::uint64_t seed = 0;
  std::size_t threads = 1;
};

// Local linear surrogate around x. Perturbations are drawn as
// z ~ Normal(standardized x, I), mapped back to raw units for evaluation, and
// weighted by exp(-d^2 / width^2) with d the standardized distance to x. The
// instance itself is the first sample. Values are the weighted-ridge
// coefficients in standardized units (output change per training sd);
// base_value is the local intercept at the instance's standardized origin.
Attribution lime_local(const models::Regressor& f, const Eigen::VectorXd& x, const LimeConfig& cfg,
                       std::size_t instance_id = 0);

// Instance i uses derive_seed(cfg.seed, i).
std::vector<Attribution> lime_batch(const models::Regressor& f, const Eigen::MatrixXd& x_explain,
                                    const LimeConfig& cfg);

struct LimeRanking {
  selectors::FeatureRanking ranking;  // scores are selection frequencies
  Eigen::VectorXd frequency;
  Eigen::VectorXd mean_abs_coef;
};

inline constexpr std::size_t kLimeDefaultTopK = 50;

// Each instance votes for its top-k features by |coefficient|. Scores are
// vote frequencies; equal frequencies are ordered by mean |coefficient|,
// then by feature index.
LimeRanking lime_rank(const std::vector<Attribution>& attrs, std::size_t per_instance_k = kLimeDefaultTopK);
LimeRanking lime_rank(const models::Regressor& f, const Eigen::MatrixXd& x_explain, const LimeConfig& cfg,
                      std::size_t per_instance_k = kLimeDefaultTopK);

}  // namespace spex::explainers
