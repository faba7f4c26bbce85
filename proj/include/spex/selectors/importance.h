#pragma once

#include <vector>

#include <Eigen/Dense>

#include "spex/models/forest.h"
#include "spex/models/linear.h"
#include "spex/selectors/pca.h"
#include "spex/selectors/pls.h"
#include "spex/selectors/ranking.h"

namespace spex::selectors {

// score_j = sum_p EV_p |loading_pj|. PCA weights its loadings by variance
// ratio, PLS weights its weight vectors by incremental R^2.
FeatureRanking component_feature_scores(const PcaModel& model);
FeatureRanking component_feature_scores(const PlsModel& model);

// Per-feature sum of the weighted variance decrease of every split on that
// feature, each tree scaled by its root sample count, normalized to sum 1.
// A forest with no splits ranks every feature zero.
FeatureRanking rf_rank(const models::RfModel& model);

// score_j = |w_j|.
FeatureRanking ridge_rank(const models::LinearModel& model);

// Standardizes x internally, fits ridge with `alpha`, ranks by |w|.
FeatureRanking ridge_rank_fit(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, double alpha);

// Smallest P with maximal concave curvature of a cumulative curve c_1..c_n,
// i.e. argmax_p -(c_{p+1} - 2 c_p + c_{p-1}) for p in [1, n-1] with c_0 = 0.
// Ties go to the smaller P. Curves with fewer than two points return their size.
Eigen::Index elbow_index(const Eigen::VectorXd& cumulative);

enum class ComponentMethod { kPca, kPls };

struct ComponentChoice {
  Eigen::Index p = 1;
  // PCA: cumulative explained-variance ratios; PLS: validation MSE per P.
  Eigen::VectorXd curve;
};

// PCA picks the elbow of the cumulative explained variance; PLS picks the P
// with the lowest validation MSE (smallest P within a relative 1e-6 of the
// minimum). max_p is clamped to min(N - 1, M).
ComponentChoice choose_components(ComponentMethod method, const Eigen::MatrixXd& x_train,
                                  const Eigen::VectorXd& y_train, Eigen::Index max_p,
                                  const Eigen::MatrixXd& x_val, const Eigen::VectorXd& y_val);

}  // namespace spex::selectors
