#pragma once

#include <Eigen/Dense>

#include "spex/models/linear.h"
#include "spex/models/regressor.h"
#include "spex/selectors/ranking.h"
#include "spex/spectra/standardize.h"

namespace spex::explainers {

inline constexpr double kSurrogateRidge = 1e-6;

struct SurrogateModel {
  models::LinearModel linear;  // on standardized inputs
  spectra::StandardizationParams params;
  double fidelity = 0.0;  // R^2 of surrogate vs black-box outputs on the fitting rows

  Eigen::VectorXd predict_rows(const Eigen::MatrixXd& x) const;
};

// Ridge fit of f(x) on standardized x.
SurrogateModel surrogate_fit(const models::Regressor& f, const Eigen::MatrixXd& x,
                             double ridge_penalty = kSurrogateRidge);

// score_j = |w_j| of the standardized surrogate.
selectors::FeatureRanking surrogate_rank(const SurrogateModel& s);

// 1 - SS_res / SS_tot; a constant target yields 1 when matched exactly, else 0.
double r_squared(const Eigen::VectorXd& y, const Eigen::VectorXd& yhat);

}  // namespace spex::explainers
