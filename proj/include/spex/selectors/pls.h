#pragma once

#include <Eigen/Dense>

#include "spex/spectra/standardize.h"

namespace spex::selectors {

struct PlsModel {
  Eigen::MatrixXd weights;       // W: P x M, unit rows
  Eigen::MatrixXd x_loadings;    // P: P x M
  Eigen::VectorXd y_loadings;    // Q: P
  Eigen::MatrixXd scores;        // Z: N x P
  // Incremental R^2 of the standardized response per component.
  Eigen::VectorXd per_component_ev;
  spectra::StandardizationParams params;
  double y_mean = 0.0;
  double y_std = 1.0;
  Eigen::Index requested = 0;

  Eigen::Index n_components() const { return weights.rows(); }
  bool stopped_early() const { return n_components() < requested; }
};

// PLS1 by NIPALS on internally standardized X and y. Component p uses
// w ∝ X_p' y_p; X and y are deflated by regression on the scores. Stops early
// when the deflated cross-covariance vanishes. Requires 1 <= p <= min(N-1, M).
PlsModel pls_fit(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, Eigen::Index p);

// Predictions from the first `p` components (all when p < 0).
Eigen::VectorXd pls_predict(const PlsModel& model, const Eigen::MatrixXd& x, Eigen::Index p = -1);

}  // namespace spex::selectors
