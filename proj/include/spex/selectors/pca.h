#pragma once

#include <Eigen/Dense>

#include "spex/spectra/standardize.h"

namespace spex::selectors {

struct PcaModel {
  Eigen::MatrixXd loadings;              // P x M, orthonormal rows
  Eigen::VectorXd component_variances;   // P, non-increasing
  Eigen::VectorXd variance_ratios;       // P, component variance / total
  Eigen::VectorXd all_variances;         // full non-increasing spectrum, min(N, M) entries
  double total_variance = 0.0;
  spectra::StandardizationParams params;

  Eigen::Index n_components() const { return loadings.rows(); }
  // Scores of raw inputs (rows = samples).
  Eigen::MatrixXd transform(const Eigen::MatrixXd& x) const;
  // Cumulative explained-variance ratio over the full spectrum.
  Eigen::VectorXd cumulative_ratios() const;
};

// Principal components of the internally standardized inputs, using the
// sample covariance Z'Z / (N - 1). The N x N Gram matrix is decomposed when
// M > N. Each loading is signed so that its largest-magnitude entry is
// positive. Requires 1 <= p <= min(N - 1, M).
PcaModel pca_fit(const Eigen::MatrixXd& x, Eigen::Index p);

}  // namespace spex::selectors
