#pragma once

#include <Eigen/Dense>

namespace spex::spectra {

inline constexpr double kStdFloor = 1e-12;

// Per-feature centering and scaling fitted on a training partition.
// Features whose standard deviation falls below kStdFloor keep a unit scale,
// so they map to zero after centering.
struct StandardizationParams {
  Eigen::VectorXd means;
  Eigen::VectorXd stds;

  Eigen::Index size() const { return means.size(); }
};

// Population (1/N) moments.
StandardizationParams standardize_fit(const Eigen::MatrixXd& train);
Eigen::MatrixXd standardize_apply(const StandardizationParams& p, const Eigen::MatrixXd& x);
Eigen::VectorXd standardize_apply(const StandardizationParams& p, const Eigen::VectorXd& x);
Eigen::MatrixXd standardize_invert(const StandardizationParams& p, const Eigen::MatrixXd& z);

}  // namespace spex::spectra
