#include "spex/spectra/standardize.h"

#include <cmath>
#include <stdexcept>

namespace spex::spectra {

StandardizationParams standardize_fit(const Eigen::MatrixXd& train) {
  if (train.rows() == 0) throw std::invalid_argument("standardize_fit on an empty partition");
  StandardizationParams p;
  p.means = train.colwise().mean().transpose();
  p.stds.resize(train.cols());
  const double n = static_cast<double>(train.rows());
  for (Eigen::Index j = 0; j < train.cols(); ++j) {
    const double var = (train.col(j).array() - p.means(j)).square().sum() / n;
    const double sd = std::sqrt(var);
    p.stds(j) = sd < kStdFloor ? 1.0 : sd;
  }
  return p;
}

Eigen::MatrixXd standardize_apply(const StandardizationParams& p, const Eigen::MatrixXd& x) {
  if (x.cols() != p.size()) throw std::invalid_argument("standardize_apply: width mismatch");
  return (x.rowwise() - p.means.transpose()).array().rowwise() / p.stds.transpose().array();
}

Eigen::VectorXd standardize_apply(const StandardizationParams& p, const Eigen::VectorXd& x) {
  if (x.size() != p.size()) throw std::invalid_argument("standardize_apply: width mismatch");
  return (x - p.means).cwiseQuotient(p.stds);
}

Eigen::MatrixXd standardize_invert(const StandardizationParams& p, const Eigen::MatrixXd& z) {
  if (z.cols() != p.size()) throw std::invalid_argument("standardize_invert: width mismatch");
  return (z.array().rowwise() * p.stds.transpose().array()).matrix().rowwise() + p.means.transpose();
}

}  // namespace spex::spectra
