#include "spex/explainers/surrogate.h"

#include <stdexcept>

namespace spex::explainers {

double r_squared(const Eigen::VectorXd& y, const Eigen::VectorXd& yhat) {
  if (y.size() != yhat.size() || y.size() == 0) throw std::invalid_argument("r_squared: length mismatch");
  const double ss_tot = (y.array() - y.mean()).square().sum();
  const double ss_res = (y - yhat).squaredNorm();
  if (!(ss_tot > 0)) return ss_res > 0 ? 0.0 : 1.0;
  return 1.0 - ss_res / ss_tot;
}

Eigen::VectorXd SurrogateModel::predict_rows(const Eigen::MatrixXd& x) const {
  return linear.predict_rows(spectra::standardize_apply(params, x));
}

SurrogateModel surrogate_fit(const models::Regressor& f, const Eigen::MatrixXd& x, double ridge_penalty) {
  if (x.rows() < 1) throw std::invalid_argument("surrogate_fit: no rows");
  SurrogateModel s;
  s.params = spectra::standardize_fit(x);
  const Eigen::MatrixXd z = spectra::standardize_apply(s.params, x);
  const Eigen::VectorXd target = f.predict_rows(x);
  s.linear = models::ridge_fit(z, target, ridge_penalty);
  s.fidelity = r_squared(target, s.linear.predict_rows(z));
  return s;
}

selectors::FeatureRanking surrogate_rank(const SurrogateModel& s) {
  return selectors::FeatureRanking::from_scores(s.linear.weights().cwiseAbs(), "gs");
}

}  // namespace spex::explainers
