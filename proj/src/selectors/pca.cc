#include "spex/selectors/pca.h"

#include <algorithm>
#include <stdexcept>

namespace spex::selectors {
namespace {

void fix_sign(Eigen::MatrixXd& rows, Eigen::Index r) {
  Eigen::Index arg = 0;
  rows.row(r).cwiseAbs().maxCoeff(&arg);
  if (rows(r, arg) < 0) rows.row(r) *= -1.0;
}

// Replaces rows whose norm collapsed (zero-variance directions) with unit
// vectors orthogonal to all previous rows.
void complete_basis(Eigen::MatrixXd& rows, const std::vector<bool>& valid) {
  const Eigen::Index m = rows.cols();
  for (Eigen::Index r = 0; r < rows.rows(); ++r) {
    if (valid[static_cast<std::size_t>(r)]) continue;
    for (Eigen::Index j = 0; j < m; ++j) {
      Eigen::RowVectorXd e = Eigen::RowVectorXd::Unit(m, j);
      for (Eigen::Index k = 0; k < r; ++k) e -= e.dot(rows.row(k)) * rows.row(k);
      for (Eigen::Index k = 0; k < r; ++k) e -= e.dot(rows.row(k)) * rows.row(k);
      if (e.norm() > 0.5) {
        rows.row(r) = e / e.norm();
        break;
      }
    }
  }
}

}  // namespace

Eigen::MatrixXd PcaModel::transform(const Eigen::MatrixXd& x) const {
  return spectra::standardize_apply(params, x) * loadings.transpose();
}

Eigen::VectorXd PcaModel::cumulative_ratios() const {
  Eigen::VectorXd c(all_variances.size());
  double acc = 0.0;
  for (Eigen::Index i = 0; i < c.size(); ++i) {
    acc += all_variances(i);
    c(i) = total_variance > 0 ? acc / total_variance : 0.0;
  }
  return c;
}

PcaModel pca_fit(const Eigen::MatrixXd& x, Eigen::Index p) {
  const Eigen::Index n = x.rows(), m = x.cols();
  if (n < 2) throw std::invalid_argument("pca_fit: at least two samples are required");
  if (p < 1 || p > std::min(n - 1, m)) throw std::invalid_argument("pca_fit: P out of range");

  PcaModel model;
  model.params = spectra::standardize_fit(x);
  const Eigen::MatrixXd z = spectra::standardize_apply(model.params, x);
  const double denom = static_cast<double>(n - 1);

  Eigen::VectorXd eigvals;
  Eigen::MatrixXd vectors(p, m);
  std::vector<bool> valid(static_cast<std::size_t>(p), true);
  if (m <= n) {
    const Eigen::MatrixXd cov = z.transpose() * z / denom;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(cov);
    eigvals = es.eigenvalues().reverse();
    for (Eigen::Index k = 0; k < p; ++k) vectors.row(k) = es.eigenvectors().col(m - 1 - k).transpose();
  } else {
    const Eigen::MatrixXd gram = z * z.transpose() / denom;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(gram);
    eigvals = es.eigenvalues().reverse();
    const double scale_tol = 1e-12 * std::max(1.0, eigvals(0));
    for (Eigen::Index k = 0; k < p; ++k) {
      const double lambda = eigvals(k);
      if (lambda <= scale_tol) {
        valid[static_cast<std::size_t>(k)] = false;
        continue;
      }
      Eigen::VectorXd v = z.transpose() * es.eigenvectors().col(n - 1 - k);
      vectors.row(k) = (v / v.norm()).transpose();
    }
    complete_basis(vectors, valid);
  }
  eigvals = eigvals.cwiseMax(0.0);
  for (Eigen::Index k = 0; k < p; ++k) fix_sign(vectors, k);

  model.loadings = std::move(vectors);
  model.all_variances = eigvals;
  model.total_variance = (z.array().square().sum()) / denom;
  model.component_variances = eigvals.head(p);
  model.variance_ratios = model.total_variance > 0 ? Eigen::VectorXd(model.component_variances / model.total_variance)
                                                   : Eigen::VectorXd::Zero(p);
  return model;
}

}  // namespace spex::selectors
