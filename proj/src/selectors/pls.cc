#include "spex/selectors/pls.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace spex::selectors {

PlsModel pls_fit(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, Eigen::Index p) {
  const Eigen::Index n = x.rows(), m = x.cols();
  if (n != y.size()) throw std::invalid_argument("pls_fit: X and y row counts differ");
  if (n < 2) throw std::invalid_argument("pls_fit: at least two samples are required");
  if (p < 1 || p > std::min(n - 1, m)) throw std::invalid_argument("pls_fit: P out of range");

  PlsModel model;
  model.requested = p;
  model.params = spectra::standardize_fit(x);
  model.y_mean = y.mean();
  const double y_sd = std::sqrt((y.array() - model.y_mean).square().mean());
  model.y_std = y_sd < spectra::kStdFloor ? 1.0 : y_sd;

  Eigen::MatrixXd xk = spectra::standardize_apply(model.params, x);
  Eigen::VectorXd yk = (y.array() - model.y_mean) / model.y_std;
  const double tss = yk.squaredNorm();
  const double x_scale = std::max(1.0, xk.norm());

  std::vector<Eigen::VectorXd> w_list, p_list, t_list;
  std::vector<double> q_list, ev_list;
  double prev_r2 = 0.0;
  for (Eigen::Index k = 0; k < p; ++k) {
    Eigen::VectorXd w = xk.transpose() * yk;
    const double wn = w.norm();
    if (!(wn > 1e-12 * x_scale * std::max(1.0, std::sqrt(tss)))) break;
    w /= wn;
    const Eigen::VectorXd t = xk * w;
    const double tt = t.squaredNorm();
    if (!(tt > 1e-24 * x_scale * x_scale)) break;
    const Eigen::VectorXd load = xk.transpose() * t / tt;
    const double q = yk.dot(t) / tt;
    xk.noalias() -= t * load.transpose();
    yk -= q * t;
    const double r2 = tss > 0 ? 1.0 - yk.squaredNorm() / tss : 0.0;
    ev_list.push_back(std::max(0.0, r2 - prev_r2));
    prev_r2 = r2;
    w_list.push_back(std::move(w));
    p_list.push_back(load);
    t_list.push_back(t);
    q_list.push_back(q);
  }

  const auto a = static_cast<Eigen::Index>(w_list.size());
  model.weights.resize(a, m);
  model.x_loadings.resize(a, m);
  model.y_loadings.resize(a);
  model.scores.resize(n, a);
  model.per_component_ev.resize(a);
  for (Eigen::Index k = 0; k < a; ++k) {
    const auto ku = static_cast<std::size_t>(k);
    model.weights.row(k) = w_list[ku].transpose();
    model.x_loadings.row(k) = p_list[ku].transpose();
    model.y_loadings(k) = q_list[ku];
    model.scores.col(k) = t_list[ku];
    model.per_component_ev(k) = ev_list[ku];
  }
  return model;
}

Eigen::VectorXd pls_predict(const PlsModel& model, const Eigen::MatrixXd& x, Eigen::Index p) {
  const Eigen::Index a = p < 0 ? model.n_components() : std::min(p, model.n_components());
  Eigen::VectorXd out = Eigen::VectorXd::Constant(x.rows(), model.y_mean);
  if (a == 0) return out;
  const Eigen::MatrixXd w = model.weights.topRows(a).transpose();    // M x a
  const Eigen::MatrixXd pl = model.x_loadings.topRows(a).transpose(); // M x a
  const Eigen::MatrixXd pw = pl.transpose() * w;                      // a x a, upper triangular
  const Eigen::VectorXd coef = w * pw.partialPivLu().solve(model.y_loadings.head(a));
  out += model.y_std * (spectra::standardize_apply(model.params, x) * coef);
  return out;
}

}  // namespace spex::selectors
