#include "spex/models/svr.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace spex::models {
namespace {

constexpr double kTau = 1e-12;

// SMO over the 2N-variable form of the epsilon-SVR dual:
//   min_a 1/2 a'Qa + p'a  s.t.  z'a = 0, 0 <= a_t <= C,
// where t < N holds alpha_t (z = +1, p = eps - y_t) and t >= N holds
// alpha*_t (z = -1, p = eps + y_t), and Q_st = z_s z_t K(s mod N, t mod N).
class SmoSolver {
 public:
  SmoSolver(const Eigen::MatrixXd& kernel, const Eigen::VectorXd& y, double c, double epsilon)
      : k_(kernel), n_(kernel.rows()), l_(2 * n_), c_(c), alpha_(Eigen::VectorXd::Zero(l_)),
        grad_(l_), p_(l_), z_(l_) {
    for (Eigen::Index t = 0; t < n_; ++t) {
      z_(t) = 1.0;
      z_(t + n_) = -1.0;
      p_(t) = epsilon - y(t);
      p_(t + n_) = epsilon + y(t);
    }
    grad_ = p_;
  }

  SvrFitStatus solve(long max_iter, double tol, SvrTrace* trace) {
    SvrFitStatus status;
    if (trace) trace->dual_objective.push_back(-objective());
    while (status.iterations < max_iter) {
      Eigen::Index i = -1, j = -1;
      const double gap = select_working_set(i, j);
      status.kkt_gap = gap;
      if (gap < tol || j < 0) {
        status.converged = true;
        break;
      }
      update_pair(i, j);
      ++status.iterations;
      if (trace) trace->dual_objective.push_back(-objective());
    }
    if (!status.converged) {
      Eigen::Index i = -1, j = -1;
      status.kkt_gap = select_working_set(i, j);
      status.converged = status.kkt_gap < tol;
    }
    status.dual_objective = -objective();
    return status;
  }

  // beta_i = alpha_i - alpha*_i
  Eigen::VectorXd beta() const { return alpha_.head(n_) - alpha_.tail(n_); }

  // Decision bias (negated rho), averaged over free variables when present.
  double bias() const {
    double ub = std::numeric_limits<double>::infinity();
    double lb = -std::numeric_limits<double>::infinity();
    double sum_free = 0.0;
    long n_free = 0;
    for (Eigen::Index t = 0; t < l_; ++t) {
      const double yg = z_(t) * grad_(t);
      if (at_upper(t)) {
        if (z_(t) < 0) ub = std::min(ub, yg); else lb = std::max(lb, yg);
      } else if (at_lower(t)) {
        if (z_(t) > 0) ub = std::min(ub, yg); else lb = std::max(lb, yg);
      } else {
        ++n_free;
        sum_free += yg;
      }
    }
    const double rho = n_free > 0 ? sum_free / static_cast<double>(n_free) : 0.5 * (ub + lb);
    return -rho;
  }

 private:
  double q(Eigen::Index s, Eigen::Index t) const { return z_(s) * z_(t) * k_(s % n_, t % n_); }
  double qd(Eigen::Index t) const { return k_(t % n_, t % n_); }
  bool at_upper(Eigen::Index t) const { return alpha_(t) >= c_; }
  bool at_lower(Eigen::Index t) const { return alpha_(t) <= 0.0; }

  double objective() const { return 0.5 * alpha_.dot(grad_ + p_); }

  // Second-order working-set selection. Returns the maximal violation.
  double select_working_set(Eigen::Index& out_i, Eigen::Index& out_j) const {
    double gmax = -std::numeric_limits<double>::infinity();
    double gmax2 = -std::numeric_limits<double>::infinity();
    Eigen::Index gmax_idx = -1, gmin_idx = -1;
    double obj_diff_min = std::numeric_limits<double>::infinity();
    for (Eigen::Index t = 0; t < l_; ++t) {
      if (z_(t) > 0) {
        if (!at_upper(t) && -grad_(t) >= gmax) {
          gmax = -grad_(t);
          gmax_idx = t;
        }
      } else if (!at_lower(t) && grad_(t) >= gmax) {
        gmax = grad_(t);
        gmax_idx = t;
      }
    }
    const Eigen::Index i = gmax_idx;
    for (Eigen::Index t = 0; t < l_; ++t) {
      if (z_(t) > 0) {
        if (at_lower(t)) continue;
        const double grad_diff = gmax + grad_(t);
        gmax2 = std::max(gmax2, grad_(t));
        if (grad_diff > 0 && i >= 0) {
          const double quad = qd(i) + qd(t) - 2.0 * z_(i) * q(i, t);
          const double obj_diff = -(grad_diff * grad_diff) / (quad > 0 ? quad : kTau);
          if (obj_diff <= obj_diff_min) {
            gmin_idx = t;
            obj_diff_min = obj_diff;
          }
        }
      } else {
        if (at_upper(t)) continue;
        const double grad_diff = gmax - grad_(t);
        gmax2 = std::max(gmax2, -grad_(t));
        if (grad_diff > 0 && i >= 0) {
          const double quad = qd(i) + qd(t) + 2.0 * z_(i) * q(i, t);
          const double obj_diff = -(grad_diff * grad_diff) / (quad > 0 ? quad : kTau);
          if (obj_diff <= obj_diff_min) {
            gmin_idx = t;
            obj_diff_min = obj_diff;
          }
        }
      }
    }
    out_i = i;
    out_j = gmin_idx;
    return gmax + gmax2;
  }

  void update_pair(Eigen::Index i, Eigen::Index j) {
    const double old_ai = alpha_(i), old_aj = alpha_(j);
    const double qij = q(i, j);
    double& ai = alpha_(i);
    double& aj = alpha_(j);
    if (z_(i) != z_(j)) {
      double quad = qd(i) + qd(j) + 2.0 * qij;
      if (quad <= 0) quad = kTau;
      const double delta = (-grad_(i) - grad_(j)) / quad;
      const double diff = ai - aj;
      ai += delta;
      aj += delta;
      if (diff > 0) {
        if (aj < 0) { aj = 0; ai = diff; }
      } else {
        if (ai < 0) { ai = 0; aj = -diff; }
      }
      if (diff > 0) {
        if (ai > c_) { ai = c_; aj = c_ - diff; }
      } else {
        if (aj > c_) { aj = c_; ai = c_ + diff; }
      }
    } else {
      double quad = qd(i) + qd(j) - 2.0 * qij;
      if (quad <= 0) quad = kTau;
      const double delta = (grad_(i) - grad_(j)) / quad;
      const double sum = ai + aj;
      ai -= delta;
      aj += delta;
      if (sum > c_) {
        if (ai > c_) { ai = c_; aj = sum - c_; }
      } else {
        if (aj < 0) { aj = 0; ai = sum; }
      }
      if (sum > c_) {
        if (aj > c_) { aj = c_; ai = sum - c_; }
      } else {
        if (ai < 0) { ai = 0; aj = sum; }
      }
    }
    const double dai = ai - old_ai, daj = aj - old_aj;
    for (Eigen::Index t = 0; t < l_; ++t) grad_(t) += q(i, t) * dai + q(j, t) * daj;
  }

  const Eigen::MatrixXd& k_;
  Eigen::Index n_, l_;
  double c_;
  Eigen::VectorXd alpha_, grad_, p_, z_;
};

}  // namespace

class SvrEvaluator final : public PointEvaluator {
 public:
  explicit SvrEvaluator(const SvrModel& m) : m_(m) {}

  void reset(const Eigen::VectorXd& x) override {
    z_ = m_.scaling_ ? spectra::standardize_apply(*m_.scaling_, x) : x;
    dots_ = m_.support_vectors_ * z_;
    sq_norm_ = z_.squaredNorm();
  }

  void set(Eigen::Index feature, double value) override {
    if (m_.scaling_) value = (value - m_.scaling_->means(feature)) / m_.scaling_->stds(feature);
    const double delta = value - z_(feature);
    if (delta == 0.0) return;
    dots_.noalias() += delta * m_.support_vectors_.col(feature);
    sq_norm_ += value * value - z_(feature) * z_(feature);
    z_(feature) = value;
  }

  double value() override {
    double f = m_.bias_;
    for (Eigen::Index i = 0; i < dots_.size(); ++i) {
      const double sq = m_.sv_sq_norms_(i) + sq_norm_ - 2.0 * dots_(i);
      f += m_.dual_coefs_(i) * kernel_from_parts(m_.kernel_, dots_(i), sq);
    }
    return f;
  }

 private:
  const SvrModel& m_;
  Eigen::VectorXd z_, dots_;
  double sq_norm_ = 0.0;
};

void SvrHyperparams::validate() const {
  kernel.validate();
  if (!(c > 0)) throw std::invalid_argument("svr: C must be positive");
  if (!(epsilon >= 0)) throw std::invalid_argument("svr: epsilon must be non-negative");
  if (max_iter < 1) throw std::invalid_argument("svr: max_iter must be >= 1");
  if (!(tol > 0)) throw std::invalid_argument("svr: tol must be positive");
}

SvrHyperparams SvrHyperparams::bo_default() {
  SvrHyperparams h;
  h.kernel = {KernelKind::kPoly, 0.7, 0.1, 3};
  h.c = 0.7;
  h.epsilon = 0.1;
  h.max_iter = 100000;
  return h;
}

SvrHyperparams SvrHyperparams::fine_tuned() {
  SvrHyperparams h = bo_default();
  h.epsilon = 0.66;
  return h;
}

SvrModel::SvrModel(KernelSpec kernel, Eigen::MatrixXd support_vectors, Eigen::VectorXd dual_coefs,
                   double bias, std::vector<std::size_t> support_indices,
                   std::optional<spectra::StandardizationParams> scaling, SvrFitStatus status)
    : kernel_(kernel), support_vectors_(std::move(support_vectors)), dual_coefs_(std::move(dual_coefs)),
      bias_(bias), support_indices_(std::move(support_indices)), scaling_(std::move(scaling)),
      status_(status), width_(support_vectors_.cols()) {
  sv_sq_norms_ = support_vectors_.rowwise().squaredNorm();
  if (scaling_) width_ = scaling_->size();
}

double SvrModel::predict(const Eigen::VectorXd& x) const {
  if (x.size() != width_) throw std::invalid_argument("svr predict: input width mismatch");
  const Eigen::VectorXd z = scaling_ ? spectra::standardize_apply(*scaling_, x) : x;
  const Eigen::VectorXd dots = support_vectors_ * z;
  const double sq_norm = z.squaredNorm();
  double f = bias_;
  for (Eigen::Index i = 0; i < dots.size(); ++i) {
    f += dual_coefs_(i) * kernel_from_parts(kernel_, dots(i), sv_sq_norms_(i) + sq_norm - 2.0 * dots(i));
  }
  return f;
}

Eigen::VectorXd SvrModel::predict_rows(const Eigen::MatrixXd& x) const {
  if (x.cols() != width_) throw std::invalid_argument("svr predict: input width mismatch");
  if (support_vectors_.rows() == 0) return Eigen::VectorXd::Constant(x.rows(), bias_);
  const Eigen::MatrixXd z = scaling_ ? spectra::standardize_apply(*scaling_, x) : x;
  const Eigen::MatrixXd k = kernel_matrix(kernel_, z, support_vectors_);
  return (k * dual_coefs_).array() + bias_;
}

std::unique_ptr<PointEvaluator> SvrModel::evaluator() const {
  return std::make_unique<SvrEvaluator>(*this);
}

SvrModel svr_fit(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, const SvrHyperparams& h,
                 SvrTrace* trace) {
  h.validate();
  if (x.rows() < 2) throw std::invalid_argument("svr_fit: at least two samples are required");
  if (x.rows() != y.size()) throw std::invalid_argument("svr_fit: X and y row counts differ");
  if (!x.allFinite() || !y.allFinite()) throw std::invalid_argument("svr_fit: non-finite input");

  std::optional<spectra::StandardizationParams> scaling;
  Eigen::MatrixXd z;
  if (h.standardize_inputs) {
    scaling = spectra::standardize_fit(x);
    z = spectra::standardize_apply(*scaling, x);
  }
  const Eigen::MatrixXd& xs = h.standardize_inputs ? z : x;
  const Eigen::MatrixXd k = kernel_matrix(h.kernel, xs, xs);

  SmoSolver solver(k, y, h.c, h.epsilon);
  const SvrFitStatus status = solver.solve(h.max_iter, h.tol, trace);
  const Eigen::VectorXd beta = solver.beta();

  std::vector<std::size_t> support;
  for (Eigen::Index i = 0; i < beta.size(); ++i) {
    if (std::abs(beta(i)) > kSupportVectorThreshold) support.push_back(static_cast<std::size_t>(i));
  }
  Eigen::MatrixXd sv(static_cast<Eigen::Index>(support.size()), xs.cols());
  Eigen::VectorXd coefs(static_cast<Eigen::Index>(support.size()));
  for (std::size_t s = 0; s < support.size(); ++s) {
    const auto r = static_cast<Eigen::Index>(support[s]);
    sv.row(static_cast<Eigen::Index>(s)) = xs.row(r);
    coefs(static_cast<Eigen::Index>(s)) = beta(r);
  }
  SvrModel model(h.kernel, std::move(sv), std::move(coefs), solver.bias(), std::move(support),
                 std::move(scaling), status);
  model.set_input_width(x.cols());
  return model;
}

std::size_t model_complexity(const SvrModel& model) {
  std::size_t count = 0;
  for (Eigen::Index i = 0; i < model.dual_coefs().size(); ++i) {
    if (std::abs(model.dual_coefs()(i)) > kSupportVectorThreshold) ++count;
  }
  return count;
}

double svr_dual_objective(const Eigen::MatrixXd& kernel, const Eigen::VectorXd& y, double epsilon,
                          const Eigen::VectorXd& beta) {
  return y.dot(beta) - epsilon * beta.lpNorm<1>() - 0.5 * beta.dot(kernel * beta);
}

}  // namespace spex::models
