#pragma once

#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "spex/models/kernel.h"
#include "spex/models/regressor.h"
#include "spex/spectra/standardize.h"

namespace spex::models {

inline constexpr double kSupportVectorThreshold = 1e-9;

struct SvrHyperparams {
  KernelSpec kernel{};
  double c = 0.7;
  double epsilon = 0.1;
  long max_iter = 100000;
  double tol = 1e-3;
  // Kernels see raw intensities unless this is set.
  bool standardize_inputs = false;

  void validate() const;

  // poly, d=3, gamma=0.7, coef0=0.1, C=0.7, epsilon=0.1.
  static SvrHyperparams bo_default();
  // Same kernel with the softer epsilon = 0.66 margin.
  static SvrHyperparams fine_tuned();
};

struct SvrFitStatus {
  long iterations = 0;
  bool converged = false;
  // Maximal KKT violation m(alpha) - M(alpha) at exit.
  double kkt_gap = 0.0;
  // Value of the dual objective being maximized,
  //   D(beta) = y'beta - eps * |beta|_1 - 1/2 beta' K beta.
  double dual_objective = 0.0;
};

// Optional per-iteration record of the dual objective.
struct SvrTrace {
  std::vector<double> dual_objective;
};

class SvrModel final : public Regressor {
 public:
  SvrModel() = default;
  SvrModel(KernelSpec kernel, Eigen::MatrixXd support_vectors, Eigen::VectorXd dual_coefs,
           double bias, std::vector<std::size_t> support_indices,
           std::optional<spectra::StandardizationParams> scaling, SvrFitStatus status);

  double predict(const Eigen::VectorXd& x) const override;
  Eigen::VectorXd predict_rows(const Eigen::MatrixXd& x) const override;
  Eigen::Index input_width() const override { return width_; }
  std::string kind() const override { return "svr"; }
  std::size_t complexity() const override { return support_indices_.size(); }
  std::unique_ptr<PointEvaluator> evaluator() const override;

  const KernelSpec& kernel() const { return kernel_; }
  const Eigen::MatrixXd& support_vectors() const { return support_vectors_; }
  const Eigen::VectorXd& dual_coefs() const { return dual_coefs_; }
  double bias() const { return bias_; }
  const std::vector<std::size_t>& support_indices() const { return support_indices_; }
  const std::optional<spectra::StandardizationParams>& scaling() const { return scaling_; }
  const SvrFitStatus& status() const { return status_; }
  void set_input_width(Eigen::Index width) { width_ = width; }

 private:
  friend class SvrEvaluator;
  KernelSpec kernel_{};
  Eigen::MatrixXd support_vectors_;  // in the (possibly standardized) kernel space
  Eigen::VectorXd sv_sq_norms_;
  Eigen::VectorXd dual_coefs_;
  double bias_ = 0.0;
  std::vector<std::size_t> support_indices_;
  std::optional<spectra::StandardizationParams> scaling_;
  SvrFitStatus status_{};
  Eigen::Index width_ = 0;
};

// Epsilon-SVR trained in the dual with SMO working-set updates (second-order
// working-set selection, two coefficients per step).
SvrModel svr_fit(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, const SvrHyperparams& h,
                 SvrTrace* trace = nullptr);

// Number of dual coefficients with magnitude above kSupportVectorThreshold.
std::size_t model_complexity(const SvrModel& model);

// Dual objective D(beta) for arbitrary coefficients (for oracles and tests).
double svr_dual_objective(const Eigen::MatrixXd& kernel, const Eigen::VectorXd& y, double epsilon,
                          const Eigen::VectorXd& beta);

}  // namespace spex::models
