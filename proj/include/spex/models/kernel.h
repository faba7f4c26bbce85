#pragma once

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Dense>

namespace spex::models {

enum class KernelKind { kLinear, kPoly, kRbf, kSigmoid };

const char* kernel_name(KernelKind kind);
KernelKind parse_kernel(const std::string& s);

struct KernelSpec {
  KernelKind kind = KernelKind::kPoly;
  double gamma = 0.7;
  double coef0 = 0.1;
  int degree = 3;

  void validate() const;
};

// linear: <x,z>; poly: (gamma <x,z> + coef0)^degree; rbf: exp(-gamma |x-z|^2);
// sigmoid: tanh(gamma <x,z> + coef0).
double kernel_eval(const KernelSpec& spec, const Eigen::VectorXd& x, const Eigen::VectorXd& z);

// Kernel value from the inner product and squared distance of the pair.
inline double kernel_from_parts(const KernelSpec& spec, double dot, double sq_dist) {
  switch (spec.kind) {
    case KernelKind::kLinear: return dot;
    case KernelKind::kPoly: {
      const double base = spec.gamma * dot + spec.coef0;
      double r = 1.0;
      for (int d = 0; d < spec.degree; ++d) r *= base;
      return r;
    }
    case KernelKind::kRbf: return std::exp(-spec.gamma * std::max(0.0, sq_dist));
    case KernelKind::kSigmoid: return std::tanh(spec.gamma * dot + spec.coef0);
  }
  return 0.0;
}

// K(i, j) = kernel(row i of a, row j of b).
Eigen::MatrixXd kernel_matrix(const KernelSpec& spec, const Eigen::MatrixXd& a, const Eigen::MatrixXd& b);

}  // namespace spex::models
