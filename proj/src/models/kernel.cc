#include "spex/models/kernel.h"

#include <cmath>
#include <stdexcept>

namespace spex::models {

const char* kernel_name(KernelKind kind) {
  switch (kind) {
    case KernelKind::kLinear: return "linear";
    case KernelKind::kPoly: return "poly";
    case KernelKind::kRbf: return "rbf";
    case KernelKind::kSigmoid: return "sigmoid";
  }
  return "unknown";
}

KernelKind parse_kernel(const std::string& s) {
  if (s == "linear") return KernelKind::kLinear;
  if (s == "poly") return KernelKind::kPoly;
  if (s == "rbf") return KernelKind::kRbf;
  if (s == "sigmoid") return KernelKind::kSigmoid;
  throw std::invalid_argument("unknown kernel '" + s + "'");
}

void KernelSpec::validate() const {
  if (kind == KernelKind::kPoly && degree < 1) throw std::invalid_argument("kernel degree must be >= 1");
  if (kind != KernelKind::kLinear && !(gamma > 0)) throw std::invalid_argument("kernel gamma must be > 0");
}

double kernel_eval(const KernelSpec& spec, const Eigen::VectorXd& x, const Eigen::VectorXd& z) {
  if (x.size() != z.size()) throw std::invalid_argument("kernel_eval: dimension mismatch");
  const double dot = x.dot(z);
  const double sq = spec.kind == KernelKind::kRbf ? (x - z).squaredNorm() : 0.0;
  return kernel_from_parts(spec, dot, sq);
}

Eigen::MatrixXd kernel_matrix(const KernelSpec& spec, const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  if (a.cols() != b.cols()) throw std::invalid_argument("kernel_matrix: dimension mismatch");
  Eigen::MatrixXd k = a * b.transpose();
  if (spec.kind == KernelKind::kLinear) return k;
  const Eigen::VectorXd na = a.rowwise().squaredNorm();
  const Eigen::VectorXd nb = b.rowwise().squaredNorm();
  for (Eigen::Index j = 0; j < k.cols(); ++j) {
    for (Eigen::Index i = 0; i < k.rows(); ++i) {
      const double dot = k(i, j);
      k(i, j) = kernel_from_parts(spec, dot, na(i) + nb(j) - 2.0 * dot);
    }
  }
  return k;
}

}  // namespace spex::models
