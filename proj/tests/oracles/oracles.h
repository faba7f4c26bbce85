#pragma once

#include <functional>

#include <Eigen/Dense>

namespace spex::oracle {

struct QpSolution {
  Eigen::VectorXd beta;  // alpha - alpha*
  double objective = 0.0;
  int newton_steps = 0;
};

// Epsilon-SVR dual by a log-barrier interior-point method on the split
// variables (alpha, alpha*) in [0, C]^2N with sum(alpha - alpha*) = 0.
// Requires a positive semidefinite kernel matrix.
QpSolution svr_dual_barrier(const Eigen::MatrixXd& kernel, const Eigen::VectorXd& y, double c,
                            double epsilon);

// Solves a x = b by Gauss-Jordan elimination with partial pivoting.
Eigen::VectorXd gauss_jordan_solve(Eigen::MatrixXd a, Eigen::VectorXd b);

// Ridge weights and intercept from the centered normal equations.
std::pair<Eigen::VectorXd, double> ridge_normal_equations(const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                                                          double alpha);

// Shapley values by enumerating every coalition with explicit factorial
// weights and direct masked evaluation of f.
Eigen::VectorXd shapley_brute_force(const std::function<double(const Eigen::VectorXd&)>& f,
                                    const Eigen::VectorXd& x, const Eigen::MatrixXd& background);

// Central differences of `loss` with respect to every entry of `params`.
Eigen::VectorXd central_differences(const std::function<double(const Eigen::VectorXd&)>& loss,
                                    const Eigen::VectorXd& params, double step);

}  // namespace spex::oracle
