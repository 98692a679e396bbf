#pragma once

#include <Eigen/Dense>

namespace dpcflow::linalg {

/// Largest eigenvalue magnitude of a square matrix.
double spectral_radius(const Eigen::MatrixXd& m);

/// Solve h^T * P * h - P = -q for symmetric positive-definite P by the
/// fixed-point iteration P <- h^T * P * h + q, stopping at ||dP|| < 1e-12
/// or 10000 iterations. Requires spectral_radius(h) < 1 and q symmetric
/// positive-definite; throws std::runtime_error otherwise.
Eigen::MatrixXd solve_discrete_lyapunov(const Eigen::MatrixXd& h,
                                        const Eigen::MatrixXd& q);

}  // namespace dpcflow::linalg
