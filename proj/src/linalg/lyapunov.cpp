#include "dpcflow/linalg/lyapunov.hpp"

#include <stdexcept>

namespace dpcflow::linalg {

double spectral_radius(const Eigen::MatrixXd& m) {
  if (m.rows() != m.cols() || m.size() == 0) {
    throw std::invalid_argument("spectral_radius: matrix must be square and non-empty");
  }
  return m.eigenvalues().cwiseAbs().maxCoeff();
}

Eigen::MatrixXd solve_discrete_lyapunov(const Eigen::MatrixXd& h,
                                        const Eigen::MatrixXd& q) {
  if (h.rows() != h.cols() || q.rows() != q.cols() || h.rows() != q.rows()) {
    throw std::invalid_argument("solve_discrete_lyapunov: dimension mismatch");
  }
  if ((q - q.transpose()).norm() > 1e-10 * (1.0 + q.norm())) {
    throw std::invalid_argument("solve_discrete_lyapunov: q must be symmetric");
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> qe(q);
  if (qe.eigenvalues().minCoeff() <= 0.0) {
    throw std::invalid_argument("solve_discrete_lyapunov: q must be positive-definite");
  }
  if (spectral_radius(h) >= 1.0) {
    throw std::runtime_error(
        "solve_discrete_lyapunov: spectral radius >= 1, observer gain invalid");
  }

  Eigen::MatrixXd p = q;
  for (int it = 0; it < 10000; ++it) {
    Eigen::MatrixXd next = h.transpose() * p * h + q;
    const double delta = (next - p).norm();
    p = std::move(next);
    if (delta < 1e-12) break;
  }
  p = 0.5 * (p + p.transpose().eval());

  if ((h.transpose() * p * h - p + q).norm() > 1e-9 * (1.0 + p.norm())) {
    throw std::runtime_error("solve_discrete_lyapunov: iteration did not converge");
  }
  return p;
}

}  // namespace dpcflow::linalg
