#include "dpcflow/dpc/error_budget.hpp"

#include <stdexcept>

namespace dpcflow::dpc {

namespace {

double operator_norm(const Eigen::MatrixXd& m) {
  if (m.size() == 0) return 0.0;
  return Eigen::BDCSVD<Eigen::MatrixXd>(m).singularValues()(0);
}

double eps4_from(const CloudParams& params_hat, const Eigen::VectorXd& u_f_hat,
                 const Eigen::VectorXd& r_f, const Eigen::VectorXd& w_p_now,
                 double lambda, double eps2, double eps3) {
  const double lu = operator_norm(params_hat.l_u);
  const double lw = operator_norm(params_hat.l_w);
  const double nu = u_f_hat.norm();
  const double nr = r_f.norm();
  const double nw = w_p_now.norm();
  return (1.0 / lambda) * ((2.0 * eps3 * lu + eps3 * eps3) * nu + eps3 * nr +
                           (eps2 * lu + eps3 * lw + eps2 * eps3) * nw);
}

}  // namespace

ErrorBudget error_budget(const HankelSet& h, const linalg::SvdFactors& full,
                         int k, const CloudParams& params_hat,
                         const Eigen::VectorXd& u_f_hat,
                         const Eigen::VectorXd& r_f,
                         const Eigen::VectorXd& w_p_now, double lambda) {
  if (lambda <= 0.0) {
    throw std::invalid_argument("error_budget: lambda must be positive");
  }
  const int r = full.rank();
  if (k < 1 || k > r) {
    throw std::invalid_argument("error_budget: k must be in [1, r]");
  }
  ErrorBudget b;
  b.s_min = full.s(r - 1);
  b.s_min_from_full = true;
  if (k == r) return b;  // nothing discarded, all bounds zero

  const int l = h.output_dim();
  const int m = h.input_dim();
  const int n = h.n_horizon();
  const Eigen::MatrixXd discarded = full.m_left.rightCols(r - k);
  b.alpha = operator_norm(discarded.topRows((l + m) * n));
  b.beta = operator_norm(discarded.bottomRows(m * n));

  const double yf_norm = operator_norm(h.y_f());
  b.eps2 = b.alpha * (r - k) / b.s_min * yf_norm;
  b.eps3 = b.beta * (r - k) / b.s_min * yf_norm;
  b.eps4 = eps4_from(params_hat, u_f_hat, r_f, w_p_now, lambda, b.eps2, b.eps3);
  return b;
}

ErrorBudget error_budget_online(const HankelSet& h,
                                const linalg::SvdFactors& truncated,
                                const CloudParams& params_hat,
                                const Eigen::VectorXd& u_f_hat,
                                const Eigen::VectorXd& r_f,
                                const Eigen::VectorXd& w_p_now, double lambda) {
  const int k = truncated.rank();
  const long long rows = (h.output_dim() + 2 * h.input_dim()) * h.n_horizon();
  const int r = static_cast<int>(std::min<long long>(rows, h.j_cols()));

  ErrorBudget b;
  b.alpha = 1.0;
  b.beta = 1.0;
  b.s_min = truncated.s(k - 1);
  b.s_min_from_full = false;
  if (k >= r) return b;

  const double yf_norm = operator_norm(h.y_f());
  b.eps2 = b.alpha * (r - k) / b.s_min * yf_norm;
  b.eps3 = b.beta * (r - k) / b.s_min * yf_norm;
  b.eps4 = eps4_from(params_hat, u_f_hat, r_f, w_p_now, lambda, b.eps2, b.eps3);
  return b;
}

}  // namespace dpcflow::dpc
