#pragma once

#include <Eigen/Dense>

#include "dpcflow/dpc/cloud_law.hpp"
#include "dpcflow/dpc/hankel.hpp"
#include "dpcflow/linalg/svd.hpp"

namespace dpcflow::dpc {

/// Truncation error bounds on the cloud parameters and control sequence:
///   eps2 >= ||dL_w||, eps3 >= ||dL_u||, eps4 >= ||du_f(k)|| (2-norms).
struct ErrorBudget {
  double eps2 = 0.0;
  double eps3 = 0.0;
  double eps4 = 0.0;
  double alpha = 0.0;       // ||M_w block of the discarded left factors||
  double beta = 0.0;        // ||M_u block of the discarded left factors||
  double s_min = 0.0;       // minimal singular value used in the bound
  bool s_min_from_full = false;  // true: smallest of the full spectrum;
                                 // false: smallest retained value (online)
};

/// Analysis-mode bounds, computed from the full factors of V_p:
///   eps2 = alpha * (r-k) * s_min^-1 * ||Y_f||,
///   eps3 = beta  * (r-k) * s_min^-1 * ||Y_f||,
/// with alpha/beta the 2-norms of the [Y_p;U_p]-rows and U_f-rows of the
/// discarded left-factor columns, and eps4 assembled from eps2/eps3 and the
/// truncated-path quantities. k = r makes every bound zero.
ErrorBudget error_budget(const HankelSet& h, const linalg::SvdFactors& full,
                         int k, const CloudParams& params_hat,
                         const Eigen::VectorXd& u_f_hat,
                         const Eigen::VectorXd& r_f,
                         const Eigen::VectorXd& w_p_now, double lambda);

/// Online variant for when only the truncated factors exist: alpha = beta = 1,
/// r is taken as the largest possible rank, and s_min is the smallest
/// retained singular value. Sound but looser; flagged via s_min_from_full.
ErrorBudget error_budget_online(const HankelSet& h,
                                const linalg::SvdFactors& truncated,
                                const CloudParams& params_hat,
                                const Eigen::VectorXd& u_f_hat,
                                const Eigen::VectorXd& r_f,
                                const Eigen::VectorXd& w_p_now, double lambda);

}  // namespace dpcflow::dpc
