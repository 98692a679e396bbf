#include "dpcflow/dpc/cloud_law.hpp"

#include <stdexcept>

namespace dpcflow::dpc {

using linalg::SvdFactors;
using linalg::TruncationPolicy;

FactorizationProvider dense_provider() {
  return [](const Eigen::MatrixXd& v_p) { return linalg::svd_dense(v_p); };
}

FactorizationProvider workflow_provider(int col, TruncationPolicy policy) {
  return [col, policy](const Eigen::MatrixXd& v_p) {
    return linalg::parallel_svd_by_cols(v_p, col, policy);
  };
}

CloudParams compute_cloud_params(const HankelSet& h,
                                 const TruncationPolicy& policy,
                                 const FactorizationProvider& provider) {
  const SvdFactors factors = provider(h.v_p());
  const SvdFactors trunc = linalg::do_truncate(factors, policy);
  const Eigen::MatrixXd pinv = linalg::pseudo_inverse_from_factors(trunc);

  const Eigen::MatrixXd coeff = h.y_f() * pinv;  // l*N x (l+2m)*N
  const int l = h.output_dim();
  const int m = h.input_dim();
  const int n = h.n_horizon();

  CloudParams p;
  p.l_w = coeff.leftCols((l + m) * n);
  p.l_u = coeff.rightCols(m * n);
  p.a_hat_row = p.l_w.topRows(l);
  p.b_hat_row = p.l_u.topRows(l);
  p.retained_rank = trunc.rank();
  p.degenerate = trunc.degenerate;
  return p;
}

Eigen::VectorXd control_sequence(const CloudParams& params,
                                 const Eigen::VectorXd& w_p_now,
                                 const Eigen::VectorXd& r_f, double lambda) {
  if (lambda <= 0.0) {
    throw std::invalid_argument("control_sequence: lambda must be positive");
  }
  lambda = std::max(lambda, 1e-12);
  if (params.l_w.cols() != w_p_now.size() || params.l_w.rows() != r_f.size()) {
    throw std::invalid_argument("control_sequence: dimension mismatch");
  }
  const Eigen::Index nu = params.l_u.cols();
  Eigen::MatrixXd gram = params.l_u.transpose() * params.l_u;
  gram.diagonal().array() += lambda;
  const Eigen::VectorXd rhs =
      params.l_u.transpose() * (r_f - params.l_w * w_p_now);
  Eigen::VectorXd u = gram.llt().solve(rhs);
  if (!u.allFinite() || u.size() != nu) {
    throw std::runtime_error(
        "control_sequence: non-finite result (retained rank " +
        std::to_string(params.retained_rank) + ", lambda " +
        std::to_string(lambda) + ")");
  }
  return u;
}

CloudPacket make_cloud_packet(const CloudParams& params,
                              const Eigen::VectorXd& u_sequence, int input_dim,
                              std::int64_t data_time) {
  CloudPacket pkt;
  pkt.u_sequence = u_sequence;
  pkt.u_cloud = u_sequence.head(input_dim);
  pkt.a_hat_row = params.a_hat_row;
  pkt.b_hat_row = params.b_hat_row;
  pkt.b_hat = params.b_hat_row.leftCols(input_dim);
  pkt.retained_rank = params.retained_rank;
  pkt.degenerate = params.degenerate;
  pkt.data_time = data_time;
  return pkt;
}

}  // namespace dpcflow::dpc
