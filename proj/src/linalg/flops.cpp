#include "dpcflow/linalg/flops.hpp"

#include <cmath>
#include <stdexcept>

namespace dpcflow::linalg {

FlopEstimate flop_estimate(long long m, long long n, int n_blocks, long long k) {
  if (m < 1 || n < 1 || n_blocks < 1 || k < 0) {
    throw std::invalid_argument("flop_estimate: dimensions must be positive");
  }
  const double md = static_cast<double>(m);
  const double nd = static_cast<double>(n);
  const double nb = static_cast<double>(n_blocks);
  const double kd = static_cast<double>(k);
  const double s = nd / nb;

  const double per_block = 6.0 * md * s * s + 16.0 * s * s * s;
  const double merge = 6.0 * md * kd * kd + 176.0 * kd * kd * kd;
  const double total = nb * per_block + (nb - 1.0) * merge;
  const double bound = 12.0 * md * nd * nd / nb + 192.0 * nd * nd * nd / (nb * nb);

  FlopEstimate est;
  est.per_block_flops = std::llround(per_block);
  est.merge_flops = std::llround(merge);
  est.total_flops = std::llround(total);
  est.bound_flops = std::llround(bound);
  return est;
}

namespace stage_flops {

double svd(double rows, double cols) {
  return 6.0 * rows * cols * cols + 16.0 * cols * cols * cols;
}

double merge(double rows, double k1, double k2, double v_rows, double rank_out) {
  const double w = k1 + k2;
  return svd(rows, w) + 2.0 * v_rows * w * rank_out;
}

double pseudo_inverse(double rows, double cols, double r) {
  return 2.0 * cols * r * rows + r;
}

double coefficients(double lhs_rows, double inner, double rhs_cols) {
  return 2.0 * lhs_rows * inner * rhs_cols;
}

double control(double l_rows, double u_len) {
  const double gram = 2.0 * u_len * u_len * l_rows;
  const double chol = u_len * u_len * u_len / 3.0;
  const double rhs = 2.0 * l_rows * u_len + 2.0 * l_rows;
  const double solve = 2.0 * u_len * u_len;
  return gram + chol + rhs + solve;
}

}  // namespace stage_flops

}  // namespace dpcflow::linalg
