#pragma once

#include <cstdint>

namespace dpcflow::linalg {

/// Flop count of the column-partitioned merge-and-truncate SVD:
///   T(m, n, N) = N*(6*m*s^2 + 16*s^3) + (N-1)*(6*m*k^2 + 176*k^3),  s = n/N,
/// together with the parallelism bound 12*m*n^2/N + 192*n^3/N^2 that holds
/// whenever k <= s.
struct FlopEstimate {
  long long total_flops = 0;
  long long per_block_flops = 0;  // one block SVD, 6*m*s^2 + 16*s^3
  long long merge_flops = 0;      // one merge-and-truncate, 6*m*k^2 + 176*k^3
  long long bound_flops = 0;      // 12*m*n^2/N + 192*n^3/N^2
};

FlopEstimate flop_estimate(long long m, long long n, int n_blocks, long long k);

/// Modeled flop costs of the individual controller stages, used by the
/// deterministic virtual clock. Counts are approximations in the same spirit
/// as flop_estimate, evaluated on actual dimensions.
namespace stage_flops {

double svd(double rows, double cols);                       // 6*m*n^2 + 16*n^3
double merge(double rows, double k1, double k2,
             double v_rows, double rank_out);               // inner SVD + V update
double pseudo_inverse(double rows, double cols, double r);  // N * S^-1 * M^T
double coefficients(double lhs_rows, double inner, double rhs_cols);  // Y_f * V_p^+
double control(double l_rows, double u_len);                // ridge solve

}  // namespace stage_flops

}  // namespace dpcflow::linalg
