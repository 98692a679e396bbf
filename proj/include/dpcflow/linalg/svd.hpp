#pragma once

#include <Eigen/Dense>

namespace dpcflow::linalg {

/// Result of a (possibly truncated) singular value decomposition
/// A ~= m_left * diag(s) * n_right^T.
struct SvdFactors {
  Eigen::MatrixXd m_left;   // rows x r, orthonormal columns
  Eigen::VectorXd s;        // r singular values, non-negative, descending
  Eigen::MatrixXd n_right;  // cols x r, orthonormal columns
  bool degenerate = false;  // set when truncation left nothing above threshold

  int rank() const { return static_cast<int>(s.size()); }
  Eigen::Index rows() const { return m_left.rows(); }
  Eigen::Index cols() const { return n_right.rows(); }
  Eigen::MatrixXd reconstruct() const {
    return m_left * s.asDiagonal() * n_right.transpose();
  }
};

/// How many singular values survive a truncation.
struct TruncationPolicy {
  enum class Mode { RankOnly, RelativePrecision, FixedCount };

  Mode mode = Mode::RankOnly;
  double epsilon1 = 1e-15;  // relative threshold, valid range (0, 1]
  int keep_count = 1;       // retained values in FixedCount mode

  static TruncationPolicy rank_only() { return {}; }
  static TruncationPolicy relative(double eps1) {
    return {Mode::RelativePrecision, eps1, 1};
  }
  static TruncationPolicy fixed(int keep) {
    return {Mode::FixedCount, 1e-15, keep};
  }
};

/// Thin dense SVD. Left singular vectors are sign-normalized: the
/// largest-magnitude entry of each column of m_left is non-negative.
/// Throws std::invalid_argument on empty or non-finite input.
SvdFactors svd_dense(const Eigen::MatrixXd& a);

/// Keep the leading singular values selected by the policy. When everything
/// falls below the threshold the result keeps k = 1 and is flagged degenerate.
SvdFactors do_truncate(const SvdFactors& f, const TruncationPolicy& policy);

/// Merge-and-truncate of two column blocks sharing a row count: truncate both
/// inputs, decompose [U1k*S1k  U2l*S2l], and rebuild the right factor as
/// blkdiag(V1k, V2l) * V~. The result is the SVD of the column concatenation
/// of the two reconstructed blocks and is not itself truncated.
SvdFactors block_merge(const SvdFactors& f1, const SvdFactors& f2,
                       const TruncationPolicy& policy);

/// Block count used by parallel_svd_by_cols: round(n/col + 0.45), nearest
/// integer, never below 1. Kept verbatim from the construction it models;
/// for fractional parts of n/col below 0.05 this is one block fewer than
/// the true ceiling and the final block is wider than col.
int block_count_for(Eigen::Index n, int col);

/// Column-partitioned SVD: per-block dense SVDs reduced by pairwise
/// merge-and-truncate with an odd-count carry. With a rank-only policy the
/// retained singular values match svd_dense.
SvdFactors parallel_svd_by_cols(const Eigen::MatrixXd& a, int col,
                                const TruncationPolicy& policy);

/// N * S^-1 * M^T. Singular values below s_max * 1e-13 are dropped before
/// inverting; a zero spectrum yields the zero matrix.
Eigen::MatrixXd pseudo_inverse_from_factors(const SvdFactors& f);

}  // namespace dpcflow::linalg
