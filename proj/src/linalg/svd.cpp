#include "dpcflow/linalg/svd.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace dpcflow::linalg {

namespace {

// Make the largest-magnitude entry of each left column non-negative so the
// factorization is deterministic across algebraically equivalent routes.
void normalize_signs(Eigen::MatrixXd& u, Eigen::MatrixXd& v) {
  for (Eigen::Index c = 0; c < u.cols(); ++c) {
    Eigen::Index imax = 0;
    u.col(c).cwiseAbs().maxCoeff(&imax);
    if (u(imax, c) < 0.0) {
      u.col(c) = -u.col(c);
      v.col(c) = -v.col(c);
    }
  }
}

void validate_policy(const TruncationPolicy& policy) {
  if (policy.mode == TruncationPolicy::Mode::RelativePrecision &&
      !(policy.epsilon1 > 0.0 && policy.epsilon1 <= 1.0)) {
    throw std::invalid_argument("truncation policy: epsilon1 must be in (0, 1]");
  }
  if (policy.mode == TruncationPolicy::Mode::FixedCount && policy.keep_count < 1) {
    throw std::invalid_argument("truncation policy: keep_count must be >= 1");
  }
}

}  // namespace

SvdFactors svd_dense(const Eigen::MatrixXd& a) {
  if (a.size() == 0) {
    throw std::invalid_argument("svd_dense: empty matrix");
  }
  if (!a.allFinite()) {
    throw std::invalid_argument("svd_dense: input has non-finite entries");
  }
  Eigen::BDCSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  SvdFactors f;
  f.m_left = svd.matrixU();
  f.s = svd.singularValues();
  f.n_right = svd.matrixV();
  normalize_signs(f.m_left, f.n_right);
  return f;
}

SvdFactors do_truncate(const SvdFactors& f, const TruncationPolicy& policy) {
  validate_policy(policy);
  const int r = f.rank();
  if (r == 0) {
    throw std::invalid_argument("do_truncate: empty factors");
  }
  const double s_max = f.s(0);
  int k = 0;
  switch (policy.mode) {
    case TruncationPolicy::Mode::RankOnly: {
      const double thresh =
          s_max * static_cast<double>(std::max(f.rows(), f.cols())) * 2.220446049250313e-16;
      while (k < r && f.s(k) > thresh) ++k;
      break;
    }
    case TruncationPolicy::Mode::RelativePrecision: {
      const double thresh = s_max * policy.epsilon1;
      while (k < r && f.s(k) >= thresh && f.s(k) > 0.0) ++k;
      break;
    }
    case TruncationPolicy::Mode::FixedCount:
      k = std::min(policy.keep_count, r);
      break;
  }
  bool degenerate = f.degenerate;
  if (k == 0) {
    k = 1;
    degenerate = true;
  }
  SvdFactors out;
  out.m_left = f.m_left.leftCols(k);
  out.s = f.s.head(k);
  out.n_right = f.n_right.leftCols(k);
  out.degenerate = degenerate;
  return out;
}

SvdFactors block_merge(const SvdFactors& f1, const SvdFactors& f2,
                       const TruncationPolicy& policy) {
  if (f1.rows() != f2.rows()) {
    throw std::invalid_argument("block_merge: row count mismatch");
  }
  const SvdFactors t1 = do_truncate(f1, policy);
  const SvdFactors t2 = do_truncate(f2, policy);
  const int k1 = t1.rank();
  const int k2 = t2.rank();

  Eigen::MatrixXd e(f1.rows(), k1 + k2);
  e.leftCols(k1) = t1.m_left * t1.s.asDiagonal();
  e.rightCols(k2) = t2.m_left * t2.s.asDiagonal();

  SvdFactors inner = svd_dense(e);

  // V = blkdiag(V1k, V2l) * V~, applied blockwise to keep it cheap.
  Eigen::MatrixXd v(t1.cols() + t2.cols(), inner.rank());
  v.topRows(t1.cols()) = t1.n_right * inner.n_right.topRows(k1);
  v.bottomRows(t2.cols()) = t2.n_right * inner.n_right.bottomRows(k2);

  SvdFactors out;
  out.m_left = std::move(inner.m_left);
  out.s = std::move(inner.s);
  out.n_right = std::move(v);
  out.degenerate = t1.degenerate && t2.degenerate;
  return out;
}

int block_count_for(Eigen::Index n, int col) {
  if (col < 1) {
    throw std::invalid_argument("block_count_for: col must be >= 1");
  }
  const long long nc = std::llround(static_cast<double>(n) / col + 0.45);
  return static_cast<int>(std::max(1LL, nc));
}

SvdFactors parallel_svd_by_cols(const Eigen::MatrixXd& a, int col,
                                const TruncationPolicy& policy) {
  if (a.size() == 0) {
    throw std::invalid_argument("parallel_svd_by_cols: empty matrix");
  }
  const Eigen::Index n = a.cols();
  const int n_blocks = block_count_for(n, col);

  // First n_blocks-1 blocks have width col; the last takes the remainder.
  std::vector<SvdFactors> blocks;
  blocks.reserve(n_blocks);
  Eigen::Index c0 = 0;
  for (int b = 0; b < n_blocks; ++b) {
    const Eigen::Index width = (b + 1 < n_blocks) ? col : n - c0;
    blocks.push_back(svd_dense(a.middleCols(c0, width)));
    c0 += width;
  }

  // DoMergeOfBlocks: pairwise reduction, odd count carries the last element.
  while (blocks.size() > 1) {
    std::vector<SvdFactors> next;
    next.reserve((blocks.size() + 1) / 2);
    size_t i = 0;
    for (; i + 1 < blocks.size(); i += 2) {
      next.push_back(block_merge(blocks[i], blocks[i + 1], policy));
    }
    if (i < blocks.size()) {
      next.push_back(std::move(blocks[i]));
    }
    blocks = std::move(next);
  }
  return blocks.front();
}

Eigen::MatrixXd pseudo_inverse_from_factors(const SvdFactors& f) {
  const int r = f.rank();
  if (r == 0 || f.m_left.size() == 0) {
    throw std::invalid_argument("pseudo_inverse_from_factors: empty factors");
  }
  const double s_max = f.s(0);
  if (s_max <= 0.0) {
    return Eigen::MatrixXd::Zero(f.cols(), f.rows());
  }
  const double floor = s_max * 1e-13;
  int keep = 0;
  while (keep < r && f.s(keep) >= floor) ++keep;
  return f.n_right.leftCols(keep) *
         f.s.head(keep).cwiseInverse().asDiagonal() *
         f.m_left.leftCols(keep).transpose();
}

}  // namespace dpcflow::linalg
