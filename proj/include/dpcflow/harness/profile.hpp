#pragma once

#include <cstdint>
#include <vector>

namespace dpcflow::harness {

/// Measured wall time of the four controller stages on one random fixture.
struct StageProfile {
  int dim = 0;
  double svd_ms = 0.0;
  double pinv_ms = 0.0;
  double coeff_ms = 0.0;
  double control_ms = 0.0;
  double total_ms() const { return svd_ms + pinv_ms + coeff_ms + control_ms; }
  double svd_fraction() const {
    const double t = total_ms();
    return t > 0.0 ? svd_ms / t : 0.0;
  }
};

/// Time the four stages (SVD, pseudo-inverse, coefficient matrices, control
/// sequence) on randomly generated state-space fixtures of the given input /
/// output dimensions, averaged over `cycles` controller updates each.
/// cycles = 0 yields an empty report.
std::vector<StageProfile> profile_stages(const std::vector<int>& dims,
                                         int n_horizon, int j_cols, int cycles,
                                         std::uint64_t seed);

}  // namespace dpcflow::harness
