#include "dpcflow/harness/profile.hpp"

#include <chrono>
#include <random>

#include "dpcflow/dpc/cloud_law.hpp"
#include "dpcflow/dpc/hankel.hpp"
#include "dpcflow/plants/lti.hpp"

namespace dpcflow::harness {

namespace {
using Clock = std::chrono::steady_clock;
double elapsed_ms(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}
}  // namespace

std::vector<StageProfile> profile_stages(const std::vector<int>& dims,
                                         int n_horizon, int j_cols, int cycles,
                                         std::uint64_t seed) {
  std::vector<StageProfile> report;
  if (cycles <= 0) return report;

  for (int dim : dims) {
    const plants::LtiModel model = plants::random_discrete_model(dim, dim, seed + dim);
    plants::PlantSim sim(model, Eigen::VectorXd::Zero(dim));
    std::mt19937_64 rng(seed * 31 + dim);
    std::normal_distribution<double> gauss(0.0, 1.0);
    auto random_input = [&] {
      Eigen::VectorXd u(dim);
      for (int i = 0; i < dim; ++i) u(i) = gauss(rng);
      return u;
    };

    const long long need = 2LL * n_horizon + j_cols - 1 + cycles;
    std::vector<Eigen::VectorXd> inputs, outputs;
    for (long long t = 0; t < need; ++t) {
      const Eigen::VectorXd u = random_input();
      outputs.push_back(sim.step(u));
      inputs.push_back(u);
    }
    dpc::HankelSet hankel = dpc::HankelSet::build(
        {inputs.begin(), inputs.begin() + (need - cycles)},
        {outputs.begin(), outputs.begin() + (need - cycles)}, n_horizon, j_cols);

    StageProfile prof;
    prof.dim = dim;
    const Eigen::VectorXd r_f = Eigen::VectorXd::Zero(dim * n_horizon);
    for (int c = 0; c < cycles; ++c) {
      hankel.slide(inputs[need - cycles + c], outputs[need - cycles + c]);

      const auto t0 = Clock::now();
      const Eigen::MatrixXd v_p = hankel.v_p();
      const linalg::SvdFactors trunc =
          linalg::do_truncate(linalg::svd_dense(v_p), linalg::TruncationPolicy::rank_only());
      prof.svd_ms += elapsed_ms(t0);

      const auto t1 = Clock::now();
      const Eigen::MatrixXd pinv = linalg::pseudo_inverse_from_factors(trunc);
      prof.pinv_ms += elapsed_ms(t1);

      const auto t2 = Clock::now();
      const Eigen::MatrixXd coeff = hankel.y_f() * pinv;
      dpc::CloudParams params;
      params.l_w = coeff.leftCols((2 * dim) * n_horizon);
      params.l_u = coeff.rightCols(dim * n_horizon);
      params.retained_rank = trunc.rank();
      prof.coeff_ms += elapsed_ms(t2);

      const auto t3 = Clock::now();
      const Eigen::VectorXd u = dpc::control_sequence(params, hankel.w_p_now(), r_f, 1.0);
      (void)u;
      prof.control_ms += elapsed_ms(t3);
    }
    prof.svd_ms /= cycles;
    prof.pinv_ms /= cycles;
    prof.coeff_ms /= cycles;
    prof.control_ms /= cycles;
    report.push_back(prof);
  }
  return report;
}

}  // namespace dpcflow::harness
