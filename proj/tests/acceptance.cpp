// Acceptance suite: one test case per criterion, each printing a PASS/FAIL
// line. Tolerances and thresholds are pinned in code.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <chrono>
#include <cstdio>
#include <random>

#include "dpcflow/dpc/error_budget.hpp"
#include "dpcflow/edge/dob.hpp"
#include "dpcflow/harness/experiment.hpp"
#include "dpcflow/harness/profile.hpp"
#include "dpcflow/harness/sweep.hpp"
#include "dpcflow/linalg/flops.hpp"
#include "dpcflow/plants/lti.hpp"
#include "dpcflow/workflow/engine.hpp"
#include "test_util.hpp"

using namespace dpcflow;
using Eigen::MatrixXd;
using Eigen::VectorXd;
using harness::ExperimentConfig;
using harness::Method;

namespace {

void report(int criterion, bool ok, const std::string& what) {
  std::printf("[C%d] %s - %s\n", criterion, ok ? "PASS" : "FAIL", what.c_str());
  std::fflush(stdout);
  CHECK_MESSAGE(ok, "criterion ", criterion, ": ", what);
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

ExperimentConfig ball_beam_cfg() {
  ExperimentConfig cfg;
  cfg.plant = "ball_beam";
  cfg.method = Method::WorkflowDob;
  cfg.n_horizon = 30;
  cfg.j_cols = 1500;
  cfg.lambda = 0.008;
  cfg.truncation = "relative";
  cfg.epsilon1 = 1e-15;
  cfg.observer_gain = 50.0;
  cfg.control_period_s = 0.02;
  cfg.duration_steps = 400;
  cfg.mpt = 4;
  cfg.seed = 1;
  cfg.warmup_dither = 1e-3;
  cfg.measurement_noise = 1e-5;
  cfg.fabric_base_latency_us = 1000.0;
  cfg.fabric_bandwidth_bps = 1.25e9;
  cfg.fabric_serialize_bps = 2e9;
  cfg.fabric_deserialize_bps = 2e9;
  cfg.compute_rate_flops = 2.2e12;
  return cfg;
}

ExperimentConfig vehicle_cfg(double speed_kmh) {
  ExperimentConfig cfg;
  cfg.plant = "vehicle";
  cfg.method = Method::WorkflowDob;
  cfg.n_horizon = 20;
  cfg.j_cols = 1000;
  cfg.lambda = 0.15;
  cfg.truncation = "relative";
  cfg.epsilon1 = speed_kmh >= 25.0 ? 1e-2 : 1e-4;
  cfg.observer_gain = -0.2;
  cfg.control_period_s = 0.02;
  cfg.duration_steps = 500;
  cfg.mpt = 4;
  cfg.seed = 1;
  cfg.warmup_dither = 1e-3;
  cfg.measurement_noise = 1e-5;
  cfg.vehicle_speed_kmh = speed_kmh;
  cfg.fabric_base_latency_us = 2000.0;
  cfg.fabric_bandwidth_bps = 1.25e9;
  cfg.fabric_serialize_bps = 2e9;
  cfg.fabric_deserialize_bps = 2e9;
  cfg.compute_rate_flops = 3.8e11;
  return cfg;
}

ExperimentConfig power_cfg() {
  ExperimentConfig cfg;
  cfg.plant = "power_network";
  cfg.method = Method::WorkflowDob;
  cfg.n_horizon = 6;
  cfg.j_cols = 220;
  cfg.lambda = 0.05;
  cfg.truncation = "fixed";
  cfg.keep_count = 100;
  cfg.observer_gain = 0.5;
  cfg.control_period_s = 0.05;
  cfg.duration_steps = 300;
  cfg.mpt = 10;
  cfg.seed = 1;
  cfg.realtime = false;
  cfg.warmup_dither = 1e-2;
  cfg.measurement_noise = 1e-5;
  cfg.power_edge_file = std::string(DPCFLOW_SOURCE_DIR) + "/data/ieee39_edges.txt";
  cfg.fabric_base_latency_us = 500.0;
  cfg.fabric_bandwidth_bps = 1.25e9;
  cfg.fabric_serialize_bps = 2e9;
  cfg.fabric_deserialize_bps = 2e9;
  cfg.compute_rate_flops = 6.5e8;
  return cfg;
}

void make_on_time(ExperimentConfig& cfg) {
  cfg.compute_rate_flops = 1e16;
  cfg.fabric_base_latency_us = 1.0;
}

/// Scalar edge loop under an injected input disturbance (nominal model known
/// exactly to the observer), returning the estimation-error history.
struct ScalarDobLoop {
  int n = 3;
  double a = 0.2, b_i = 0.05, b = 1.0, gain = 0.5;

  std::vector<double> run(const std::function<double(long long)>& dist,
                          long long steps) const {
    edge::CloudPacket pkt;
    pkt.a_hat_row = MatrixXd(1, 2 * n);
    pkt.a_hat_row.leftCols(n).setConstant(a);
    pkt.a_hat_row.rightCols(n).setConstant(b_i);
    pkt.b_hat_row = MatrixXd::Zero(1, n);
    pkt.b_hat_row(0, 0) = b;
    pkt.b_hat = MatrixXd::Constant(1, 1, b);
    pkt.u_cloud = VectorXd::Zero(1);
    edge::EdgeBuffer buf(n, 1, 1);
    edge::DobState dob = edge::make_dob(MatrixXd::Constant(1, 1, gain), 1, 1);
    std::vector<double> err;
    double y = 0.0;
    std::deque<double> yh(n, 0.0), uh(n, 0.0);
    for (long long k = 1; k <= steps; ++k) {
      const double d = dist(k);
      dob.active = k > n;
      const VectorXd d_hat = edge::dob_update(dob, buf, pkt, VectorXd::Constant(1, y));
      const VectorXd u = edge::composite_control(pkt, d_hat, k, n);
      err.push_back(d - d_hat(0));
      buf.push_output(VectorXd::Constant(1, y));
      edge::dob_commit(dob, buf, pkt, u);
      buf.push_input(u);
      yh.pop_front();
      yh.push_back(y);
      double next = 0.0;
      for (int i = 0; i < n; ++i) next += a * yh[i] + b_i * uh[i];
      next += b * (u(0) + d);
      uh.pop_front();
      uh.push_back(u(0));
      y = next;
    }
    return err;
  }
};

}  // namespace

TEST_CASE("C1 svd oracle suite") {
  const auto t0 = std::chrono::steady_clock::now();
  std::mt19937_64 rng(42);
  int checked = 0;
  double worst_sv = 0.0, worst_pinv = 0.0;
  bool ok = true;
  for (int trial = 0; trial < 200; ++trial) {
    const int rows = 3 + static_cast<int>(rng() % 198);   // <= 200
    const int cols = 1 + static_cast<int>(rng() % 64);    // <= 64
    const int maxr = std::min(rows, cols);
    MatrixXd a;
    if (trial % 3 == 0 && maxr >= 2) {
      const int rank = 1 + static_cast<int>(rng() % (maxr / 2 + 1));
      a = test_util::random_low_rank(rows, cols, rank, rng());
    } else {
      a = test_util::random_matrix(rows, cols, rng());
    }
    const int col = 1 + static_cast<int>(rng() % cols);
    const auto policy = linalg::TruncationPolicy::rank_only();
    const linalg::SvdFactors dense =
        linalg::do_truncate(linalg::svd_dense(a), policy);
    const linalg::SvdFactors par =
        linalg::do_truncate(linalg::parallel_svd_by_cols(a, col, policy), policy);

    const int n_sv = std::max(dense.rank(), par.rank());
    for (int i = 0; i < n_sv; ++i) {
      const double sd = i < dense.rank() ? dense.s(i) : 0.0;
      const double sp = i < par.rank() ? par.s(i) : 0.0;
      worst_sv = std::max(worst_sv, std::abs(sd - sp));
    }
    const MatrixXd pd = linalg::pseudo_inverse_from_factors(dense);
    const MatrixXd pp = linalg::pseudo_inverse_from_factors(par);
    const double scale = std::max(1.0, pd.cwiseAbs().maxCoeff());
    worst_pinv = std::max(worst_pinv, (pd - pp).cwiseAbs().maxCoeff() / scale);
    checked++;
  }
  const double elapsed = seconds_since(t0);
  ok = checked == 200 && worst_sv <= 1e-8 && worst_pinv <= 1e-7 && elapsed < 60.0;
  report(1, ok,
         "200 seeded matrices: singular values within 1e-8 (worst " +
             std::to_string(worst_sv) + "), pseudo-inverse within 1e-7 (worst " +
             std::to_string(worst_pinv) + "), runtime " + std::to_string(elapsed) + " s");
}

TEST_CASE("C2 dual-path controller equivalence on the three plants") {
  bool all_ok = true;
  std::string detail;
  for (int plant = 0; plant < 3; ++plant) {
    ExperimentConfig wf = plant == 0 ? ball_beam_cfg()
                          : plant == 1 ? vehicle_cfg(30.0)
                                       : power_cfg();
    wf.method = Method::Workflow;
    wf.truncation = "relative";
    wf.epsilon1 = 1e-15;
    wf.duration_steps = 500;
    // Numerical-equivalence oracle: an on-time fabric so both paths apply
    // identical inputs, and exact data for the low-rank plants (sensor noise
    // lifts a cluster of near-equal tiny singular values whose basis differs
    // between algebraically equivalent factorization routes). The power model
    // is structurally full row rank; there its configured noise floor is what
    // keeps the spectrum tail well conditioned.
    if (plant != 2) wf.measurement_noise = 0.0;
    make_on_time(wf);
    ExperimentConfig nat = wf;
    nat.method = Method::Native;
    const harness::RunRecord a = harness::run_experiment(nat);
    const harness::RunRecord b = harness::run_experiment(wf);
    double worst = 0.0;
    const size_t steps = std::min(a.rows.size(), b.rows.size());
    for (size_t i = 0; i < steps; ++i) {
      const double scale = 1.0 + a.rows[i].u_cloud.norm();
      worst = std::max(worst, (a.rows[i].u_cloud - b.rows[i].u_cloud).norm() / scale);
    }
    const bool ok = steps == 500 && worst <= 1e-6 && !a.summary.diverged &&
                    !b.summary.diverged;
    all_ok = all_ok && ok;
    detail += wf.plant + " worst " + std::to_string(worst) + "; ";
  }
  report(2, all_ok, "u_cloud dense vs workflow within 1e-6 relative over 500 steps: " + detail);
}

TEST_CASE("C3 bound soundness over 100 seeded trials") {
  int violations = 0;
  int trials = 0;
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    const int dim = 2, n = 3, j = 20;
    plants::LtiModel model = plants::random_discrete_model(dim, dim, seed);
    plants::PlantSim sim(model, VectorXd::Zero(dim));
    std::mt19937_64 rng(seed + 7000);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::vector<VectorXd> ins, outs;
    for (int t = 0; t < 2 * n + j - 1; ++t) {
      VectorXd u(dim);
      for (int i = 0; i < dim; ++i) u(i) = gauss(rng);
      outs.push_back(sim.step(u));
      ins.push_back(u);
    }
    const dpc::HankelSet h = dpc::HankelSet::build(ins, outs, n, j);
    const linalg::SvdFactors full = linalg::do_truncate(
        linalg::svd_dense(h.v_p()), linalg::TruncationPolicy::rank_only());
    const int r = full.rank();
    const double lambda = 0.5;
    const VectorXd w = h.w_p_now();
    const VectorXd r_f = test_util::random_vector(dim * n, seed + 9000);
    const MatrixXd y_f = h.y_f();
    auto params_at = [&](int keep) {
      const linalg::SvdFactors t =
          linalg::do_truncate(full, linalg::TruncationPolicy::fixed(keep));
      const MatrixXd coeff = y_f * linalg::pseudo_inverse_from_factors(t);
      dpc::CloudParams p;
      p.l_w = coeff.leftCols((dim + dim) * n);
      p.l_u = coeff.rightCols(dim * n);
      p.retained_rank = t.rank();
      return p;
    };
    const dpc::CloudParams full_params = params_at(r);
    const VectorXd u_full = dpc::control_sequence(full_params, w, r_f, lambda);
    for (int k : {r - 1, r - 3, r / 2}) {
      if (k < 1) continue;
      trials++;
      const dpc::CloudParams hat = params_at(k);
      const VectorXd u_hat = dpc::control_sequence(hat, w, r_f, lambda);
      const dpc::ErrorBudget b = dpc::error_budget(h, full, k, hat, u_hat, r_f, w, lambda);
      const double dlw =
          Eigen::BDCSVD<MatrixXd>(full_params.l_w - hat.l_w).singularValues()(0);
      const double dlu =
          Eigen::BDCSVD<MatrixXd>(full_params.l_u - hat.l_u).singularValues()(0);
      if (dlw > b.eps2 * (1.0 + 1e-9)) violations++;
      if (dlu > b.eps3 * (1.0 + 1e-9)) violations++;
      if ((u_full - u_hat).norm() > b.eps4 * (1.0 + 1e-9)) violations++;
    }
  }
  report(3, violations == 0 && trials >= 250,
         "||dL_w|| <= eps2, ||dL_u|| <= eps3, ||du_f|| <= eps4 over " +
             std::to_string(trials) + " truncation trials, " +
             std::to_string(violations) + " violations");
}

TEST_CASE("C4 DOB uniform ultimate boundedness") {
  ScalarDobLoop fx;  // L*b = 0.5 => H = -0.5
  const double h = -fx.gain * fx.b;

  // Constant disturbance d = 0.3: the error recursion e+ = H e + d has the
  // fixed point d/(1-H); the deviation contracts by exactly |H| = 0.5 per step.
  const double d_const = 0.3;
  const double limit = d_const / (1.0 - h);
  const auto err = fx.run([&](long long) { return d_const; }, 10000);
  size_t k0 = 0;
  while (k0 < err.size() && err[k0] == d_const) ++k0;
  bool geometric = k0 > 0 && k0 < err.size();
  double dev = std::abs(err[k0 - 1] - limit);
  for (size_t k = k0; k < err.size() && geometric; ++k) {
    const double next = std::abs(err[k] - limit);
    if (next > 0.5 * dev + 1e-12) geometric = false;
    dev = next;
  }
  geometric = geometric && std::abs(err.back() - limit) <= 1e-12;

  // Bounded random disturbance |d| <= eps4: squared error within the
  // Lyapunov ultimate bound mu / (delta * lmin(P)) from the verified gain.
  const double eps4 = 0.02;
  const auto verdict = edge::verify_observer_gain(
      MatrixXd::Constant(1, 1, fx.gain), MatrixXd::Constant(1, 1, fx.b),
      MatrixXd::Identity(1, 1));
  bool uub = verdict.stable;
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> dist(-eps4, eps4);
  std::vector<double> d_seq(10001);
  for (auto& v : d_seq) v = dist(rng);
  const auto err2 = fx.run([&](long long k) { return d_seq[k % d_seq.size()]; }, 10000);
  const double p = verdict.p(0, 0);
  for (size_t k = 30; k < err2.size() && uub; ++k) {
    const double mu = 2.0 * eps4 * std::abs(h * p) * std::abs(err2[k]) + eps4 * eps4 * p;
    if (err2[k] * err2[k] > mu / (verdict.delta * p) + 1e-9) uub = false;
  }
  report(4, geometric && uub,
         "constant d: geometric contraction at |H| = 0.5 to the recursion's fixed "
         "point (1e-12 slack); random |d| <= eps4 within the (P, delta) bound over "
         "10000 steps");
}

TEST_CASE("C5 ball-beam experiment") {
  const auto t0 = std::chrono::steady_clock::now();
  ExperimentConfig cfg = ball_beam_cfg();
  const harness::RunRecord dob = harness::run_experiment(cfg);
  ExperimentConfig nat = cfg;
  nat.method = Method::Native;
  const harness::RunRecord native = harness::run_experiment(nat);
  const double elapsed = seconds_since(t0);

  double tail_err = 0.0;
  for (const auto& row : dob.rows) {
    if (row.k >= 350) tail_err = std::max(tail_err, std::abs(row.y(0) - row.r(0)));
  }
  const bool regulated = !dob.summary.diverged && dob.rows.size() == 400 && tail_err < 1e-3;
  const bool ordering = dob.summary.overshoot <= native.summary.overshoot + 1e-12;
  const bool ok = regulated && ordering && elapsed < 30.0;
  report(5, ok,
         "steady error " + std::to_string(tail_err * 1000.0) +
             " mm (< 1 mm) within 400 steps; overshoot workflow+DOB " +
             std::to_string(dob.summary.overshoot) + " <= native " +
             std::to_string(native.summary.overshoot) + "; runtime " +
             std::to_string(elapsed) + " s (< 30 s)");
}

TEST_CASE("C6 vehicle experiment") {
  // 30 km/h: the centralized path misses the period and fails, the workflow
  // path stays within it and tracks.
  ExperimentConfig dob30 = vehicle_cfg(30.0);
  const harness::RunRecord wf30 = harness::run_experiment(dob30);
  ExperimentConfig nat30 = dob30;
  nat30.method = Method::Native;
  const harness::RunRecord n30 = harness::run_experiment(nat30);

  const double period_us = dob30.control_period_s * 1e6;
  const double native_periods = n30.summary.mean_total_delay_us / period_us;
  const double wf_periods = wf30.summary.mean_total_delay_us / period_us;
  const bool calibrated = native_periods > 2.0 && native_periods < 2.7 && wf_periods < 1.0;
  const bool native_fails =
      n30.summary.diverged || n30.summary.rmse > 10.0 * wf30.summary.rmse;
  const bool wf_tracks = !wf30.summary.diverged && wf30.summary.rmse < 1.0;

  // 20 km/h: every method stays bounded.
  bool all_bounded_20 = true;
  for (Method m : {Method::Native, Method::NativeDelayComp, Method::Workflow,
                   Method::WorkflowDob}) {
    ExperimentConfig cfg = vehicle_cfg(20.0);
    cfg.method = m;
    const harness::RunRecord rec = harness::run_experiment(cfg);
    if (rec.summary.diverged || rec.summary.rmse > 1.0) all_bounded_20 = false;
  }
  const bool ok = calibrated && native_fails && wf_tracks && all_bounded_20;
  report(6, ok,
         "30 km/h: native delay " + std::to_string(native_periods) +
             " periods (~2.35), rmse " + std::to_string(n30.summary.rmse) +
             (n30.summary.diverged ? " (diverged)" : "") + " vs workflow+DOB rmse " +
             std::to_string(wf30.summary.rmse) + " at " + std::to_string(wf_periods) +
             " periods; 20 km/h all four methods bounded: " +
             (all_bounded_20 ? "yes" : "no"));
}

TEST_CASE("C7 truncation sweep on the 78-state power model") {
  ExperimentConfig cfg = power_cfg();
  const harness::SweepReport sweep = harness::sweep_truncation(cfg, {100, 50, 20, 10, 5});
  bool bytes_monotone = true, compute_monotone = true;
  for (size_t i = 0; i + 1 < sweep.rows.size(); ++i) {
    if (sweep.rows[i].modeled_bytes < sweep.rows[i + 1].modeled_bytes)
      bytes_monotone = false;
    if (sweep.rows[i].measured_compute_ms < sweep.rows[i + 1].measured_compute_ms)
      compute_monotone = false;
  }
  ExperimentConfig no_dob = cfg;
  no_dob.method = Method::Workflow;
  no_dob.keep_count = 5;
  const harness::RunRecord plain5 = harness::run_experiment(no_dob);
  const double rmse_dob5 = sweep.rows.back().rmse;
  const bool dob_helps = rmse_dob5 < plain5.summary.rmse;

  ExperimentConfig full = cfg;
  full.method = Method::Workflow;
  full.truncation = "rank_only";
  const harness::RunRecord wf_full = harness::run_experiment(full);
  const bool full_matches =
      std::abs(wf_full.summary.rmse - sweep.native_rmse) < 1e-6;

  const bool ok = bytes_monotone && compute_monotone && dob_helps && full_matches;
  report(7, ok,
         "payload bytes and measured compute monotone in keep: " +
             std::string(bytes_monotone && compute_monotone ? "yes" : "no") +
             "; rmse(keep=5,+DOB) " + std::to_string(rmse_dob5) + " < no-DOB " +
             std::to_string(plain5.summary.rmse) + "; full-rank rmse matches native within 1e-6: " +
             (full_matches ? "yes" : "no"));
}

TEST_CASE("C8 DAG shape and barrier safety") {
  const bool counts = wf::build_dpc_dag(10).tasks.size() == 19 &&
                      wf::build_dpc_dag(4).tasks.size() == 6;

  bool barrier_safe = true;
  std::mt19937_64 seeds(2026);
  std::mt19937_64 data_rng(77);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (int run = 0; run < 100 && barrier_safe; ++run) {
    wf::EngineOptions opt;
    opt.policy = linalg::TruncationPolicy::rank_only();
    opt.n_horizon = 2;
    opt.j_cols = 12;
    opt.input_dim = 1;
    opt.output_dim = 1;
    opt.lambda = 0.5;
    opt.send_jitter_max_us = 50.0;
    opt.jitter_seed = seeds();
    opt.warmup_control = [](const VectorXd&, long long) { return VectorXd::Zero(1); };
    wf::WorkflowEngine engine(wf::build_dpc_dag(3), std::move(opt));
    engine.initialize_workers();
    engine.start();
    double y = 0.0;
    for (long long t = 0; t < engine.samples_required(); ++t) {
      const double u = gauss(data_rng);
      y = 0.5 * y + u;
      engine.feed_pair(VectorXd::Constant(1, u), VectorXd::Constant(1, y));
    }
    engine.switch_topology(wf::WorkflowEngine::Mode::Dpc);
    engine.execute_round(VectorXd::Zero(1), VectorXd::Constant(1, y),
                         VectorXd::Zero(2), 1);
    long long start_seq = -1;
    for (const auto& e : engine.log().snapshot()) {
      if (e.event == wf::MessageLog::Event::StartBroadcast) start_seq = e.seq;
    }
    if (start_seq < 0) barrier_safe = false;
    for (const auto& e : engine.log().snapshot()) {
      if (e.event == wf::MessageLog::Event::TaskSend && e.seq < start_seq) {
        barrier_safe = false;
      }
    }
  }
  report(8, counts && barrier_safe,
         "19 tasks at mpt=10, 6 tasks at mpt=4; no pre-start task message across "
         "100 randomized-interleaving runs");
}

TEST_CASE("C9 stage profile dominance") {
  const auto profs = harness::profile_stages({2, 4, 8, 16}, 10, 1000, 2, 7);
  bool ok = profs.size() == 4;
  double frac16 = 0.0, total2 = 0.0, total16 = 0.0;
  if (ok) {
    total2 = profs[0].total_ms();
    frac16 = profs[3].svd_fraction();
    total16 = profs[3].total_ms();
    ok = frac16 > 0.5 && total2 < total16;
  }
  report(9, ok,
         "16-dim fixture: SVD consumes " + std::to_string(frac16 * 100.0) +
             "% of stage time (> 50%); 2-dim total " + std::to_string(total2) +
             " ms < 16-dim total " + std::to_string(total16) + " ms");
}

TEST_CASE("C10 flop model against hand-evaluated formulas") {
  std::mt19937_64 rng(99);
  bool ok = true;
  int tuples = 0;
  for (int i = 0; i < 20; ++i) {
    const long long m = 8 + static_cast<long long>(rng() % 500);
    const int nb = 1 + static_cast<int>(rng() % 8);
    const long long s = 1 + static_cast<long long>(rng() % 64);
    const long long n = s * nb;  // integer block width
    const long long k = 1 + static_cast<long long>(rng() % s);
    const linalg::FlopEstimate e = linalg::flop_estimate(m, n, nb, k);
    const long long per_block = 6 * m * s * s + 16 * s * s * s;
    const long long merge = 6 * m * k * k + 176 * k * k * k;
    const long long total = nb * per_block + (nb - 1) * merge;
    if (e.per_block_flops != per_block || e.merge_flops != merge ||
        e.total_flops != total) {
      ok = false;
    }
    const double bound = 12.0 * m * n * n / nb + 192.0 * n * n * n / (nb * nb);
    if (std::llround(bound) != e.bound_flops) ok = false;
    if (k <= s && !(e.total_flops < e.bound_flops)) ok = false;
    tuples++;
  }
  report(10, ok && tuples == 20,
         "flop totals equal the hand-evaluated formula on 20 tuples and stay below "
         "the parallelism bound whenever k <= s");
}
