#include "dpcflow/harness/experiment.hpp"

#include <chrono>
#include <cmath>
#include <deque>
#include <optional>
#include <stdexcept>

#include "dpcflow/dpc/error_budget.hpp"
#include "dpcflow/edge/dob.hpp"
#include "dpcflow/linalg/flops.hpp"
#include "dpcflow/plants/models.hpp"
#include "dpcflow/plants/warmup.hpp"

namespace dpcflow::harness {

using dpc::CloudPacket;
using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_us(Clock::time_point t0) {
  return std::chrono::duration<double, std::micro>(Clock::now() - t0).count();
}

long long vector_message_bytes(const std::vector<long long>& section_lengths) {
  long long n = 0;
  for (long long s : section_lengths) n += s;
  return 64 + 8 * n;
}

/// Centralized reference path: the four-stage computation on one node.
struct NativeCloud {
  dpc::HankelSet hankel;
  linalg::TruncationPolicy policy;
  double lambda = 1.0;
  int m = 0, l = 0, n = 0;

  struct Out {
    CloudPacket pkt;
    double modeled_flops = 0.0;
    double measured_us = 0.0;
    double stage_svd_us = 0.0, stage_pinv_us = 0.0, stage_coeff_us = 0.0,
           stage_control_us = 0.0;
    linalg::SvdFactors trunc;
    dpc::CloudParams params;
    VectorXd w_p;
    VectorXd u_seq;
  };

  Out round(const VectorXd& u_prev, const VectorXd& y_now, const VectorXd& r_f,
            long long data_time) {
    hankel.slide(u_prev, y_now);
    Out out;
    const auto t0 = Clock::now();
    const MatrixXd v_p = hankel.v_p();
    const linalg::SvdFactors factors = linalg::svd_dense(v_p);
    out.trunc = linalg::do_truncate(factors, policy);
    out.stage_svd_us = elapsed_us(t0);

    const auto t1 = Clock::now();
    const MatrixXd pinv = linalg::pseudo_inverse_from_factors(out.trunc);
    out.stage_pinv_us = elapsed_us(t1);

    const auto t2 = Clock::now();
    const MatrixXd coeff = hankel.y_f() * pinv;
    out.params.l_w = coeff.leftCols((l + m) * n);
    out.params.l_u = coeff.rightCols(m * n);
    out.params.a_hat_row = out.params.l_w.topRows(l);
    out.params.b_hat_row = out.params.l_u.topRows(l);
    out.params.retained_rank = out.trunc.rank();
    out.params.degenerate = out.trunc.degenerate;
    out.stage_coeff_us = elapsed_us(t2);

    const auto t3 = Clock::now();
    out.w_p = hankel.w_p_now();
    out.u_seq = dpc::control_sequence(out.params, out.w_p, r_f, lambda);
    out.stage_control_us = elapsed_us(t3);

    out.measured_us = elapsed_us(t0);
    const double rows = static_cast<double>(v_p.rows());
    const double cols = static_cast<double>(v_p.cols());
    out.modeled_flops =
        linalg::stage_flops::svd(rows, cols) +
        linalg::stage_flops::pseudo_inverse(rows, cols, out.trunc.rank()) +
        linalg::stage_flops::coefficients(static_cast<double>(l) * n, cols, rows) +
        linalg::stage_flops::control(static_cast<double>(l) * n,
                                     static_cast<double>(m) * n);
    out.pkt = dpc::make_cloud_packet(out.params, out.u_seq, m, data_time);
    return out;
  }
};

struct PendingPacket {
  CloudPacket pkt;
  double up_us = 0.0, cloud_us = 0.0, down_us = 0.0;
};

}  // namespace

PlantRig build_rig(const ExperimentConfig& cfg) {
  PlantRig rig;
  const double dt = cfg.control_period_s;

  if (cfg.plant == "ball_beam") {
    plants::BallBeamParams p;
    const plants::LtiModel disc =
        plants::discretize_zoh(plants::ball_beam_servo_model(p), dt);
    rig.sim = std::make_shared<plants::PlantSim>(disc, VectorXd::Zero(2));
    rig.input_dim = 1;
    rig.output_dim = 1;
    rig.plant_input = [](const VectorXd& u) { return u; };
    auto pid = std::make_shared<plants::PidWarmup>(
        plants::PidGains{cfg.pid_kp, cfg.pid_ki, cfg.pid_kd}, dt,
        cfg.bb_reference_warmup, cfg.warmup_dither, cfg.seed * 7919 + 1);
    rig.warmup = [pid](const VectorXd& y, long long) { return (*pid)(y); };
    const double ref = cfg.bb_reference_dpc;
    rig.reference_now = [ref](long long) { return VectorXd::Constant(1, ref); };
    rig.dob_gain = MatrixXd::Constant(1, 1, cfg.observer_gain);
  } else if (cfg.plant == "vehicle") {
    plants::VehicleParams p;
    p.speed = cfg.vehicle_speed_kmh / 3.6;
    p.wheelbase = cfg.vehicle_wheelbase;
    p.curvature = cfg.vehicle_curvature;
    const plants::LtiModel disc = plants::discretize_zoh(plants::vehicle_error_model(p), dt);
    VectorXd x0(2);
    x0 << 0.0, 0.3;  // start off the lane center
    rig.sim = std::make_shared<plants::PlantSim>(disc, x0);
    rig.input_dim = 1;
    rig.output_dim = 2;
    const double u2 = p.feedforward_u2();
    rig.plant_input = [u2](const VectorXd& u) {
      VectorXd full(2);
      full << u(0), u2;
      return full;
    };
    plants::LtiModel steer_only = disc;
    steer_only.b = disc.b.leftCols(1);
    steer_only.d = disc.d.leftCols(1);
    const MatrixXd k = plants::lqr_gain(steer_only,
                                        cfg.lqr_q_scale * MatrixXd::Identity(2, 2),
                                        cfg.lqr_r_scale * MatrixXd::Identity(1, 1));
    auto lqr = std::make_shared<plants::LqrWarmup>(k, cfg.warmup_dither, cfg.seed * 7919 + 2);
    auto sim = rig.sim;
    rig.warmup = [lqr, sim](const VectorXd&, long long) { return (*lqr)(sim->state()); };
    rig.reference_now = [](long long) { return VectorXd::Zero(2); };
    rig.dob_gain = MatrixXd::Zero(1, 2);
    rig.dob_gain(0, 1) = cfg.observer_gain;  // observe the distance error
    // Reconstructed global trajectory for plotting: the reference point moves
    // along the circle, the vehicle sits e_d off the lane normal.
    const double speed = p.speed;
    const double radius = 1.0 / p.curvature;
    auto arc = std::make_shared<double>(0.0);
    rig.extra_names = {"pos_x", "pos_y", "ref_x", "ref_y"};
    rig.extras = [arc, speed, radius, sim](const VectorXd&, double dt_s) {
      *arc += speed * dt_s;
      const double ang = *arc / radius;
      const double rx = radius * std::sin(ang);
      const double ry = radius * (1.0 - std::cos(ang));
      const double ed = sim->state()(1);
      return std::vector<double>{rx - ed * std::sin(ang), ry + ed * std::cos(ang), rx, ry};
    };
  } else if (cfg.plant == "power_network") {
    plants::PowerNetParams p = plants::load_power_edge_list(cfg.power_edge_file);
    p.inertia = cfg.power_inertia;
    p.damping = cfg.power_damping;
    const plants::LtiModel cont = plants::power_network_model(p);
    const plants::LtiModel disc = plants::discretize_zoh(cont, dt);
    rig.sim = std::make_shared<plants::PlantSim>(disc, VectorXd::Zero(disc.n_states()));
    rig.input_dim = disc.n_inputs();
    rig.output_dim = disc.n_outputs();
    rig.plant_input = [](const VectorXd& u) { return u; };
    const MatrixXd k = plants::lqr_gain(disc, MatrixXd::Identity(disc.n_states(), disc.n_states()),
                                        MatrixXd::Identity(disc.n_inputs(), disc.n_inputs()));
    auto lqr = std::make_shared<plants::LqrWarmup>(k, cfg.warmup_dither, cfg.seed * 7919 + 3);
    auto sim = rig.sim;
    rig.warmup = [lqr, sim](const VectorXd&, long long) { return (*lqr)(sim->state()); };
    const double ref = cfg.power_reference;
    const int l = rig.output_dim;
    rig.reference_now = [ref, l](long long) { return VectorXd::Constant(l, ref); };
    rig.dob_gain = cfg.observer_gain * MatrixXd::Identity(rig.input_dim, rig.output_dim);
  } else if (cfg.plant == "random_lti") {
    plants::LtiModel disc = plants::random_discrete_model(cfg.random_dim, cfg.random_dim, cfg.seed);
    disc.dt = dt;
    rig.sim = std::make_shared<plants::PlantSim>(disc, VectorXd::Zero(disc.n_states()));
    rig.input_dim = disc.n_inputs();
    rig.output_dim = disc.n_outputs();
    rig.plant_input = [](const VectorXd& u) { return u; };
    const MatrixXd k = plants::lqr_gain(disc, MatrixXd::Identity(disc.n_states(), disc.n_states()),
                                        MatrixXd::Identity(disc.n_inputs(), disc.n_inputs()));
    auto lqr = std::make_shared<plants::LqrWarmup>(k, cfg.warmup_dither, cfg.seed * 7919 + 4);
    auto sim = rig.sim;
    rig.warmup = [lqr, sim](const VectorXd&, long long) { return (*lqr)(sim->state()); };
    const int l = rig.output_dim;
    rig.reference_now = [l](long long) { return VectorXd::Zero(l); };
    rig.dob_gain = cfg.observer_gain * MatrixXd::Identity(rig.input_dim, rig.output_dim);
  } else {
    throw std::invalid_argument("unknown plant: " + cfg.plant);
  }
  return rig;
}

RunRecord run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  const auto wall0 = Clock::now();

  PlantRig rig = build_rig(cfg);
  const int m = rig.input_dim;
  const int l = rig.output_dim;
  const int n = cfg.n_horizon;
  const int j = cfg.j_cols;
  const double period_us = cfg.control_period_s * 1e6;
  const linalg::TruncationPolicy policy = cfg.policy();
  const wf::FabricCosts costs = cfg.fabric();
  const bool uses_engine =
      cfg.method == Method::Workflow || cfg.method == Method::WorkflowDob;

  RunRecord rec;
  rec.cfg = cfg;
  rec.extra_names = rig.extra_names;

  // Cloud side.
  std::unique_ptr<wf::WorkflowEngine> engine;
  std::unique_ptr<NativeCloud> native;
  if (uses_engine) {
    wf::EngineOptions opt;
    opt.policy = policy;
    opt.costs = costs;
    opt.n_horizon = n;
    opt.j_cols = j;
    opt.input_dim = m;
    opt.output_dim = l;
    opt.lambda = cfg.lambda;
    opt.compute_rate_flops = cfg.compute_rate_flops;
    opt.real_sleep = cfg.fabric_real_sleep;
    opt.warmup_control = rig.warmup;
    engine = std::make_unique<wf::WorkflowEngine>(
        wf::build_dpc_dag(cfg.mpt, cfg.fold_into_export), std::move(opt));
    engine->initialize_workers();
    engine->start();
  }

  // Shadow window for the analysis bounds on workflow runs.
  std::vector<VectorXd> warm_inputs, warm_outputs;
  const bool shadow = cfg.trace_bounds;

  // Sensor noise on every measured output; the plant state stays exact.
  std::mt19937_64 sensor_rng(cfg.seed * 7919 + 17);
  std::uniform_real_distribution<double> sensor_dist(-1.0, 1.0);
  auto measure = [&](const VectorXd& y_true) {
    if (cfg.measurement_noise <= 0.0) return y_true;
    VectorXd y_m = y_true;
    for (Eigen::Index i = 0; i < y_m.size(); ++i) {
      y_m(i) += cfg.measurement_noise * sensor_dist(sensor_rng);
    }
    return y_m;
  };

  // Warm-up: 2N + j - 1 pairs streamed, one extra step bridges into the
  // first round (its pair is the first round's Hankel update).
  const long long pairs_needed = 2LL * n + j - 1;
  VectorXd y = measure(rig.sim->output());
  VectorXd u_prev(m);
  for (long long t = 0; t <= pairs_needed; ++t) {
    const VectorXd u = uses_engine ? engine->warmup_control(y, t) : rig.warmup(y, t);
    const VectorXd y_next = measure(rig.sim->step(rig.plant_input(u)));
    if (t < pairs_needed) {
      if (uses_engine) engine->feed_pair(u, y_next);
      if (!uses_engine || shadow) {
        warm_inputs.push_back(u);
        warm_outputs.push_back(y_next);
      }
    }
    u_prev = u;
    y = y_next;
  }
  rec.summary.warmup_steps = pairs_needed + 1;

  std::optional<dpc::HankelSet> shadow_hankel;
  if (uses_engine) {
    engine->switch_topology(wf::WorkflowEngine::Mode::Dpc);
    if (shadow) shadow_hankel = dpc::HankelSet::build(warm_inputs, warm_outputs, n, j);
  } else {
    native = std::make_unique<NativeCloud>();
    native->hankel = dpc::HankelSet::build(warm_inputs, warm_outputs, n, j);
    native->policy = policy;
    native->lambda = cfg.lambda;
    native->m = m;
    native->l = l;
    native->n = n;
  }

  // Edge side.
  edge::EdgeBuffer buf(n, m, l);
  edge::DobState dob = edge::make_dob(rig.dob_gain, m, l);
  std::deque<PendingPacket> pending;
  std::optional<PendingPacket> last_used;
  VectorXd last_applied = u_prev;

  double sum_sq_err = 0.0;
  double overshoot = 0.0;
  double overshoot_sign = 0.0;
  double sum_delay = 0.0;
  long long delay_count = 0;
  double sum_compute = 0.0;

  const long long uplink_bytes = vector_message_bytes({m, l, static_cast<long long>(l) * n});
  const long long downlink_bytes = vector_message_bytes(
      {static_cast<long long>(m) * n, static_cast<long long>(l) * (l + m) * n,
       static_cast<long long>(l) * m * n});

  for (long long k = 1; k <= cfg.duration_steps; ++k) {
    const double t_k = static_cast<double>(k - 1) * period_us;
    const VectorXd r_now = rig.reference_now(k);
    VectorXd r_f(l * n);
    for (int i = 0; i < n; ++i) r_f.segment(i * l, l) = rig.reference_now(k + 1 + i);

    // Cloud round over the pair (u(k-1), y(k)).
    PendingPacket pp;
    double measured_round_us = 0.0;
    std::optional<NativeCloud::Out> nat_out;
    if (uses_engine) {
      auto [pkt, metrics] = engine->execute_round(u_prev, y, r_f, k);
      pp.pkt = std::move(pkt);
      pp.up_us = costs.edge_cost_us(metrics.uplink_bytes);
      pp.cloud_us = metrics.modeled_path_us;
      pp.down_us = costs.edge_cost_us(metrics.downlink_bytes);
      rec.summary.total_bytes += metrics.total_bytes;
      for (const auto& row : metrics.tasks) measured_round_us += row.compute_us_measured;
      rec.round_metrics.push_back(std::move(metrics));
      if (shadow_hankel) shadow_hankel->slide(u_prev, y);
    } else {
      nat_out = native->round(u_prev, y, r_f, k);
      pp.pkt = nat_out->pkt;
      pp.up_us = costs.edge_cost_us(uplink_bytes);
      pp.cloud_us = nat_out->modeled_flops / cfg.compute_rate_flops * 1e6;
      pp.down_us = costs.edge_cost_us(downlink_bytes);
      measured_round_us = nat_out->measured_us;
    }
    pp.pkt.sensed_sent_at_us = t_k;
    pp.pkt.sent_at_us = t_k + pp.up_us + pp.cloud_us;
    pp.pkt.received_at_us = t_k + pp.up_us + pp.cloud_us + pp.down_us;
    sum_compute += pp.cloud_us;
    rec.summary.max_compute_us = std::max(rec.summary.max_compute_us, pp.cloud_us);
    rec.summary.measured_compute_ms += measured_round_us / 1000.0;
    pending.push_back(std::move(pp));

    // Edge: newest packet that arrives before this period's actuation
    // deadline. In the non-real-time evaluation the plant waits for the
    // round, so the fresh packet is always used.
    const double deadline = t_k + period_us;
    std::optional<PendingPacket> usable;
    if (cfg.realtime) {
      for (const auto& cand : pending) {
        if (cand.pkt.received_at_us <= deadline &&
            (!usable || cand.pkt.data_time > usable->pkt.data_time)) {
          usable = cand;
        }
      }
      while (!pending.empty() && pending.front().pkt.received_at_us <= deadline) {
        pending.pop_front();  // consumed or superseded
      }
    } else {
      usable = pending.back();
      pending.clear();
    }

    VectorXd u_k;
    VectorXd d_hat = dob.d_hat;
    bool held = false;
    if (usable) {
      last_used = usable;
      switch (cfg.method) {
        case Method::Native:
        case Method::Workflow:
          u_k = usable->pkt.u_cloud;
          break;
        case Method::NativeDelayComp:
          u_k = edge::delay_compensator_select(usable->pkt.u_sequence, m,
                                               usable->pkt.total_delay_us(), period_us);
          break;
        case Method::WorkflowDob: {
          dob.active = k > n;
          d_hat = edge::dob_update(dob, buf, usable->pkt, y);
          u_k = edge::composite_control(usable->pkt, d_hat, k, n);
          break;
        }
      }
    } else {
      u_k = last_applied;
      held = true;
      rec.summary.held_steps++;
    }

    // Edge buffer and observer bookkeeping.
    buf.push_output(y);
    if (cfg.method == Method::WorkflowDob && last_used) {
      edge::dob_commit(dob, buf, last_used->pkt, u_k);
    }
    buf.push_input(u_k);

    // Optional analysis bounds along the run.
    TraceRow row;
    if (cfg.trace_bounds && (k % std::max(1, cfg.bounds_every) == 0)) {
      const dpc::HankelSet& h = uses_engine ? *shadow_hankel : native->hankel;
      const linalg::SvdFactors trunc =
          uses_engine ? linalg::do_truncate(linalg::svd_dense(h.v_p()), policy)
                      : nat_out->trunc;
      dpc::CloudParams params;
      if (uses_engine) {
        const MatrixXd coeff = h.y_f() * linalg::pseudo_inverse_from_factors(trunc);
        params.l_w = coeff.leftCols((l + m) * n);
        params.l_u = coeff.rightCols(m * n);
        params.retained_rank = trunc.rank();
      } else {
        params = nat_out->params;
      }
      const VectorXd w_p = h.w_p_now();
      const VectorXd u_seq = usable ? usable->pkt.u_sequence : VectorXd::Zero(m * n);
      const dpc::ErrorBudget budget =
          dpc::error_budget_online(h, trunc, params, u_seq, r_f, w_p, cfg.lambda);
      row.eps2 = budget.eps2;
      row.eps3 = budget.eps3;
      row.eps4 = budget.eps4;
      rec.summary.eps2_last = budget.eps2;
      rec.summary.eps3_last = budget.eps3;
      rec.summary.eps4_last = budget.eps4;
    }

    // Apply and step the plant.
    const VectorXd y_next = measure(rig.sim->step(rig.plant_input(u_k)));

    row.k = k;
    row.t_us = t_k;
    row.y = y;
    row.r = r_now;
    row.u_applied = u_k;
    row.u_cloud = usable ? usable->pkt.u_cloud : VectorXd::Zero(m);
    row.d_hat = d_hat;
    row.held = held;
    if (usable) {
      row.delay_up_us = usable->up_us;
      row.delay_compute_us = usable->cloud_us;
      row.delay_down_us = usable->down_us;
      row.delay_total_us = usable->pkt.total_delay_us();
      row.packet_data_time = usable->pkt.data_time;
      sum_delay += row.delay_total_us;
      delay_count++;
      rec.summary.max_total_delay_us =
          std::max(rec.summary.max_total_delay_us, row.delay_total_us);
    }
    if (rig.extras) rec.extras.push_back(rig.extras(u_k, cfg.control_period_s));
    rec.rows.push_back(std::move(row));

    const double err = (y - r_now).norm();
    sum_sq_err += err * err;
    if (k == 1) overshoot_sign = (r_now(0) - y(0)) >= 0.0 ? 1.0 : -1.0;
    overshoot = std::max(overshoot, overshoot_sign * (y(0) - r_now(0)));

    if (!y_next.allFinite() || y_next.norm() > cfg.divergence_guard) {
      rec.summary.diverged = true;
      rec.summary.steps = k;
      break;
    }
    u_prev = u_k;
    last_applied = u_k;
    y = y_next;
  }

  if (rec.summary.steps == 0) rec.summary.steps = static_cast<long long>(rec.rows.size());
  if (!rec.rows.empty()) {
    rec.summary.rmse = std::sqrt(sum_sq_err / static_cast<double>(rec.rows.size()));
    rec.summary.overshoot = std::max(0.0, overshoot);
    rec.summary.mean_compute_us = sum_compute / static_cast<double>(rec.rows.size());
    if (delay_count > 0) {
      rec.summary.mean_total_delay_us = sum_delay / static_cast<double>(delay_count);
    }
  }
  rec.summary.measured_wall_ms = elapsed_us(wall0) / 1000.0;
  return rec;
}

}  // namespace dpcflow::harness
