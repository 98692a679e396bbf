#include "dpcflow/workflow/engine.hpp"

#include <chrono>
#include <map>
#include <random>
#include <sstream>

#include "dpcflow/dpc/hankel.hpp"
#include "dpcflow/linalg/flops.hpp"

namespace dpcflow::wf {

namespace {

struct StopSignal {};

using Clock = std::chrono::steady_clock;

double elapsed_us(Clock::time_point t0) {
  return std::chrono::duration<double, std::micro>(Clock::now() - t0).count();
}

struct WorkerEnv {
  std::string name;
  int n = 0, j = 0, m = 0, l = 0;
  double lambda = 1.0;
};

WorkerEnv parse_env(const std::string& text) {
  WorkerEnv env;
  std::istringstream in(text);
  std::string tok;
  while (in >> tok) {
    const auto eq = tok.find('=');
    if (eq == std::string::npos) continue;
    const std::string key = tok.substr(0, eq);
    const std::string val = tok.substr(eq + 1);
    if (key == "name") env.name = val;
    else if (key == "n") env.n = std::stoi(val);
    else if (key == "j") env.j = std::stoi(val);
    else if (key == "m") env.m = std::stoi(val);
    else if (key == "l") env.l = std::stoi(val);
    else if (key == "lambda") env.lambda = std::stod(val);
  }
  return env;
}

}  // namespace

struct WorkflowEngine::Collector {
  std::mutex mu;
  std::int64_t active_round = -1;
  std::vector<RoundTaskMetrics> rows;
  std::vector<EdgeBytes> edges;

  void begin(std::int64_t round) {
    std::lock_guard lock(mu);
    active_round = round;
    rows.clear();
    edges.clear();
  }
  void add_row(std::int64_t round, RoundTaskMetrics row) {
    std::lock_guard lock(mu);
    if (round == active_round) rows.push_back(std::move(row));
  }
  void add_edge(std::int64_t round, EdgeBytes e) {
    std::lock_guard lock(mu);
    if (round == active_round) edges.push_back(e);
  }
};

WorkflowEngine::WorkflowEngine(WorkflowDag dag, EngineOptions opt)
    : dag_(std::move(dag)), opt_(std::move(opt)) {
  opt_.costs.validate();
  if (opt_.n_horizon < 1 || opt_.j_cols < 1 || opt_.input_dim < 1 || opt_.output_dim < 1) {
    throw std::invalid_argument("WorkflowEngine: bad Hankel dimensions");
  }
  if (opt_.j_cols < dag_.mpt) {
    throw std::invalid_argument("WorkflowEngine: fewer columns than leaves");
  }
  assign_leaf_columns(dag_, opt_.j_cols);
  collector_ = std::make_unique<Collector>();
  barrier_ = std::make_unique<PyramidBarrier>(
      static_cast<int>(dag_.tasks.size()), &registry_, &log_, opt_.address_space);
  results_ = std::make_shared<Channel>();
  to_router_ = hub_.open(opt_.address_space + "://engine",
                         opt_.address_space + "://task_1");
}

WorkflowEngine::~WorkflowEngine() { shutdown(); }

void WorkflowEngine::initialize_workers() {
  const std::string& ns = opt_.address_space;
  // Step 1: the DAG map, environment variables and the export merge plan go
  // into the registry before any container starts.
  registry_.put(ns + "/dag", dag_to_text(dag_));
  {
    std::ostringstream plan;
    for (size_t i = 0; i < dag_.export_merge_plan.size(); ++i) {
      if (i) plan << ';';
      plan << dag_.export_merge_plan[i][0] << ',' << dag_.export_merge_plan[i][1];
    }
    registry_.put(ns + "/export_plan", plan.str());
  }
  for (const TaskSpec& t : dag_.tasks) {
    std::ostringstream env;
    env << "name=task_" << t.task_id << " n=" << opt_.n_horizon
        << " j=" << opt_.j_cols << " m=" << opt_.input_dim
        << " l=" << opt_.output_dim << " lambda=" << opt_.lambda;
    registry_.put(ns + "/env/task_" + std::to_string(t.task_id), env.str());
    if (t.kind == ImageKind::BlockSvd) {
      registry_.put(ns + "/cols/task_" + std::to_string(t.task_id),
                    std::to_string(t.col_begin) + " " + std::to_string(t.col_end));
    }
  }
  // Steps 2-3: create the workers.
  threads_.reserve(dag_.tasks.size());
  for (const TaskSpec& t : dag_.tasks) {
    threads_.emplace_back([this, id = t.task_id] { worker_main(id); });
  }
}

void WorkflowEngine::throw_pending_error() {
  while (auto m = results_->pop(0)) {
    if (m->kind() == MsgKind::Error) {
      const int id = static_cast<int>(m->header.sender);
      const auto text = registry_.get(opt_.address_space + "/error/task_" + std::to_string(id));
      throw InitializationError(id, text.value_or("worker failed"));
    }
  }
}

void WorkflowEngine::start() {
  const auto t0 = Clock::now();
  while (barrier_->ready_count() < static_cast<int>(dag_.tasks.size())) {
    throw_pending_error();
    if (std::chrono::duration<double>(Clock::now() - t0).count() > opt_.barrier_deadline_s) {
      throw BarrierTimeoutError(barrier_->ready_count(),
                                static_cast<int>(dag_.tasks.size()));
    }
    std::this_thread::sleep_for(std::chrono::milliseconds(2));
  }
  barrier_->await_all_and_start(1.0);
  started_ = true;
}

Eigen::VectorXd WorkflowEngine::warmup_control(const Eigen::VectorXd& y, long long step) {
  if (!started_) throw std::logic_error("engine not started");
  if (mode_ != Mode::WarmUp) throw std::logic_error("warmup_control outside warm-up mode");
  to_router_->push(encode_vectors(MsgKind::WarmupControl, 0,
                                  static_cast<std::uint64_t>(step), {y}));
  while (true) {
    auto m = results_->pop(30000);
    if (!m) throw WorkerError(1, "warm-up control timed out");
    if (m->kind() == MsgKind::Error) {
      const int id = static_cast<int>(m->header.sender);
      const auto text = registry_.get(opt_.address_space + "/error/task_" + std::to_string(id));
      throw WorkerError(id, text.value_or("worker failed"));
    }
    if (m->kind() == MsgKind::WarmupControl) return decode_vectors(*m).at(0);
  }
}

void WorkflowEngine::feed_pair(const Eigen::VectorXd& u, const Eigen::VectorXd& y) {
  if (!started_) throw std::logic_error("engine not started");
  to_router_->push(encode_vectors(MsgKind::Sample, 0, 0, {u, y}));
  samples_++;
}

void WorkflowEngine::switch_topology(Mode mode) {
  if (mode == Mode::Dpc && samples_ < samples_required()) {
    throw SwitchRefusedError(samples_required() - samples_);
  }
  mode_ = mode;
}

std::pair<dpc::CloudPacket, RoundMetrics> WorkflowEngine::execute_round(
    const Eigen::VectorXd& u_prev, const Eigen::VectorXd& y_now,
    const Eigen::VectorXd& r_f, std::int64_t data_time) {
  if (!started_) throw std::logic_error("engine not started");
  if (mode_ != Mode::Dpc) throw std::logic_error("execute_round outside DPC mode");
  ++round_;
  collector_->begin(round_);
  Message trigger = encode_vectors(MsgKind::Round, 0,
                                   static_cast<std::uint64_t>(round_), {u_prev, y_now, r_f});
  const long long uplink_bytes = trigger.wire_bytes();
  to_router_->push(std::move(trigger));
  samples_++;

  while (true) {
    auto m = results_->pop(120000);
    if (!m) throw WorkerError(0, "round timed out");
    if (m->kind() == MsgKind::Error) {
      const int id = static_cast<int>(m->header.sender);
      const auto text = registry_.get(opt_.address_space + "/error/task_" + std::to_string(id));
      throw WorkerError(id, text.value_or("worker failed"));
    }
    if (m->kind() != MsgKind::Packet) continue;
    if (m->header.round != static_cast<std::uint64_t>(round_)) continue;  // stale

    const auto sections = decode_vectors(*m);
    const int l = opt_.output_dim;
    const int mm = opt_.input_dim;
    const int n = opt_.n_horizon;
    dpc::CloudPacket pkt;
    pkt.u_sequence = sections.at(0);
    pkt.u_cloud = pkt.u_sequence.head(mm);
    pkt.a_hat_row = Eigen::Map<const Eigen::MatrixXd>(sections.at(1).data(), l, (l + mm) * n);
    pkt.b_hat_row = Eigen::Map<const Eigen::MatrixXd>(sections.at(2).data(), l, mm * n);
    pkt.b_hat = pkt.b_hat_row.leftCols(mm);
    pkt.retained_rank = static_cast<int>(m->header.reserved);
    pkt.degenerate = m->header.dims[5] != 0;
    pkt.data_time = data_time;
    RoundMetrics metrics = assemble_metrics(round_, uplink_bytes, m->wire_bytes());
    return {std::move(pkt), std::move(metrics)};
  }
}

RoundMetrics WorkflowEngine::assemble_metrics(std::int64_t round, long long uplink_bytes,
                                              long long downlink_bytes) {
  RoundMetrics rm;
  rm.round = round;
  {
    std::lock_guard lock(collector_->mu);
    rm.tasks = collector_->rows;
    rm.edges = collector_->edges;
  }
  const FabricCosts& costs = opt_.costs;
  std::map<int, double> task_bytes;
  std::map<std::pair<int, int>, long long> edge_bytes;
  for (const EdgeBytes& e : rm.edges) {
    rm.total_bytes += e.bytes;
    rm.total_noncompute_us += costs.edge_cost_us(e.bytes);
    task_bytes[e.from] += static_cast<double>(e.bytes);
    edge_bytes[{e.from, e.to}] += e.bytes;
  }
  for (RoundTaskMetrics& row : rm.tasks) {
    row.modeled_compute_us = row.modeled_flops / opt_.compute_rate_flops * 1e6;
    row.bytes_out = static_cast<long long>(task_bytes[row.task_id]);
    row.serialize_us = costs.serialize_us(row.bytes_out) + costs.deserialize_us(row.bytes_out);
    row.transfer_us = row.bytes_out > 0 ? costs.transfer_us(row.bytes_out) : 0.0;
  }

  // Critical path: task ids are topologically ordered by construction.
  std::map<int, double> modeled;
  for (const RoundTaskMetrics& row : rm.tasks) modeled[row.task_id] = row.modeled_compute_us;
  std::map<int, double> done, done_compute, done_noncompute;
  for (const TaskSpec& t : dag_.tasks) {
    double ready = 0.0, ready_c = 0.0, ready_nc = 0.0;
    for (int p : t.parents) {
      auto it = edge_bytes.find({p, t.task_id});
      const double cost = costs.edge_cost_us(it == edge_bytes.end() ? 0 : it->second);
      const double cand = done[p] + cost;
      if (cand > ready) {
        ready = cand;
        ready_c = done_compute[p];
        ready_nc = done_noncompute[p] + cost;
      }
    }
    const double comp = modeled.count(t.task_id) ? modeled[t.task_id] : 0.0;
    done[t.task_id] = ready + comp;
    done_compute[t.task_id] = ready_c + comp;
    done_noncompute[t.task_id] = ready_nc;
  }
  rm.modeled_path_us = done[dag_.export_id];
  rm.path_compute_us = done_compute[dag_.export_id];
  rm.path_noncompute_us = done_noncompute[dag_.export_id];
  rm.uplink_bytes = uplink_bytes;
  rm.downlink_bytes = downlink_bytes;
  return rm;
}

std::vector<std::pair<std::string, std::string>> WorkflowEngine::channel_edges() const {
  return hub_.edges();
}

void WorkflowEngine::shutdown() {
  if (shut_down_) return;
  shut_down_ = true;
  if (started_) {
    Message stop;
    stop.header.kind = static_cast<std::uint16_t>(MsgKind::Stop);
    to_router_->push(std::move(stop));
  }
  barrier_->abort();
  hub_.close_all();
  results_->close();
  for (auto& t : threads_) {
    if (t.joinable()) t.join();
  }
}

void WorkflowEngine::worker_main(int task_id) {
  const std::string& ns = opt_.address_space;
  const TaskSpec spec = dag_.task(task_id);  // own copy
  std::mt19937_64 jitter_rng(opt_.jitter_seed ^ (0x9e3779b97f4a7c15ULL * task_id));
  std::uniform_real_distribution<double> jitter(0.0, opt_.send_jitter_max_us);

  std::map<int, std::shared_ptr<Channel>> in_ch, out_ch;

  auto maybe_jitter = [&] {
    if (opt_.send_jitter_max_us > 0.0) {
      std::this_thread::sleep_for(std::chrono::duration<double, std::micro>(jitter(jitter_rng)));
    }
  };
  auto send = [&](int child, Message msg) {
    maybe_jitter();
    log_.record(MessageLog::Event::TaskSend, task_id, msg.header.round);
    if (msg.kind() == MsgKind::Round || msg.kind() == MsgKind::Factors) {
      collector_->add_edge(static_cast<std::int64_t>(msg.header.round),
                           {task_id, child, msg.wire_bytes()});
    }
    if (opt_.real_sleep) {
      std::this_thread::sleep_for(std::chrono::duration<double, std::micro>(
          opt_.costs.edge_cost_us(msg.wire_bytes())));
    }
    out_ch.at(child)->push(std::move(msg));
  };
  auto send_result = [&](Message msg) {
    maybe_jitter();
    log_.record(MessageLog::Event::TaskSend, task_id, msg.header.round);
    results_->push(std::move(msg));
  };
  auto forward_stop_and_exit = [&] {
    Message stop;
    stop.header.kind = static_cast<std::uint16_t>(MsgKind::Stop);
    stop.header.sender = static_cast<std::uint32_t>(task_id);
    for (auto& [child, ch] : out_ch) ch->push(stop);
  };
  auto fail = [&](const std::string& what) {
    registry_.put(ns + "/error/task_" + std::to_string(task_id), what);
    Message em;
    em.header.kind = static_cast<std::uint16_t>(MsgKind::Error);
    em.header.sender = static_cast<std::uint32_t>(task_id);
    results_->push(std::move(em));
    forward_stop_and_exit();
  };

  try {
    // Step 4: controller parameters from the environment entries.
    const auto env_text = registry_.get_with_retry(ns + "/env/task_" + std::to_string(task_id), 20, 2);
    if (!env_text) throw InitializationError(task_id, "missing environment for task " + std::to_string(task_id));
    const WorkerEnv env = parse_env(*env_text);

    // Steps 5-7: publish our name -> address pair.
    const std::string my_addr = ns + "://" + env.name;
    if (task_id != opt_.fault_unregistered_task) {
      registry_.put(ns + "/addr/" + env.name, my_addr);
    }

    // Steps 8-9: read the DAG map, derive parent and child lists.
    const auto dag_text = registry_.get_with_retry(ns + "/dag", 20, 2);
    if (!dag_text) throw InitializationError(task_id, "missing DAG map");
    const WorkflowDag topo = dag_from_text(*dag_text);
    const TaskSpec& me = topo.task(task_id);

    // Steps 10-11: resolve every neighbour address, with retries.
    auto resolve = [&](int other) {
      const auto addr = registry_.get_with_retry(ns + "/addr/task_" + std::to_string(other), 40, 5);
      if (!addr) {
        throw InitializationError(
            task_id, "task_" + std::to_string(task_id) +
                         " failed to resolve address of task_" + std::to_string(other));
      }
      return *addr;
    };
    // Step 12: open the point-to-point channels.
    for (int p : me.parents) in_ch[p] = hub_.open(resolve(p), my_addr);
    for (int c : me.children) out_ch[c] = hub_.open(my_addr, resolve(c));
    if (spec.kind == ImageKind::Router) {
      in_ch[0] = hub_.open(ns + "://engine", my_addr);
    }

    if (task_id != opt_.fault_unready_task) barrier_->post_ready(task_id);
    if (!barrier_->wait_start()) return;

    auto check_fault = [&](std::int64_t round) {
      if (task_id == opt_.fault_fail_task && round == opt_.fault_fail_round) {
        throw std::runtime_error("injected fault");
      }
    };
    auto pop_or_stop = [&](Channel& ch) {
      auto m = ch.pop(120000);
      if (!m) throw std::runtime_error("channel closed or timed out");
      if (m->kind() == MsgKind::Stop) throw StopSignal{};
      return std::move(*m);
    };
    auto pop_factors = [&](Channel& ch, std::uint64_t round) {
      while (true) {
        Message m = pop_or_stop(ch);
        if (m.kind() != MsgKind::Factors) continue;
        if (m.header.round < round) continue;  // stale frame, reject
        if (m.header.round > round) throw std::runtime_error("frame from a future round");
        return m;
      }
    };

    if (spec.kind == ImageKind::Router) {
      while (true) {
        Message m = pop_or_stop(*in_ch.at(0));
        if (m.kind() == MsgKind::WarmupControl) {
          check_fault(static_cast<std::int64_t>(m.header.round));
          if (!opt_.warmup_control) throw std::runtime_error("no warm-up controller configured");
          const auto y = decode_vectors(m).at(0);
          const Eigen::VectorXd u =
              opt_.warmup_control(y, static_cast<long long>(m.header.round));
          send_result(encode_vectors(MsgKind::WarmupControl, task_id, m.header.round, {u}));
          continue;
        }
        if (m.kind() == MsgKind::Sample || m.kind() == MsgKind::Round) {
          check_fault(static_cast<std::int64_t>(m.header.round));
          const auto t0 = Clock::now();
          for (int c : spec.children) {
            Message copy = m;
            copy.header.sender = static_cast<std::uint32_t>(task_id);
            send(c, std::move(copy));
          }
          if (m.kind() == MsgKind::Round) {
            RoundTaskMetrics row;
            row.task_id = task_id;
            row.compute_us_measured = elapsed_us(t0);
            row.modeled_flops = 0.0;
            collector_->add_row(static_cast<std::int64_t>(m.header.round), row);
          }
        }
      }
    }

    if (spec.kind == ImageKind::BlockSvd) {
      const auto cols_text = registry_.get_with_retry(ns + "/cols/task_" + std::to_string(task_id), 20, 2);
      if (!cols_text) throw InitializationError(task_id, "missing column range");
      int c0 = 0, c1 = 0;
      std::istringstream(*cols_text) >> c0 >> c1;
      dpc::SampleWindow window(2 * env.n + env.j - 1, env.m, env.l);
      const int child = me.children.at(0);
      while (true) {
        Message m = pop_or_stop(*in_ch.at(me.parents.at(0)));
        if (m.kind() != MsgKind::Sample && m.kind() != MsgKind::Round) continue;
        const auto sections = decode_vectors(m);
        window.push(sections.at(0), sections.at(1));
        if (m.kind() != MsgKind::Round) continue;
        check_fault(static_cast<std::int64_t>(m.header.round));
        const auto t0 = Clock::now();
        const Eigen::MatrixXd slice = dpc::build_vp_slice(window, env.n, env.j, c0, c1);
        const linalg::SvdFactors trunc =
            linalg::do_truncate(linalg::svd_dense(slice), opt_.policy);
        RoundTaskMetrics row;
        row.task_id = task_id;
        row.compute_us_measured = elapsed_us(t0);
        row.modeled_flops = linalg::stage_flops::svd(
            static_cast<double>(slice.rows()), static_cast<double>(slice.cols()));
        collector_->add_row(static_cast<std::int64_t>(m.header.round), row);
        send(child, encode_factors(task_id, m.header.round, trunc));
      }
    }

    if (spec.kind == ImageKind::Merge) {
      const int child = me.children.at(0);
      std::uint64_t round = 1;
      while (true) {
        Message ma = pop_factors(*in_ch.at(me.parents.at(0)), round);
        Message mb = pop_factors(*in_ch.at(me.parents.at(1)), round);
        check_fault(static_cast<std::int64_t>(round));
        const auto t0 = Clock::now();
        const linalg::SvdFactors fa = decode_factors(ma);
        const linalg::SvdFactors fb = decode_factors(mb);
        const linalg::SvdFactors merged =
            linalg::do_truncate(linalg::block_merge(fa, fb, opt_.policy), opt_.policy);
        RoundTaskMetrics row;
        row.task_id = task_id;
        row.compute_us_measured = elapsed_us(t0);
        row.modeled_flops = linalg::stage_flops::merge(
            static_cast<double>(fa.rows()), fa.rank(), fb.rank(),
            static_cast<double>(fa.cols() + fb.cols()), merged.rank());
        collector_->add_row(static_cast<std::int64_t>(round), row);
        send(child, encode_factors(task_id, round, merged));
        ++round;
      }
    }

    // Export: final merges, truncation, pseudo-inverse, coefficients, control.
    {
      dpc::SampleWindow window(2 * env.n + env.j - 1, env.m, env.l);
      const auto plan_text = registry_.get_with_retry(ns + "/export_plan", 20, 2);
      std::vector<std::array<int, 2>> plan;
      if (plan_text && !plan_text->empty()) {
        std::istringstream ps(*plan_text);
        std::string op;
        while (std::getline(ps, op, ';')) {
          const auto comma = op.find(',');
          plan.push_back({std::stoi(op.substr(0, comma)), std::stoi(op.substr(comma + 1))});
        }
      }
      std::vector<int> factor_parents;
      for (int p : me.parents) {
        if (p != topo.router_id) factor_parents.push_back(p);
      }
      while (true) {
        Message m = pop_or_stop(*in_ch.at(topo.router_id));
        if (m.kind() != MsgKind::Sample && m.kind() != MsgKind::Round) continue;
        const auto sections = decode_vectors(m);
        window.push(sections.at(0), sections.at(1));
        if (m.kind() != MsgKind::Round) continue;
        const std::uint64_t round = m.header.round;
        check_fault(static_cast<std::int64_t>(round));
        const Eigen::VectorXd r_f = sections.at(2);

        std::vector<linalg::SvdFactors> slots;
        slots.reserve(factor_parents.size() + plan.size());
        std::vector<Message> frames;
        for (int p : factor_parents) frames.push_back(pop_factors(*in_ch.at(p), round));

        const auto t0 = Clock::now();
        double flops = 0.0;
        for (const Message& f : frames) slots.push_back(decode_factors(f));
        for (const auto& op : plan) {
          const linalg::SvdFactors& fa = slots.at(op[0]);
          const linalg::SvdFactors& fb = slots.at(op[1]);
          linalg::SvdFactors merged =
              linalg::do_truncate(linalg::block_merge(fa, fb, opt_.policy), opt_.policy);
          flops += linalg::stage_flops::merge(static_cast<double>(fa.rows()), fa.rank(),
                                              fb.rank(),
                                              static_cast<double>(fa.cols() + fb.cols()),
                                              merged.rank());
          slots.push_back(std::move(merged));
        }
        const linalg::SvdFactors final_factors = linalg::do_truncate(slots.back(), opt_.policy);
        const Eigen::MatrixXd pinv = linalg::pseudo_inverse_from_factors(final_factors);
        const Eigen::MatrixXd y_f = dpc::build_y_f(window, env.n, env.j);
        const Eigen::MatrixXd coeff = y_f * pinv;

        dpc::CloudParams params;
        params.l_w = coeff.leftCols((env.l + env.m) * env.n);
        params.l_u = coeff.rightCols(env.m * env.n);
        params.a_hat_row = params.l_w.topRows(env.l);
        params.b_hat_row = params.l_u.topRows(env.l);
        params.retained_rank = final_factors.rank();
        params.degenerate = final_factors.degenerate;

        const Eigen::VectorXd w_p = dpc::latest_w_p(window, env.n);
        const Eigen::VectorXd u_seq = dpc::control_sequence(params, w_p, r_f, env.lambda);

        flops += linalg::stage_flops::pseudo_inverse(
                     static_cast<double>(final_factors.rows()),
                     static_cast<double>(final_factors.cols()), final_factors.rank()) +
                 linalg::stage_flops::coefficients(static_cast<double>(y_f.rows()),
                                                   static_cast<double>(y_f.cols()),
                                                   static_cast<double>(pinv.cols())) +
                 linalg::stage_flops::control(static_cast<double>(params.l_u.rows()),
                                              static_cast<double>(params.l_u.cols()));

        RoundTaskMetrics row;
        row.task_id = task_id;
        row.compute_us_measured = elapsed_us(t0);
        row.modeled_flops = flops;
        collector_->add_row(static_cast<std::int64_t>(round), row);

        Eigen::VectorXd a_flat =
            Eigen::Map<const Eigen::VectorXd>(params.a_hat_row.data(), params.a_hat_row.size());
        Eigen::VectorXd b_flat =
            Eigen::Map<const Eigen::VectorXd>(params.b_hat_row.data(), params.b_hat_row.size());
        Message out = encode_vectors(MsgKind::Packet, task_id, round, {u_seq, a_flat, b_flat});
        out.header.reserved = static_cast<std::uint32_t>(params.retained_rank);
        out.header.dims[5] = params.degenerate ? 1 : 0;
        send_result(std::move(out));
      }
    }
  } catch (const StopSignal&) {
    forward_stop_and_exit();
  } catch (const std::exception& e) {
    fail(e.what());
  }
}

}  // namespace dpcflow::wf
