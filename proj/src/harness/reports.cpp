#include "dpcflow/harness/reports.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace dpcflow::harness {

namespace {

void fmt(std::ostringstream& out, double v) {
  out.precision(12);
  out << v;
}

void vec_header(std::ostringstream& out, const std::string& name, Eigen::Index n) {
  for (Eigen::Index i = 0; i < n; ++i) out << ',' << name << i;
}

void vec_row(std::ostringstream& out, const Eigen::VectorXd& v, Eigen::Index n) {
  for (Eigen::Index i = 0; i < n; ++i) {
    out << ',';
    fmt(out, i < v.size() ? v(i) : 0.0);
  }
}

}  // namespace

std::string trace_csv(const RunRecord& rec) {
  std::ostringstream out;
  const Eigen::Index l = rec.rows.empty() ? 0 : rec.rows.front().y.size();
  const Eigen::Index m = rec.rows.empty() ? 0 : rec.rows.front().u_applied.size();
  out << "k,t_us";
  vec_header(out, "y", l);
  vec_header(out, "r", l);
  vec_header(out, "u", m);
  vec_header(out, "u_cloud", m);
  vec_header(out, "d_hat", m);
  out << ",delay_up_us,delay_cloud_us,delay_down_us,total_delay_us,"
         "packet_data_time,held,eps2,eps3,eps4\n";
  for (const TraceRow& r : rec.rows) {
    out << r.k << ',';
    fmt(out, r.t_us);
    vec_row(out, r.y, l);
    vec_row(out, r.r, l);
    vec_row(out, r.u_applied, m);
    vec_row(out, r.u_cloud, m);
    vec_row(out, r.d_hat, m);
    out << ',';
    fmt(out, r.delay_up_us);
    out << ',';
    fmt(out, r.delay_compute_us);
    out << ',';
    fmt(out, r.delay_down_us);
    out << ',';
    fmt(out, r.delay_total_us);
    out << ',' << r.packet_data_time << ',' << (r.held ? 1 : 0) << ',';
    fmt(out, r.eps2);
    out << ',';
    fmt(out, r.eps3);
    out << ',';
    fmt(out, r.eps4);
    out << '\n';
  }
  return out.str();
}

std::string summary_csv(const RunRecord& rec) {
  std::ostringstream out;
  out << "plant,method,steps,warmup_steps,diverged,rmse,overshoot,"
         "mean_total_delay_us,max_total_delay_us,mean_cloud_us,max_cloud_us,"
         "total_bytes,held_steps,eps2,eps3,eps4\n";
  const RunSummary& s = rec.summary;
  out << rec.cfg.plant << ',' << method_name(rec.cfg.method) << ',' << s.steps << ','
      << s.warmup_steps << ',' << (s.diverged ? 1 : 0) << ',';
  fmt(out, s.rmse);
  out << ',';
  fmt(out, s.overshoot);
  out << ',';
  fmt(out, s.mean_total_delay_us);
  out << ',';
  fmt(out, s.max_total_delay_us);
  out << ',';
  fmt(out, s.mean_compute_us);
  out << ',';
  fmt(out, s.max_compute_us);
  out << ',' << s.total_bytes << ',' << s.held_steps << ',';
  fmt(out, s.eps2_last);
  out << ',';
  fmt(out, s.eps3_last);
  out << ',';
  fmt(out, s.eps4_last);
  out << '\n';
  return out.str();
}

std::string plotdata_csv(const RunRecord& rec) {
  std::ostringstream out;
  out << "series,x,y\n";
  const Eigen::Index l = rec.rows.empty() ? 0 : rec.rows.front().y.size();
  for (const TraceRow& r : rec.rows) {
    for (Eigen::Index i = 0; i < l; ++i) {
      out << 'y' << i << ',' << r.k << ',';
      fmt(out, r.y(i));
      out << '\n';
      out << 'r' << i << ',' << r.k << ',';
      fmt(out, r.r(i));
      out << '\n';
    }
    out << "total_delay_us," << r.k << ',';
    fmt(out, r.delay_total_us);
    out << '\n';
  }
  for (size_t rowi = 0; rowi < rec.extras.size(); ++rowi) {
    for (size_t s = 0; s < rec.extra_names.size(); ++s) {
      out << rec.extra_names[s] << ',' << (rowi + 1) << ',';
      fmt(out, rec.extras[rowi][s]);
      out << '\n';
    }
  }
  return out.str();
}

std::string metrics_csv(const RunRecord& rec) {
  std::ostringstream out;
  out << "round,task_id,compute_us,serialize_us,transfer_us,bytes\n";
  for (const auto& rm : rec.round_metrics) {
    for (const auto& row : rm.tasks) {
      out << rm.round << ',' << row.task_id << ',';
      fmt(out, row.compute_us_measured);
      out << ',';
      fmt(out, row.serialize_us);
      out << ',';
      fmt(out, row.transfer_us);
      out << ',' << row.bytes_out << '\n';
    }
  }
  return out.str();
}

void emit_reports(const RunRecord& rec, const std::string& dir,
                  const std::string& base) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(dir, ec);
  auto write = [&](const std::string& name, const std::string& content) {
    const fs::path path = fs::path(dir) / (base + name);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("emit_reports: cannot write " + path.string());
    out << content;
  };
  write("_trace.csv", trace_csv(rec));
  write("_summary.csv", summary_csv(rec));
  write("_plot.csv", plotdata_csv(rec));
  if (!rec.round_metrics.empty()) write("_metrics.csv", metrics_csv(rec));
}

}  // namespace dpcflow::harness
