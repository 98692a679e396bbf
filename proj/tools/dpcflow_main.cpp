#include <CLI11.hpp>
#include <fstream>
#include <iostream>

#include "dpcflow/harness/config.hpp"
#include "dpcflow/harness/experiment.hpp"
#include "dpcflow/harness/profile.hpp"
#include "dpcflow/harness/reports.hpp"
#include "dpcflow/harness/sweep.hpp"
#include "dpcflow/workflow/dag.hpp"

namespace hn = dpcflow::harness;

namespace {

std::vector<int> parse_int_list(const std::string& s) {
  std::vector<int> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (!tok.empty()) out.push_back(std::stoi(tok));
  }
  return out;
}

hn::ExperimentConfig load_config(const std::string& path,
                                 const std::vector<std::string>& overrides) {
  hn::ExperimentConfig cfg = hn::parse_config_file(path);
  for (const std::string& ov : overrides) {
    const auto eq = ov.find('=');
    if (eq == std::string::npos) throw std::runtime_error("--set expects key=value: " + ov);
    hn::apply_setting(cfg, ov.substr(0, eq), ov.substr(eq + 1));
  }
  cfg.validate();
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Workflow-based data-driven predictive control experiments"};
  app.require_subcommand(1);

  std::string config_path, out_dir, keep_list = "100,50,20,10,5";
  std::vector<std::string> overrides;

  auto* run = app.add_subcommand("run", "Run one experiment from a config file");
  run->add_option("--config", config_path, "config file")->required();
  run->add_option("--set", overrides, "override key=value")->take_all();
  run->add_option("--out", out_dir, "output directory for reports");

  auto* sweep = app.add_subcommand("sweep", "Sweep retained singular values");
  sweep->add_option("--config", config_path, "config file")->required();
  sweep->add_option("--keep", keep_list, "comma-separated keep counts");
  sweep->add_option("--set", overrides, "override key=value")->take_all();
  sweep->add_option("--out", out_dir, "output directory for reports");

  std::string dims_list = "2,4,8,16";
  int prof_horizon = 10, prof_cols = 1000, prof_cycles = 3;
  std::uint64_t prof_seed = 7;
  auto* profile = app.add_subcommand("profile", "Time the four controller stages");
  profile->add_option("--dims", dims_list, "comma-separated system dimensions");
  profile->add_option("--horizon", prof_horizon, "Hankel block rows N");
  profile->add_option("--cols", prof_cols, "Hankel columns j");
  profile->add_option("--cycles", prof_cycles, "controller updates per fixture");
  profile->add_option("--seed", prof_seed, "fixture seed");

  int dag_mpt = 10, dag_fold = -1;
  bool dag_print = false;
  std::string dag_out, dag_load;
  auto* dag = app.add_subcommand("dag", "Build or inspect a DPC workflow DAG");
  dag->add_option("--mpt", dag_mpt, "maximal parallel tasks");
  dag->add_option("--fold", dag_fold, "merges folded into the export task (-1 = default)");
  dag->add_flag("--print", dag_print, "print the topology");
  dag->add_option("--out", dag_out, "write the topology file");
  dag->add_option("--load", dag_load, "read a topology file instead of building");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) {
      const hn::ExperimentConfig cfg = load_config(config_path, overrides);
      const hn::RunRecord rec = hn::run_experiment(cfg);
      std::cout << hn::summary_csv(rec);
      const std::string dir = !out_dir.empty() ? out_dir : cfg.output_dir;
      if (!dir.empty()) {
        const std::string base = cfg.plant + "_" + hn::method_name(cfg.method);
        hn::emit_reports(rec, dir, base);
        std::cout << "reports written to " << dir << "/" << base << "_*.csv\n";
      }
    } else if (*sweep) {
      const hn::ExperimentConfig cfg = load_config(config_path, overrides);
      const hn::SweepReport report = hn::sweep_truncation(cfg, parse_int_list(keep_list));
      std::cout << hn::sweep_csv(report);
      const std::string dir = !out_dir.empty() ? out_dir : cfg.output_dir;
      if (!dir.empty()) {
        std::ofstream f(dir + "/sweep.csv");
        f << hn::sweep_csv(report);
        std::cout << "sweep written to " << dir << "/sweep.csv\n";
      }
    } else if (*profile) {
      const auto report = hn::profile_stages(parse_int_list(dims_list), prof_horizon,
                                             prof_cols, prof_cycles, prof_seed);
      std::cout << "dim,svd_ms,pinv_ms,coeff_ms,control_ms,total_ms,svd_fraction\n";
      std::cout.precision(6);
      for (const auto& p : report) {
        std::cout << p.dim << ',' << p.svd_ms << ',' << p.pinv_ms << ',' << p.coeff_ms
                  << ',' << p.control_ms << ',' << p.total_ms() << ','
                  << p.svd_fraction() << '\n';
      }
    } else if (*dag) {
      dpcflow::wf::WorkflowDag d;
      if (!dag_load.empty()) {
        std::ifstream in(dag_load);
        if (!in) throw std::runtime_error("cannot open " + dag_load);
        std::stringstream buf;
        buf << in.rdbuf();
        d = dpcflow::wf::dag_from_text(buf.str());
      } else {
        d = dpcflow::wf::build_dpc_dag(dag_mpt, dag_fold);
      }
      const std::string text = dpcflow::wf::dag_to_text(d);
      if (dag_print || dag_out.empty()) std::cout << text;
      std::cout << "tasks=" << d.tasks.size() << " mpt=" << d.mpt
                << " folded=" << d.folded_merges << '\n';
      if (!dag_out.empty()) {
        std::ofstream out(dag_out);
        out << text;
      }
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
