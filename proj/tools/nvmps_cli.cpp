// nvmps command-line benchmark harness.
//
// Subcommands:
//   error-vs-steps   error / runtime against the number of integration steps
//   error-vs-size    error / runtime against the chain length
//   convergence      error-vs-steps plus fitted convergence slopes
//   evolve           a single trajectory; emits final-state amplitudes
//
// All benchmark outputs are CSV; runs are deterministic for a fixed seed
// and configuration (runtime columns aside).

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "nvmps/bench.hpp"
#include "nvmps/model_config.hpp"
#include "nvmps/oracle.hpp"

namespace {

using namespace nvmps;

struct CommonOpts {
  std::string preset = "nv2";
  std::string config_path;
  std::uint64_t seed = 0;
  int n_pulses = 10;
  double t_total = 0.3;
  std::optional<int> chi_max;
  double cutoff = 0.0;
  std::vector<std::string> steppers = {"riemann", "simpson"};
  std::string out_path;
  int dense_cap = 12;
};

void add_common(CLI::App* cmd, CommonOpts& o) {
  cmd->add_option("--preset", o.preset, "Chain preset: nv2, nv3 or nvN")
      ->check(CLI::IsMember({"nv2", "nv3", "nvN"}));
  cmd->add_option("--config", o.config_path,
                  "JSON chain config; overrides --preset");
  cmd->add_option("--seed", o.seed, "Pulse generator seed");
  cmd->add_option("--n-pulses", o.n_pulses, "Number of random pulses")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--t-total", o.t_total, "Total evolution time in us")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--chi-max", o.chi_max, "Bond dimension cap")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--cutoff", o.cutoff,
                  "Relative singular value cutoff for truncations");
  cmd->add_option("--steppers", o.steppers, "Steppers to run")
      ->delimiter(',')
      ->check(CLI::IsMember({"riemann", "simpson"}));
  cmd->add_option("--out", o.out_path, "Output CSV path (default stdout)");
  cmd->add_option("--dense-cap", o.dense_cap,
                  "Largest chain length the dense reference may densify")
      ->check(CLI::PositiveNumber);
}

BenchConfig to_bench_config(const CommonOpts& o) {
  BenchConfig cfg;
  if (!o.config_path.empty()) {
    ChainConfig chain = load_chain_config(o.config_path);
    cfg.preset = "custom";
    cfg.custom_model = chain.model;
    cfg.initial_kets = chain.initial_kets;
    cfg.fixed_pulse = chain.pulse;
  } else {
    cfg.preset = o.preset;
  }
  cfg.seed = o.seed;
  cfg.n_pulses = o.n_pulses;
  cfg.t_total = o.t_total;
  cfg.chi_max = o.chi_max;
  cfg.cutoff = o.cutoff;
  cfg.steppers.clear();
  for (const std::string& s : o.steppers) cfg.steppers.push_back(stepper_kind_from(s));
  cfg.dense_cap = o.dense_cap;
  return cfg;
}

int write_records(const std::vector<BenchRecord>& records, const std::string& path) {
  if (path.empty()) {
    emit_csv(records, std::cout);
  } else {
    emit_csv(records, path);
    std::cerr << "wrote " << records.size() << " records to " << path << "\n";
  }
  int failures = 0;
  for (const BenchRecord& r : records) {
    if (!std::isfinite(r.error)) ++failures;
  }
  if (failures > 0) {
    std::cerr << "error: " << failures
              << " cell(s) failed (dense reference did not converge)\n";
    return 1;
  }
  return 0;
}

int run_steps_like(const CommonOpts& o, const std::vector<int>& ns_list, bool fit,
                   bool trace, const std::string& trace_path) {
  BenchConfig cfg = to_bench_config(o);
  if (!ns_list.empty()) cfg.ns_list = ns_list;

  std::vector<TraceRow> trace_rows;
  auto records = run_error_vs_steps(cfg, trace ? &trace_rows : nullptr);
  if (trace) {
    const std::string path =
        trace_path.empty() ? (o.out_path.empty() ? "trace.csv" : o.out_path + ".trace.csv")
                           : trace_path;
    emit_trace_csv(trace_rows, path);
    std::cerr << "wrote " << trace_rows.size() << " trace rows to " << path << "\n";
  }
  const int rc = write_records(records, o.out_path);
  if (fit && rc == 0) {
    auto slopes = fit_convergence_order(records);
    for (const auto& [kind, slope] : slopes) {
      std::printf("%s slope: %.6f\n", std::string(to_string(kind)).c_str(), slope);
    }
  }
  return rc;
}

int run_evolve(const CommonOpts& o, const std::string& stepper_name, int n_steps,
               int pulse_index) {
  BenchConfig cfg = to_bench_config(o);
  const int n = cfg.n_sites_for_steps();
  PulseSpec pulse;
  if (cfg.fixed_pulse) {
    pulse = *cfg.fixed_pulse;
  } else {
    auto pulses = generate_pulses(cfg.seed, std::max(cfg.n_pulses, pulse_index + 1));
    pulse = pulses.at(pulse_index);
  }

  NvChainModel m = cfg.preset == "custom" ? *cfg.custom_model : preset_model(cfg.preset, n);
  m.pulse = pulse;
  m.validate();

  std::vector<Eigen::Vector3cd> kets =
      cfg.initial_kets ? *cfg.initial_kets : default_initial_kets(n);
  if (kets.size() == 1) kets.assign(n, kets[0]);

  MpsState psi = MpsState::from_product_state(kets);
  const SvdTruncation trunc{cfg.resolved_chi(), cfg.cutoff};
  const StepperKind kind = stepper_kind_from(stepper_name);
  const EvolveDiagnostics diag = evolve(psi, m, kind, cfg.t_total, n_steps, trunc);

  std::cerr << "stepper=" << to_string(kind) << " n_steps=" << n_steps
            << " runtime_s=" << format_double(diag.wall_seconds)
            << " chi_max_reached=" << diag.max_bond_dimension
            << " truncation_weight=" << format_double(diag.truncation_weight)
            << " norm=" << format_double(psi.norm()) << "\n";

  std::ostream* os = &std::cout;
  std::ofstream file;
  if (!o.out_path.empty()) {
    file.open(o.out_path, std::ios::binary);
    if (!file) throw ValidationError("cannot open for writing: " + o.out_path);
    os = &file;
  }
  if (n <= cfg.dense_cap) {
    const Eigen::VectorXcd amps = psi.to_dense(cfg.dense_cap);
    *os << "index,re,im\n";
    for (Eigen::Index i = 0; i < amps.size(); ++i) {
      *os << i << ',' << format_double(amps(i).real()) << ','
          << format_double(amps(i).imag()) << '\n';
    }
  } else {
    std::cerr << "chain too long to densify (cap " << cfg.dense_cap
              << "); amplitudes not emitted\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"MPS time evolution of driven spin-1 chains: benchmark harness"};
  app.require_subcommand(1);

  CommonOpts steps_opts, size_opts, conv_opts, evolve_opts;
  std::vector<int> ns_list, size_ns, n_list;
  bool trace = false;
  std::string trace_path;

  CLI::App* steps = app.add_subcommand(
      "error-vs-steps", "Sweep the number of integration steps at fixed chain length");
  add_common(steps, steps_opts);
  steps->add_option("--ns-list", ns_list, "Step counts to sweep")->delimiter(',');
  steps->add_flag("--trace", trace, "Also emit per-step error traces");
  steps->add_option("--trace-out", trace_path, "Trace CSV path");

  CLI::App* size = app.add_subcommand(
      "error-vs-size", "Sweep the chain length at a fixed number of steps");
  add_common(size, size_opts);
  size->add_option("--n-list", n_list, "Chain lengths to sweep")->delimiter(',');
  size->add_option("--ns", size_ns, "Fixed step count (default 1000)")->delimiter(',');

  CLI::App* conv = app.add_subcommand(
      "convergence", "error-vs-steps plus fitted log-log convergence slopes");
  add_common(conv, conv_opts);
  std::vector<int> conv_ns;
  conv->add_option("--ns-list", conv_ns, "Step counts to sweep")->delimiter(',');

  CLI::App* evo = app.add_subcommand("evolve", "Run one trajectory and emit amplitudes");
  add_common(evo, evolve_opts);
  std::string stepper_name = "simpson";
  int n_steps = 1000, pulse_index = 0;
  evo->add_option("--stepper", stepper_name, "riemann or simpson")
      ->check(CLI::IsMember({"riemann", "simpson"}));
  evo->add_option("--n-steps", n_steps, "Number of steps")->check(CLI::PositiveNumber);
  evo->add_option("--pulse-index", pulse_index, "Index into the seeded pulse list")
      ->check(CLI::NonNegativeNumber);

  CLI11_PARSE(app, argc, argv);

  try {
    if (steps->parsed()) return run_steps_like(steps_opts, ns_list, false, trace, trace_path);
    if (conv->parsed()) return run_steps_like(conv_opts, conv_ns, true, false, "");
    if (size->parsed()) {
      BenchConfig cfg = to_bench_config(size_opts);
      if (!n_list.empty()) cfg.n_list = n_list;
      cfg.ns_list = size_ns.empty() ? std::vector<int>{1000} : size_ns;
      return write_records(run_error_vs_size(cfg), size_opts.out_path);
    }
    if (evo->parsed()) return run_evolve(evolve_opts, stepper_name, n_steps, pulse_index);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
