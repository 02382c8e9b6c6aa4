#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "nvmps/model.hpp"
#include "nvmps/tebd.hpp"

namespace nvmps {

// Chain presets:
//   nv2 - two-site chain (D 2.87 GHz, omega0 2.75 GHz, Bz {65, 20.086} G,
//         g 100 kHz)
//   nv3 - three-site chain (omega0 2.797 GHz, Bz {42.82, 88.31, 82.88} G,
//         g 53 kHz)
//   nvN - uniform chain of any length (Bz 65 G, g 100 kHz, omega0 2.75 GHz)
// All presets use zeta = 0 and gamma_e = -28.025 GHz/T. The pulse is filled
// in per benchmark trajectory.
NvChainModel preset_model(const std::string& name, int n_sites);
int preset_default_chi(const std::string& name);

struct BenchConfig {
  std::string preset = "nv2";                   // nv2 | nv3 | nvN | custom
  std::optional<NvChainModel> custom_model;     // template when preset == custom
  int n_pulses = 10;
  std::uint64_t seed = 0;
  double t_total = 0.3;                         // us
  std::vector<int> ns_list = {50, 100, 200, 400, 800};
  std::vector<int> n_list = {2, 3, 4, 5, 6};
  std::optional<int> chi_max;                   // default: preset_default_chi
  double cutoff = 0.0;
  std::vector<StepperKind> steppers = {StepperKind::Riemann, StepperKind::Simpson};
  std::optional<std::vector<Eigen::Vector3cd>> initial_kets;  // default all |m=0>
  int dense_cap = 12;                           // oracle / densification cap
  std::optional<PulseSpec> fixed_pulse;         // overrides the seeded draws

  int resolved_chi() const;
  int n_sites_for_steps() const;                // chain length used by the N_s sweep
};

// One measurement of a single trajectory.
struct BenchRecord {
  int n_sites = 0;
  int n_steps = 0;
  StepperKind stepper = StepperKind::Riemann;
  int pulse_index = 0;
  double error = 0.0;       // Holder-inf distance to the dense reference
  double runtime_s = 0.0;   // wall time of the MPS evolution only
  int chi_max = 0;          // configured bond-dimension cap
  double truncation_weight = 0.0;
};

// Per-step error trace row (optional second output of the N_s sweep).
struct TraceRow {
  int n_sites = 0;
  int n_steps = 0;
  StepperKind stepper = StepperKind::Riemann;
  int pulse_index = 0;
  int step = 0;
  double t_us = 0.0;
  double error = 0.0;
};

// Deterministic pulse draws: a splitmix64 stream seeded with `seed` yields,
// per pulse, four uniform variates in the fixed order c1, w1, c2, w2, with
// amplitudes mapped to [0, 5] and frequencies to [0, 10*pi]. The generator
// and ordering are frozen so sequences reproduce across implementations.
std::vector<PulseSpec> generate_pulses(std::uint64_t seed, int n_pulses);

// Error / runtime versus the number of integration steps at fixed chain
// length. The dense reference is solved once per pulse and shared across
// steppers and step counts. Runs sequentially (timing-safe); one warm-up
// evolution is discarded before measurements begin.
std::vector<BenchRecord> run_error_vs_steps(const BenchConfig& cfg,
                                            std::vector<TraceRow>* trace = nullptr);

// Error / runtime versus chain length at fixed step count (the first entry
// of ns_list; default 1000).
std::vector<BenchRecord> run_error_vs_size(const BenchConfig& cfg);

// Least-squares slope of log(mean error) versus log(N_s) per stepper; the
// mean is taken over pulses at each step count. Requires at least three
// distinct step counts with finite errors per stepper.
std::map<StepperKind, double> fit_convergence_order(const std::vector<BenchRecord>& records);

// mean Riemann error / mean Simpson error per (n_sites, n_steps) cell
std::map<std::pair<int, int>, double> error_ratios(const std::vector<BenchRecord>& records);

// CSV with header n_sites,n_steps,stepper,pulse_index,error,runtime_s,
// chi_max,truncation_weight; rows sorted by (n_sites, n_steps, stepper,
// pulse_index); doubles serialized with 17 significant digits. Output is
// byte-reproducible for a fixed seed and config, runtime column aside.
void emit_csv(const std::vector<BenchRecord>& records, std::ostream& os);
void emit_csv(const std::vector<BenchRecord>& records, const std::string& path);

void emit_trace_csv(const std::vector<TraceRow>& rows, std::ostream& os);
void emit_trace_csv(const std::vector<TraceRow>& rows, const std::string& path);

// 17-significant-digit decimal form used by the CSV writers.
std::string format_double(double x);

std::vector<Eigen::Vector3cd> default_initial_kets(int n_sites);

}  // namespace nvmps
