#include "nvmps/bench.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "nvmps/oracle.hpp"

namespace nvmps {

namespace {

// splitmix64: 64-bit counter-based generator with fixed constants
struct SplitMix64 {
  std::uint64_t state;
  std::uint64_t next() {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }
  // uniform in [0, 1) from the top 53 bits
  double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
};

NvChainModel resolve_model(const BenchConfig& cfg, int n_sites, const PulseSpec& pulse) {
  NvChainModel m;
  if (cfg.preset == "custom") {
    if (!cfg.custom_model) throw ValidationError("custom preset requires a model");
    m = *cfg.custom_model;
    if (m.n_sites != n_sites) {
      // broadcast uniform parameters when the template has a different length
      if (m.d_zfs.size() == 1 && m.bz.size() == 1 && m.g.size() == 1) {
        m.n_sites = n_sites;
        m.d_zfs.assign(n_sites, m.d_zfs[0]);
        m.bz.assign(n_sites, m.bz[0]);
        m.g.assign(n_sites - 1, m.g[0]);
      } else {
        throw ValidationError("custom model length does not match requested size");
      }
    }
  } else {
    m = preset_model(cfg.preset, n_sites);
  }
  m.pulse = pulse;
  m.validate();
  return m;
}

std::vector<Eigen::Vector3cd> resolve_kets(const BenchConfig& cfg, int n_sites) {
  if (!cfg.initial_kets) return default_initial_kets(n_sites);
  const auto& kets = *cfg.initial_kets;
  if (kets.size() == 1) return std::vector<Eigen::Vector3cd>(n_sites, kets[0]);
  if (static_cast<int>(kets.size()) != n_sites) {
    throw ValidationError("initial_kets must have one entry, or one per site");
  }
  return kets;
}

void sort_records(std::vector<BenchRecord>& records) {
  std::sort(records.begin(), records.end(), [](const BenchRecord& a, const BenchRecord& b) {
    if (a.n_sites != b.n_sites) return a.n_sites < b.n_sites;
    if (a.n_steps != b.n_steps) return a.n_steps < b.n_steps;
    if (a.stepper != b.stepper) return to_string(a.stepper) < to_string(b.stepper);
    return a.pulse_index < b.pulse_index;
  });
}

// one benchmark cell: evolve from the product state and compare against the
// precomputed dense reference
BenchRecord run_cell(const NvChainModel& m, const std::vector<Eigen::Vector3cd>& kets,
                     StepperKind stepper, int n_steps, double t_total,
                     const SvdTruncation& trunc, int chi_cfg, int pulse_index,
                     const Eigen::VectorXcd& reference, int dense_cap) {
  MpsState psi = MpsState::from_product_state(kets);
  const EvolveDiagnostics diag = evolve(psi, m, stepper, t_total, n_steps, trunc);
  BenchRecord rec;
  rec.n_sites = m.n_sites;
  rec.n_steps = n_steps;
  rec.stepper = stepper;
  rec.pulse_index = pulse_index;
  rec.error = holder_inf_error(psi.to_dense(dense_cap), reference);
  rec.runtime_s = diag.wall_seconds;
  rec.chi_max = chi_cfg;
  rec.truncation_weight = diag.truncation_weight;
  return rec;
}

void run_traced_cell(const NvChainModel& m, const std::vector<Eigen::Vector3cd>& kets,
                     StepperKind stepper, int n_steps, double t_total,
                     const SvdTruncation& trunc, int pulse_index, int dense_cap,
                     std::vector<TraceRow>* trace) {
  std::vector<double> times(n_steps);
  const double dt = t_total / n_steps;
  for (int k = 0; k < n_steps; ++k) times[k] = (k + 1) * dt;
  const std::vector<Eigen::VectorXcd> refs =
      sesolve_sampled(m, MpsState::from_product_state(kets).to_dense(dense_cap), times,
                      OdeTolerances{}, dense_cap);

  MpsState psi = MpsState::from_product_state(kets);
  for (int k = 0; k < n_steps; ++k) {
    step(psi, m, stepper, k * dt, dt, trunc);
    TraceRow row;
    row.n_sites = m.n_sites;
    row.n_steps = n_steps;
    row.stepper = stepper;
    row.pulse_index = pulse_index;
    row.step = k + 1;
    row.t_us = times[k];
    row.error = holder_inf_error(psi.to_dense(dense_cap), refs[k]);
    trace->push_back(row);
  }
}

}  // namespace

NvChainModel preset_model(const std::string& name, int n_sites) {
  NvChainModel m;
  m.gamma_e = ghz_per_tesla_to_inv_us_gauss(kNvGammaEGhzPerTesla);
  m.zeta = 0.0;
  if (name == "nv2") {
    if (n_sites != 2) throw ValidationError("preset nv2 is a two-site chain");
    m.n_sites = 2;
    m.d_zfs.assign(2, ghz_to_inv_us(2.87));
    m.omega0 = ghz_to_inv_us(2.75);
    m.bz = {65.0, 20.086};
    m.g = {khz_to_inv_us(100.0)};
  } else if (name == "nv3") {
    if (n_sites != 3) throw ValidationError("preset nv3 is a three-site chain");
    m.n_sites = 3;
    m.d_zfs.assign(3, ghz_to_inv_us(2.87));
    m.omega0 = ghz_to_inv_us(2.797);
    m.bz = {42.82, 88.31, 82.88};
    m.g.assign(2, khz_to_inv_us(53.0));
  } else if (name == "nvN") {
    if (n_sites < 2) throw ValidationError("preset nvN needs at least two sites");
    m.n_sites = n_sites;
    m.d_zfs.assign(n_sites, ghz_to_inv_us(2.87));
    m.omega0 = ghz_to_inv_us(2.75);
    m.bz.assign(n_sites, 65.0);
    m.g.assign(n_sites - 1, khz_to_inv_us(100.0));
  } else {
    throw ValidationError("unknown preset: " + name);
  }
  return m;
}

int preset_default_chi(const std::string& name) {
  if (name == "nv2" || name == "nv3") return 3;
  return 16;
}

int BenchConfig::resolved_chi() const {
  if (chi_max) {
    if (*chi_max < 1) throw ValidationError("chi_max must be positive");
    return *chi_max;
  }
  return preset_default_chi(preset);
}

int BenchConfig::n_sites_for_steps() const {
  if (preset == "nv2") return 2;
  if (preset == "nv3") return 3;
  if (preset == "custom") {
    if (!custom_model) throw ValidationError("custom preset requires a model");
    return custom_model->n_sites;
  }
  return n_list.empty() ? 4 : n_list.front();
}

std::vector<PulseSpec> generate_pulses(std::uint64_t seed, int n_pulses) {
  if (n_pulses < 1) throw ValidationError("n_pulses must be at least 1");
  SplitMix64 rng{seed};
  std::vector<PulseSpec> pulses(n_pulses);
  const double w_hi = 10.0 * 3.14159265358979323846;
  for (PulseSpec& p : pulses) {
    p.c1 = 5.0 * rng.uniform01();
    p.w1 = w_hi * rng.uniform01();
    p.c2 = 5.0 * rng.uniform01();
    p.w2 = w_hi * rng.uniform01();
  }
  return pulses;
}

std::vector<Eigen::Vector3cd> default_initial_kets(int n_sites) {
  return std::vector<Eigen::Vector3cd>(n_sites, Eigen::Vector3cd(0.0, 1.0, 0.0));
}

std::vector<BenchRecord> run_error_vs_steps(const BenchConfig& cfg,
                                            std::vector<TraceRow>* trace) {
  if (cfg.ns_list.empty()) throw ValidationError("ns_list is empty");
  if (cfg.steppers.empty()) throw ValidationError("steppers is empty");
  const int n = cfg.n_sites_for_steps();
  if (n > cfg.dense_cap) {
    throw CapacityError("chain length exceeds the dense reference cap");
  }
  const int chi = cfg.resolved_chi();
  const SvdTruncation trunc{chi, cfg.cutoff};
  std::vector<PulseSpec> pulses = generate_pulses(cfg.seed, cfg.n_pulses);
  if (cfg.fixed_pulse) pulses.assign(pulses.size(), *cfg.fixed_pulse);
  const std::vector<Eigen::Vector3cd> kets = resolve_kets(cfg, n);

  std::vector<BenchRecord> records;
  bool warmed_up = false;
  for (int pi = 0; pi < static_cast<int>(pulses.size()); ++pi) {
    const NvChainModel m = resolve_model(cfg, n, pulses[pi]);
    Eigen::VectorXcd reference;
    try {
      reference = sesolve(m, MpsState::from_product_state(kets).to_dense(cfg.dense_cap),
                          cfg.t_total, OdeTolerances{}, cfg.dense_cap);
    } catch (const IntegrationError&) {
      // reference failed: record the affected cells as failures and move on
      for (StepperKind stepper : cfg.steppers) {
        for (int ns : cfg.ns_list) {
          BenchRecord rec;
          rec.n_sites = n;
          rec.n_steps = ns;
          rec.stepper = stepper;
          rec.pulse_index = pi;
          rec.error = std::numeric_limits<double>::quiet_NaN();
          rec.chi_max = chi;
          records.push_back(rec);
        }
      }
      continue;
    }
    for (StepperKind stepper : cfg.steppers) {
      for (int ns : cfg.ns_list) {
        if (!warmed_up) {
          // discard one evolution so timings do not include first-touch costs
          MpsState warm = MpsState::from_product_state(kets);
          evolve(warm, m, stepper, cfg.t_total, ns, trunc);
          warmed_up = true;
        }
        records.push_back(run_cell(m, kets, stepper, ns, cfg.t_total, trunc, chi, pi,
                                   reference, cfg.dense_cap));
        if (trace) {
          run_traced_cell(m, kets, stepper, ns, cfg.t_total, trunc, pi, cfg.dense_cap,
                          trace);
        }
      }
    }
  }
  sort_records(records);
  return records;
}

std::vector<BenchRecord> run_error_vs_size(const BenchConfig& cfg) {
  if (cfg.n_list.empty()) throw ValidationError("n_list is empty");
  if (cfg.steppers.empty()) throw ValidationError("steppers is empty");
  const int ns = cfg.ns_list.empty() ? 1000 : cfg.ns_list.front();
  const int chi = cfg.resolved_chi();
  const SvdTruncation trunc{chi, cfg.cutoff};
  std::vector<PulseSpec> pulses = generate_pulses(cfg.seed, cfg.n_pulses);
  if (cfg.fixed_pulse) pulses.assign(pulses.size(), *cfg.fixed_pulse);

  std::vector<BenchRecord> records;
  bool warmed_up = false;
  for (int n : cfg.n_list) {
    if (n > cfg.dense_cap) {
      throw CapacityError(
          "chain length " + std::to_string(n) +
          " exceeds the dense reference cap; size sweeps are only verified "
          "against the dense reference");
    }
    const std::vector<Eigen::Vector3cd> kets = resolve_kets(cfg, n);
    for (int pi = 0; pi < static_cast<int>(pulses.size()); ++pi) {
      const NvChainModel m = resolve_model(cfg, n, pulses[pi]);
      Eigen::VectorXcd reference;
      try {
        reference = sesolve(m, MpsState::from_product_state(kets).to_dense(cfg.dense_cap),
                            cfg.t_total, OdeTolerances{}, cfg.dense_cap);
      } catch (const IntegrationError&) {
        for (StepperKind stepper : cfg.steppers) {
          BenchRecord rec;
          rec.n_sites = n;
          rec.n_steps = ns;
          rec.stepper = stepper;
          rec.pulse_index = pi;
          rec.error = std::numeric_limits<double>::quiet_NaN();
          rec.chi_max = chi;
          records.push_back(rec);
        }
        continue;
      }
      for (StepperKind stepper : cfg.steppers) {
        if (!warmed_up) {
          MpsState warm = MpsState::from_product_state(kets);
          evolve(warm, m, stepper, cfg.t_total, ns, trunc);
          warmed_up = true;
        }
        records.push_back(run_cell(m, kets, stepper, ns, cfg.t_total, trunc, chi, pi,
                                   reference, cfg.dense_cap));
      }
    }
  }
  sort_records(records);
  return records;
}

std::map<StepperKind, double> fit_convergence_order(const std::vector<BenchRecord>& records) {
  // mean error per (stepper, n_steps), skipping failure rows
  std::map<StepperKind, std::map<int, std::pair<double, int>>> sums;
  for (const BenchRecord& r : records) {
    if (!std::isfinite(r.error)) continue;
    auto& [sum, count] = sums[r.stepper][r.n_steps];
    sum += r.error;
    ++count;
  }

  std::map<StepperKind, double> slopes;
  for (const auto& [stepper, by_ns] : sums) {
    if (by_ns.size() < 3) {
      throw ValidationError("convergence fit needs at least three step counts");
    }
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int n = 0;
    for (const auto& [ns, acc] : by_ns) {
      const double mean = acc.first / acc.second;
      if (!(mean > 0.0)) {
        throw ValidationError("convergence fit needs positive mean errors");
      }
      const double x = std::log(static_cast<double>(ns));
      const double y = std::log(mean);
      sx += x;
      sy += y;
      sxx += x * x;
      sxy += x * y;
      ++n;
    }
    slopes[stepper] = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  }
  return slopes;
}

std::map<std::pair<int, int>, double> error_ratios(const std::vector<BenchRecord>& records) {
  std::map<std::pair<int, int>, std::pair<std::pair<double, int>, std::pair<double, int>>> acc;
  for (const BenchRecord& r : records) {
    if (!std::isfinite(r.error)) continue;
    auto& cell = acc[{r.n_sites, r.n_steps}];
    auto& side = (r.stepper == StepperKind::Riemann) ? cell.first : cell.second;
    side.first += r.error;
    ++side.second;
  }
  std::map<std::pair<int, int>, double> ratios;
  for (const auto& [key, cell] : acc) {
    if (cell.first.second == 0 || cell.second.second == 0) continue;
    const double mean_r = cell.first.first / cell.first.second;
    const double mean_s = cell.second.first / cell.second.second;
    ratios[key] = mean_r / mean_s;
  }
  return ratios;
}

std::string format_double(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

void emit_csv(const std::vector<BenchRecord>& records, std::ostream& os) {
  std::vector<BenchRecord> sorted = records;
  sort_records(sorted);
  os << "n_sites,n_steps,stepper,pulse_index,error,runtime_s,chi_max,truncation_weight\n";
  for (const BenchRecord& r : sorted) {
    os << r.n_sites << ',' << r.n_steps << ',' << to_string(r.stepper) << ','
       << r.pulse_index << ',' << format_double(r.error) << ','
       << format_double(r.runtime_s) << ',' << r.chi_max << ','
       << format_double(r.truncation_weight) << '\n';
  }
}

void emit_csv(const std::vector<BenchRecord>& records, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot open for writing: " + path);
  emit_csv(records, out);
  if (!out.good()) throw NumericalError("write failed: " + path);
}

void emit_trace_csv(const std::vector<TraceRow>& rows, std::ostream& os) {
  os << "n_sites,n_steps,stepper,pulse_index,step,t_us,error\n";
  for (const TraceRow& r : rows) {
    os << r.n_sites << ',' << r.n_steps << ',' << to_string(r.stepper) << ','
       << r.pulse_index << ',' << r.step << ',' << format_double(r.t_us) << ','
       << format_double(r.error) << '\n';
  }
}

void emit_trace_csv(const std::vector<TraceRow>& rows, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot open for writing: " + path);
  emit_trace_csv(rows, out);
  if (!out.good()) throw NumericalError("write failed: " + path);
}

}  // namespace nvmps
