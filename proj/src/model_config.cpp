#include "nvmps/model_config.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace nvmps {

namespace {

using nlohmann::json;

std::vector<double> scalar_or_array(const json& j, const char* key, std::size_t n,
                                    std::optional<double> fallback = {}) {
  if (!j.contains(key)) {
    if (fallback) return std::vector<double>(n, *fallback);
    throw ValidationError(std::string("config is missing key: ") + key);
  }
  const json& v = j.at(key);
  if (v.is_number()) return std::vector<double>(n, v.get<double>());
  if (v.is_array()) {
    auto out = v.get<std::vector<double>>();
    if (out.size() != n) {
      throw ValidationError(std::string("config key ") + key + " must have " +
                            std::to_string(n) + " entries");
    }
    return out;
  }
  throw ValidationError(std::string("config key ") + key + " must be a number or array");
}

Eigen::Vector3cd parse_ket(const json& jk) {
  if (!jk.is_array() || jk.size() != 3) {
    throw ValidationError("a ket must be an array of three [re, im] pairs");
  }
  Eigen::Vector3cd ket;
  for (int p = 0; p < 3; ++p) {
    const json& c = jk.at(p);
    if (!c.is_array() || c.size() != 2) {
      throw ValidationError("ket entries must be [re, im] pairs");
    }
    ket(p) = std::complex<double>(c.at(0).get<double>(), c.at(1).get<double>());
  }
  return ket;
}

}  // namespace

ChainConfig parse_chain_config(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ValidationError(std::string("config parse error: ") + e.what());
  }

  ChainConfig cfg;
  NvChainModel& m = cfg.model;
  if (!j.contains("n_sites")) throw ValidationError("config is missing key: n_sites");
  m.n_sites = j.at("n_sites").get<int>();
  if (m.n_sites < 2) throw ValidationError("n_sites must be at least 2");
  const std::size_t n = static_cast<std::size_t>(m.n_sites);

  for (double d : scalar_or_array(j, "d_zfs_ghz", n)) {
    m.d_zfs.push_back(ghz_to_inv_us(d));
  }
  m.omega0 = ghz_to_inv_us(j.at("omega0_ghz").get<double>());
  m.gamma_e = ghz_per_tesla_to_inv_us_gauss(
      j.value("gamma_e_ghz_per_t", kNvGammaEGhzPerTesla));
  m.bz = scalar_or_array(j, "bz_gauss", n);
  for (double g : scalar_or_array(j, "g_khz", n - 1)) {
    m.g.push_back(khz_to_inv_us(g));
  }
  m.zeta = j.value("zeta_rad", 0.0);
  m.use_canonical_sy = j.value("canonical_sy", false);

  if (j.contains("pulse")) {
    const json& p = j.at("pulse");
    PulseSpec pulse;
    pulse.c1 = p.value("c1", 0.0);
    pulse.w1 = p.value("w1_rad_per_us", 0.0);
    pulse.c2 = p.value("c2", 0.0);
    pulse.w2 = p.value("w2_rad_per_us", 0.0);
    m.pulse = pulse;
    cfg.pulse = pulse;
  }

  if (j.contains("initial_local_kets")) {
    const json& kets = j.at("initial_local_kets");
    if (!kets.is_array() || kets.empty()) {
      throw ValidationError("initial_local_kets must be a non-empty array");
    }
    std::vector<Eigen::Vector3cd> parsed;
    for (const json& jk : kets) parsed.push_back(parse_ket(jk));
    if (parsed.size() != 1 && parsed.size() != n) {
      throw ValidationError("initial_local_kets must have one ket, or one per site");
    }
    cfg.initial_kets = std::move(parsed);
  }

  m.validate();
  return cfg;
}

ChainConfig load_chain_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open config file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_chain_config(ss.str());
}

}  // namespace nvmps
