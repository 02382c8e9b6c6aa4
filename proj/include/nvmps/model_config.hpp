#pragma once

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "nvmps/model.hpp"

namespace nvmps {

// JSON schema for chain parameters (values in the units they are usually
// quoted in; converted to the library's 1/us frequency units internally):
//
//   {
//     "n_sites": 2,
//     "d_zfs_ghz": 2.87,                 // scalar or per-site array
//     "omega0_ghz": 2.75,
//     "gamma_e_ghz_per_t": -28.025,      // optional, NV default
//     "bz_gauss": [65.0, 20.086],        // scalar or per-site array
//     "g_khz": 100.0,                    // scalar or per-bond array
//     "zeta_rad": 0.0,                   // optional
//     "pulse": {                         // optional
//       "c1": 1.0, "w1_rad_per_us": 3.0,
//       "c2": 0.5, "w2_rad_per_us": 7.0
//     },
//     "initial_local_kets": [            // optional; one ket or one per site
//       [[0.0, 0.0], [1.0, 0.0], [0.0, 0.0]]   // complex as [re, im]
//     ]
//   }
struct ChainConfig {
  NvChainModel model;                  // model.pulse mirrors *pulse when present
  std::optional<PulseSpec> pulse;      // set only when the file carries "pulse"
  std::optional<std::vector<Eigen::Vector3cd>> initial_kets;
};

ChainConfig load_chain_config(const std::string& path);
ChainConfig parse_chain_config(const std::string& json_text);

}  // namespace nvmps
