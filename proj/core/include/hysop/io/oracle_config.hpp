#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include "hysop/preisach/model.hpp"

namespace hysop::io {

// Flat key/value description of the Preisach oracle:
//
//   kind = gaussian            # uniform | gaussian | relays
//   h_sat = 1000
//   b_sat = 1.2
//   n_grid = 512
//   params.mean_alpha = 0      # gaussian
//   params.weight = 1          # uniform
//   params.relay = 0.5 0.3 1   # relays, one line per relay: alpha beta weight
//
// Missing keys take the defaults below; unknown keys are rejected.
struct OracleConfig {
    preisach::DensityKind kind = preisach::DensityKind::gaussian;
    double h_sat = 1000.0;
    double b_sat = preisach::PreisachModel::default_b_sat;
    std::size_t n_grid = preisach::EverettMap::default_grid;
    double uniform_weight = 1.0;
    preisach::GaussianParams gaussian = preisach::GaussianParams::defaults_for(1000.0);
    std::vector<preisach::Relay> relays;

    preisach::PreisachModel build() const;
};

OracleConfig parse_oracle_config(std::istream& in);
OracleConfig load_oracle_config(const std::string& path);
void write_oracle_config(std::ostream& out, const OracleConfig& config);

}  // namespace hysop::io
