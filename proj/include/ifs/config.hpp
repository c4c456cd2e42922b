// config.hpp — JSON system configuration: the ambient box, the map family,
// the sub-shift record, flags, and the numeric block.
#pragma once

#include <string>

#include <json.hpp>

#include "ifs/subshift.hpp"
#include "ifs/system.hpp"

namespace ifs {

struct NumericParams {
    double epsilon = 1e-4;
    double tol = 1e-3;
    int n_max = 80;
    int horizon = 20;
    std::size_t language_cap = 4096;
    std::size_t seed_cap = 1000000;
};

struct SystemConfig {
    Box box{Eigen::VectorXd::Zero(1), Eigen::VectorXd::Ones(1)};
    std::vector<std::pair<Eigen::MatrixXd, Eigen::VectorXd>> map_records;
    SubshiftSpec subshift = FullShift{1};
    bool totally_invariant = false;
    bool rooted_in_fixed_point = false;
    NumericParams numeric;

    // Certifies maps, checks box invariance and alphabet/map-count agreement.
    IfsSystem build() const;
};

SystemConfig parse_system_config(const nlohmann::ordered_json& j);
SystemConfig load_system_config(const std::string& path);
nlohmann::ordered_json system_config_to_json(const SystemConfig& c);

struct FactorPairConfig {
    SystemConfig source, target;
    FactorCode code;
    AffineTransform phi2;
};

FactorPairConfig load_factor_pair_config(const std::string& path);

// FNV-1a over the canonical serialized form.
std::string config_hash(const nlohmann::ordered_json& j);

}  // namespace ifs
