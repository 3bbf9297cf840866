#ifndef IRSMEC_CONFIG_HPP
#define IRSMEC_CONFIG_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "irsmec/solvers.hpp"

namespace irsmec {

struct RunConfig {
    std::vector<std::string> solvers{"gdmsg", "ropsra", "rpsgora", "ergops", "dopsra"};
    std::vector<std::uint64_t> seeds{1};
    std::string out_dir = "out";
};

/// Full experiment description: model, solver knobs and run matrix, plus the
/// dB-domain inputs kept around for the resolved-config dump.
struct ExperimentConfig {
    ModelParams params;
    SolverConfig solver;
    RunConfig run;

    double tx_power_dbm = 30.0;
    double ref_pathloss_db = -20.0;
    double rician_db = 3.0;
    double noise_dbm = -114.0;

    void validate() const;
};

ExperimentConfig default_experiment_config();

/// Parses the sectioned key=value format (see README). Unknown sections or
/// keys raise ConfigError naming them.
ExperimentConfig parse_experiment_config(const std::string& text);
ExperimentConfig load_experiment_config(const std::string& path);

/// Human-readable dump of every resolved value, dB inputs echoed next to
/// their linear conversions.
std::string resolved_config_dump(const ExperimentConfig& config);

}  // namespace irsmec

#endif
