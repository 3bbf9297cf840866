#ifndef IRSMEC_EXPERIMENT_HPP
#define IRSMEC_EXPERIMENT_HPP

#include <map>
#include <string>
#include <vector>

#include "irsmec/config.hpp"

namespace irsmec {

/// In-memory mirror of metrics.csv / trace.csv.
struct ExperimentResults {
    struct MetricsRow {
        int slot = 0;
        std::string solver;
        std::uint64_t seed = 0;
        double delay = 0.0;
        double energy = 0.0;
        double qoe = 0.0;
        double revenue = 0.0;
    };
    struct TraceRow {
        int iter = 0;
        std::string solver;
        std::uint64_t seed = 0;
        double utility = 0.0;
        double reward = 0.0;
    };
    std::vector<MetricsRow> metrics;
    std::vector<TraceRow> trace;
};

/// Runs every (solver, seed) pair against a per-seed episode shared across
/// solvers and writes metrics.csv, trace.csv and resolved_config.txt to the
/// run's output directory (skipped when out_dir is empty).
ExperimentResults run_experiment(const ExperimentConfig& config);

/// Per-panel aggregate: cumulative metric per slot, mean and standard error
/// over seeds, one column pair per solver.
struct PanelData {
    std::vector<std::string> solvers;
    std::vector<std::vector<double>> mean;  // [solver][slot]
    std::vector<std::vector<double>> se;    // [solver][slot]
    int num_slots = 0;
};

/// Reads metrics.csv from `in_dir` and writes panel_{delay,energy,qoe,
/// revenue}.tsv next to it (or to out_dir if given). Returns the aggregates.
std::map<std::string, PanelData> emit_plot_data(const std::string& in_dir,
                                                const std::string& out_dir = "");

/// Builds the panels directly from in-memory results.
std::map<std::string, PanelData> aggregate_panels(const ExperimentResults& results);

/// Tiny-instance comparison of grid-restricted gdmsg against the brute-force
/// oracle over `num_seeds` paired episodes.
struct OracleCheck {
    int runs = 0;
    int hits = 0;  // runs with gdmsg >= 0.9 * oracle utility
    std::vector<double> gdmsg_utility;
    std::vector<double> oracle_utility;
};
OracleCheck oracle_check(const ExperimentConfig& config, int num_seeds);

}  // namespace irsmec

#endif
