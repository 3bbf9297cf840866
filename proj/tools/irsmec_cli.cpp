#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "irsmec/experiment.hpp"

namespace {

std::vector<std::string> split_commas(const std::string& s) {
    std::vector<std::string> out;
    std::string token;
    for (char c : s) {
        if (c == ',') {
            if (!token.empty()) out.push_back(token);
            token.clear();
        } else {
            token.push_back(c);
        }
    }
    if (!token.empty()) out.push_back(token);
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"IRS-assisted MEC simulator: diffusion-based Stackelberg solver and benchmarks"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir;
    std::string seeds_arg;
    std::string solvers_arg;
    std::string in_dir;
    std::string plot_out;
    int oracle_runs = 20;

    auto* run = app.add_subcommand("run", "Run an experiment described by a config file");
    run->add_option("--config", config_path, "config file path")->required();
    run->add_option("--out", out_dir, "output directory (overrides [run] out_dir)");
    run->add_option("--seeds", seeds_arg, "comma-separated seeds (overrides [run] seeds)");
    run->add_option("--solvers", solvers_arg, "comma-separated solvers (overrides [run] solvers)");

    auto* oracle = app.add_subcommand(
        "oracle-check", "Compare grid-restricted gdmsg against the brute-force oracle");
    oracle->add_option("--config", config_path, "config file path (tiny instance)")->required();
    oracle->add_option("--runs", oracle_runs, "number of seeded runs");

    auto* plot = app.add_subcommand("plot-data", "Aggregate metrics.csv into per-panel TSV files");
    plot->add_option("--in", in_dir, "directory containing metrics.csv")->required();
    plot->add_option("--out", plot_out, "output directory (defaults to --in)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (run->parsed()) {
            auto config = irsmec::load_experiment_config(config_path);
            if (!out_dir.empty()) config.run.out_dir = out_dir;
            if (!seeds_arg.empty()) {
                config.run.seeds.clear();
                for (const auto& s : split_commas(seeds_arg))
                    config.run.seeds.push_back(std::stoull(s));
            }
            if (!solvers_arg.empty()) config.run.solvers = split_commas(solvers_arg);
            config.validate();
            const auto results = irsmec::run_experiment(config);
            std::cout << "wrote " << config.run.out_dir << "/metrics.csv ("
                      << results.metrics.size() << " rows), trace.csv (" << results.trace.size()
                      << " rows)\n";
        } else if (oracle->parsed()) {
            const auto config = irsmec::load_experiment_config(config_path);
            const auto check = irsmec::oracle_check(config, oracle_runs);
            for (int i = 0; i < check.runs; ++i) {
                std::cout << "seed " << (i + 1) << ": gdmsg " << check.gdmsg_utility[i]
                          << " oracle " << check.oracle_utility[i] << '\n';
            }
            std::cout << check.hits << "/" << check.runs
                      << " runs reached 0.9x oracle utility\n";
        } else if (plot->parsed()) {
            const auto panels = irsmec::emit_plot_data(in_dir, plot_out);
            const std::string dir = plot_out.empty() ? in_dir : plot_out;
            for (const auto& [name, data] : panels)
                std::cout << "wrote " << dir << "/panel_" << name << ".tsv ("
                          << data.num_slots << " slots, " << data.solvers.size() << " solvers)\n";
        }
    } catch (const irsmec::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    }
    return 0;
}
