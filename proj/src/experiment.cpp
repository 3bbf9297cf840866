#include "irsmec/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace irsmec {

namespace {

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::string token;
    for (char c : line) {
        if (c == ',') {
            out.push_back(token);
            token.clear();
        } else {
            token.push_back(c);
        }
    }
    out.push_back(token);
    return out;
}

bool is_iterative(const std::string& solver) {
    return solver == "gdmsg" || solver == "rpsgora" || solver == "ergops" || solver == "dopsra";
}

}  // namespace

ExperimentResults run_experiment(const ExperimentConfig& config) {
    config.validate();
    ExperimentResults results;

    for (const auto seed : config.run.seeds) {
        const Episode episode = build_episode(config.params, seed);
        for (const auto& name : config.run.solvers) {
            const SolveResult r = solve(name, episode, config.solver, seed);
            for (size_t n = 0; n < r.per_slot.size(); ++n) {
                const auto& m = r.per_slot[n];
                results.metrics.push_back({static_cast<int>(n) + 1, name, seed, m.delay_s,
                                           m.energy_j, m.qoe, m.revenue});
            }
            if (is_iterative(name)) {
                for (size_t j = 0; j < r.utility_trace.size(); ++j)
                    results.trace.push_back({static_cast<int>(j), name, seed, r.utility_trace[j],
                                             r.reward_trace[j]});
            }
        }
    }

    if (!config.run.out_dir.empty()) {
        namespace fs = std::filesystem;
        fs::create_directories(config.run.out_dir);
        const fs::path dir(config.run.out_dir);
        {
            std::ofstream out(dir / "metrics.csv");
            if (!out) throw std::runtime_error("cannot write to " + config.run.out_dir);
            out << "slot,solver,seed,delay,energy,qoe,revenue\n";
            for (const auto& row : results.metrics)
                out << row.slot << ',' << row.solver << ',' << row.seed << ',' << fmt(row.delay)
                    << ',' << fmt(row.energy) << ',' << fmt(row.qoe) << ',' << fmt(row.revenue)
                    << '\n';
        }
        {
            std::ofstream out(dir / "trace.csv");
            out << "iter,solver,seed,utility,reward\n";
            for (const auto& row : results.trace)
                out << row.iter << ',' << row.solver << ',' << row.seed << ',' << fmt(row.utility)
                    << ',' << fmt(row.reward) << '\n';
        }
        {
            std::ofstream out(dir / "resolved_config.txt");
            out << resolved_config_dump(config);
        }
    }
    return results;
}

std::map<std::string, PanelData> aggregate_panels(const ExperimentResults& results) {
    // Stable solver and seed orderings by first appearance.
    std::vector<std::string> solvers;
    std::vector<std::uint64_t> seeds;
    int num_slots = 0;
    for (const auto& row : results.metrics) {
        if (std::find(solvers.begin(), solvers.end(), row.solver) == solvers.end())
            solvers.push_back(row.solver);
        if (std::find(seeds.begin(), seeds.end(), row.seed) == seeds.end())
            seeds.push_back(row.seed);
        num_slots = std::max(num_slots, row.slot);
    }

    const std::vector<std::string> panels{"delay", "energy", "qoe", "revenue"};
    std::map<std::string, PanelData> out;
    for (const auto& panel : panels) {
        PanelData data;
        data.solvers = solvers;
        data.num_slots = num_slots;
        data.mean.assign(solvers.size(), std::vector<double>(num_slots, 0.0));
        data.se.assign(solvers.size(), std::vector<double>(num_slots, 0.0));

        for (size_t si = 0; si < solvers.size(); ++si) {
            // cumulative value per seed per slot
            std::vector<std::vector<double>> per_seed(seeds.size(),
                                                      std::vector<double>(num_slots, 0.0));
            for (const auto& row : results.metrics) {
                if (row.solver != solvers[si]) continue;
                const auto seed_it = std::find(seeds.begin(), seeds.end(), row.seed);
                const size_t di = static_cast<size_t>(seed_it - seeds.begin());
                const double v = panel == "delay"     ? row.delay
                                 : panel == "energy"  ? row.energy
                                 : panel == "qoe"     ? row.qoe
                                                      : row.revenue;
                per_seed[di][row.slot - 1] += v;
            }
            for (auto& series : per_seed)
                for (int n = 1; n < num_slots; ++n) series[n] += series[n - 1];

            for (int n = 0; n < num_slots; ++n) {
                double mean = 0.0;
                for (const auto& series : per_seed) mean += series[n];
                mean /= seeds.size();
                double var = 0.0;
                for (const auto& series : per_seed) var += (series[n] - mean) * (series[n] - mean);
                const double se = seeds.size() > 1
                                      ? std::sqrt(var / (seeds.size() - 1)) / std::sqrt(double(seeds.size()))
                                      : 0.0;
                data.mean[si][n] = mean;
                data.se[si][n] = se;
            }
        }
        out[panel] = std::move(data);
    }
    return out;
}

std::map<std::string, PanelData> emit_plot_data(const std::string& in_dir,
                                                const std::string& out_dir) {
    namespace fs = std::filesystem;
    const fs::path metrics_path = fs::path(in_dir) / "metrics.csv";
    std::ifstream in(metrics_path);
    if (!in) throw std::runtime_error("missing metrics file: " + metrics_path.string());

    ExperimentResults results;
    std::string line;
    if (!std::getline(in, line) || line != "slot,solver,seed,delay,energy,qoe,revenue")
        throw std::runtime_error("unexpected metrics.csv header in " + metrics_path.string());
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto f = split_csv(line);
        if (f.size() != 7) throw std::runtime_error("malformed metrics.csv row: " + line);
        results.metrics.push_back({std::stoi(f[0]), f[1], std::stoull(f[2]), std::stod(f[3]),
                                   std::stod(f[4]), std::stod(f[5]), std::stod(f[6])});
    }

    auto panels = aggregate_panels(results);
    const fs::path dir = out_dir.empty() ? fs::path(in_dir) : fs::path(out_dir);
    fs::create_directories(dir);
    for (const auto& [panel, data] : panels) {
        std::ofstream out(dir / ("panel_" + panel + ".tsv"));
        out << "slot";
        for (const auto& s : data.solvers) out << '\t' << s << "_mean";
        for (const auto& s : data.solvers) out << '\t' << s << "_se";
        out << '\n';
        for (int n = 0; n < data.num_slots; ++n) {
            out << (n + 1);
            for (size_t si = 0; si < data.solvers.size(); ++si) out << '\t' << fmt(data.mean[si][n]);
            for (size_t si = 0; si < data.solvers.size(); ++si) out << '\t' << fmt(data.se[si][n]);
            out << '\n';
        }
    }
    return panels;
}

OracleCheck oracle_check(const ExperimentConfig& config, int num_seeds) {
    config.validate();
    SolverConfig restricted = config.solver;
    restricted.phase_grid = config.solver.oracle_phase_grid;
    restricted.resource_grid = config.solver.oracle_resource_grid;

    OracleCheck check;
    for (int s = 1; s <= num_seeds; ++s) {
        const Episode episode = build_episode(config.params, static_cast<std::uint64_t>(s));
        const SolveResult oracle = brute_force_oracle(episode, config.solver.oracle_phase_grid,
                                                      config.solver.oracle_resource_grid);
        const SolveResult gdm = gdmsg_solve(episode, restricted, static_cast<std::uint64_t>(s));
        check.runs += 1;
        check.oracle_utility.push_back(oracle.total_utility);
        check.gdmsg_utility.push_back(gdm.total_utility);
        if (gdm.total_utility >= 0.9 * oracle.total_utility) check.hits += 1;
    }
    return check;
}

}  // namespace irsmec
