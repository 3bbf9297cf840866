#include "irsmec/config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace irsmec {

namespace {

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r\n");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t\r\n");
    return s.substr(begin, end - begin + 1);
}

std::vector<std::string> split_list(const std::string& value) {
    std::vector<std::string> out;
    std::string token;
    for (char c : value) {
        if (c == ',' || c == ' ' || c == '\t') {
            if (!token.empty()) out.push_back(token);
            token.clear();
        } else {
            token.push_back(c);
        }
    }
    if (!token.empty()) out.push_back(token);
    return out;
}

double parse_double(const std::string& value, const std::string& where) {
    try {
        size_t used = 0;
        const double v = std::stod(value, &used);
        if (used != value.size()) throw std::invalid_argument("trailing");
        return v;
    } catch (const std::exception&) {
        throw ConfigError(where + ": cannot parse number '" + value + "'");
    }
}

int parse_int(const std::string& value, const std::string& where) {
    const double v = parse_double(value, where);
    if (v != std::floor(v)) throw ConfigError(where + ": expected integer, got '" + value + "'");
    return static_cast<int>(v);
}

bool parse_flag(const std::string& value, const std::string& where) {
    if (value == "on" || value == "true" || value == "1") return true;
    if (value == "off" || value == "false" || value == "0") return false;
    throw ConfigError(where + ": expected on|off, got '" + value + "'");
}

std::vector<double> parse_doubles(const std::string& value, size_t count, const std::string& where) {
    const auto parts = split_list(value);
    if (parts.size() != count)
        throw ConfigError(where + ": expected " + std::to_string(count) + " values");
    std::vector<double> out;
    for (const auto& p : parts) out.push_back(parse_double(p, where));
    return out;
}

}  // namespace

void ExperimentConfig::validate() const {
    params.scenario.validate();
    params.channel.validate();
    params.compute.validate();
    params.game.validate();
    solver.validate();
    if (run.seeds.empty()) throw ConfigError("[run] seeds: at least one seed required");
    if (run.solvers.empty()) throw ConfigError("[run] solvers: at least one solver required");
    for (const auto& name : run.solvers) {
        bool known = name == "oracle";
        for (const auto& s : solver_names()) known = known || s == name;
        if (!known) throw ConfigError("[run] solvers: unknown solver '" + name + "'");
    }
}

ExperimentConfig default_experiment_config() {
    ExperimentConfig cfg;
    cfg.params.scenario.tx_power_w = dbm_to_watt(cfg.tx_power_dbm);
    cfg.params.channel.ref_pathloss = db_to_linear(cfg.ref_pathloss_db);
    cfg.params.channel.rician = db_to_linear(cfg.rician_db);
    cfg.params.channel.noise_w = dbm_to_watt(cfg.noise_dbm);
    return cfg;
}

ExperimentConfig parse_experiment_config(const std::string& text) {
    ExperimentConfig cfg = default_experiment_config();
    auto& sc = cfg.params.scenario;
    auto& ch = cfg.params.channel;
    auto& co = cfg.params.compute;
    auto& gm = cfg.params.game;
    auto& sv = cfg.solver;

    std::istringstream in(text);
    std::string line;
    std::string section;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto comment = line.find('#');
        if (comment != std::string::npos) line = line.substr(0, comment);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ConfigError("line " + std::to_string(line_no) + ": malformed section header");
            section = line.substr(1, line.size() - 2);
            if (section != "scenario" && section != "channel" && section != "compute" &&
                section != "game" && section != "gdm" && section != "solver" && section != "run")
                throw ConfigError("unknown section [" + section + "]");
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(line_no) + ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        const std::string where = "[" + section + "] " + key;
        if (section.empty()) throw ConfigError(where + ": key outside any section");

        if (section == "scenario") {
            if (key == "vehicles") sc.num_vehicles = parse_int(value, where);
            else if (key == "antennas") sc.num_antennas = parse_int(value, where);
            else if (key == "elements") sc.num_elements = parse_int(value, where);
            else if (key == "slots") sc.num_slots = parse_int(value, where);
            else if (key == "slot_duration_s") sc.slot_duration_s = parse_double(value, where);
            else if (key == "area_m") {
                const auto v = parse_doubles(value, 2, where);
                sc.area_width_m = v[0];
                sc.area_height_m = v[1];
            } else if (key == "bs_position_m") {
                const auto v = parse_doubles(value, 3, where);
                sc.bs_position = {v[0], v[1], v[2]};
            } else if (key == "irs_position_m") {
                const auto v = parse_doubles(value, 3, where);
                sc.irs_position = {v[0], v[1], v[2]};
            } else if (key == "task_prob") sc.task_prob = parse_double(value, where);
            else if (key == "data_size_mbit") {
                const auto v = parse_doubles(value, 2, where);
                sc.data_size_bits = {v[0] * 1e6, v[1] * 1e6};
            } else if (key == "intensity_cpb") {
                const auto v = parse_doubles(value, 2, where);
                sc.intensity_cpb = {v[0], v[1]};
            } else if (key == "deadline_s") {
                const auto v = parse_doubles(value, 2, where);
                sc.deadline_s = {v[0], v[1]};
            } else if (key == "speed_mps") {
                const auto v = parse_doubles(value, 2, where);
                sc.speed_mps = {v[0], v[1]};
            } else if (key == "accel_mps2") {
                const auto v = parse_doubles(value, 2, where);
                sc.accel_mps2 = {v[0], v[1]};
            } else if (key == "vehicle_compute_ghz") sc.vehicle_compute_hz = parse_double(value, where) * 1e9;
            else if (key == "tx_power_dbm") {
                cfg.tx_power_dbm = parse_double(value, where);
                sc.tx_power_w = dbm_to_watt(cfg.tx_power_dbm);
            } else if (key == "vehicle_kappa") sc.vehicle_kappa = parse_double(value, where);
            else throw ConfigError(where + ": unknown key");
        } else if (section == "channel") {
            if (key == "ref_pathloss_db") {
                cfg.ref_pathloss_db = parse_double(value, where);
                ch.ref_pathloss = db_to_linear(cfg.ref_pathloss_db);
            } else if (key == "exponent_vehicle_bs") ch.exp_vehicle_bs = parse_double(value, where);
            else if (key == "exponent_vehicle_irs") ch.exp_vehicle_irs = parse_double(value, where);
            else if (key == "exponent_irs_bs") ch.exp_irs_bs = parse_double(value, where);
            else if (key == "rician_db") {
                cfg.rician_db = parse_double(value, where);
                ch.rician = db_to_linear(cfg.rician_db);
            } else if (key == "bandwidth_mhz") ch.bandwidth_hz = parse_double(value, where) * 1e6;
            else if (key == "noise_dbm") {
                cfg.noise_dbm = parse_double(value, where);
                ch.noise_w = dbm_to_watt(cfg.noise_dbm);
            } else if (key == "interference") ch.interference = parse_flag(value, where);
            else throw ConfigError(where + ": unknown key");
        } else if (section == "compute") {
            if (key == "bs_compute_ghz") co.bs_compute_hz = parse_double(value, where) * 1e9;
            else if (key == "bs_kappa") co.bs_kappa = parse_double(value, where);
            else throw ConfigError(where + ": unknown key");
        } else if (section == "game") {
            if (key == "w_vehicle") gm.w_vehicle = parse_double(value, where);
            else if (key == "w_bs") gm.w_bs = parse_double(value, where);
            else if (key == "revenue_shift") gm.revenue_shift = parse_double(value, where);
            else if (key == "unit_price") gm.unit_price = parse_double(value, where);
            else if (key == "vehicle_budget") gm.vehicle_budget = parse_double(value, where);
            else if (key == "bs_price_floor") gm.bs_price_floor = parse_double(value, where);
            else throw ConfigError(where + ": unknown key");
        } else if (section == "gdm") {
            if (key == "steps") sv.gdm.steps = parse_int(value, where);
            else if (key == "beta_min") sv.gdm.beta_min = parse_double(value, where);
            else if (key == "beta_max") sv.gdm.beta_max = parse_double(value, where);
            else if (key == "hidden") {
                sv.gdm.hidden.clear();
                for (const auto& p : split_list(value)) sv.gdm.hidden.push_back(parse_int(p, where));
            } else if (key == "time_embed_dim") sv.gdm.time_embed_dim = parse_int(value, where);
            else if (key == "lr") sv.gdm.lr = parse_double(value, where);
            else if (key == "elite_capacity") sv.gdm.elite_capacity = parse_int(value, where);
            else if (key == "train_steps") sv.gdm.train_steps = parse_int(value, where);
            else if (key == "phase_candidates") sv.gdm.phase_candidates = parse_int(value, where);
            else throw ConfigError(where + ": unknown key");
        } else if (section == "solver") {
            if (key == "j_iter") sv.j_iter = parse_int(value, where);
            else if (key == "epsilon") sv.epsilon = parse_double(value, where);
            else if (key == "dopsra_episodes") sv.dopsra_episodes = parse_int(value, where);
            else if (key == "dopsra_batch") sv.dopsra_batch = parse_int(value, where);
            else if (key == "dopsra_lr") sv.dopsra_lr = parse_double(value, where);
            else if (key == "dopsra_clip") sv.dopsra_clip = parse_double(value, where);
            else if (key == "phase_grid") sv.phase_grid = parse_int(value, where);
            else if (key == "resource_grid") sv.resource_grid = parse_int(value, where);
            else if (key == "oracle_phase_grid") sv.oracle_phase_grid = parse_int(value, where);
            else if (key == "oracle_resource_grid") sv.oracle_resource_grid = parse_int(value, where);
            else throw ConfigError(where + ": unknown key");
        } else if (section == "run") {
            if (key == "solvers") cfg.run.solvers = split_list(value);
            else if (key == "seeds") {
                cfg.run.seeds.clear();
                for (const auto& p : split_list(value))
                    cfg.run.seeds.push_back(static_cast<std::uint64_t>(parse_double(p, where)));
            } else if (key == "out_dir") cfg.run.out_dir = value;
            else throw ConfigError(where + ": unknown key");
        }
    }
    cfg.validate();
    return cfg;
}

ExperimentConfig load_experiment_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_experiment_config(buf.str());
}

std::string resolved_config_dump(const ExperimentConfig& cfg) {
    const auto& sc = cfg.params.scenario;
    const auto& ch = cfg.params.channel;
    const auto& co = cfg.params.compute;
    const auto& gm = cfg.params.game;
    const auto& sv = cfg.solver;
    char buf[256];
    std::string out;
    auto line = [&](const char* text) {
        out += text;
        out += '\n';
    };
    auto put = [&](const char* fmt, auto... args) {
        std::snprintf(buf, sizeof buf, fmt, args...);
        out += buf;
        out += '\n';
    };
    line("[scenario]");
    put("vehicles = %d", sc.num_vehicles);
    put("antennas = %d", sc.num_antennas);
    put("elements = %d", sc.num_elements);
    put("slots = %d", sc.num_slots);
    put("slot_duration_s = %g", sc.slot_duration_s);
    put("area_m = %g %g", sc.area_width_m, sc.area_height_m);
    put("bs_position_m = %g %g %g", sc.bs_position.x, sc.bs_position.y, sc.bs_position.z);
    put("irs_position_m = %g %g %g", sc.irs_position.x, sc.irs_position.y, sc.irs_position.z);
    put("task_prob = %g", sc.task_prob);
    put("data_size_bits = %g %g", sc.data_size_bits.lo, sc.data_size_bits.hi);
    put("intensity_cpb = %g %g", sc.intensity_cpb.lo, sc.intensity_cpb.hi);
    put("deadline_s = %g %g", sc.deadline_s.lo, sc.deadline_s.hi);
    put("speed_mps = %g %g", sc.speed_mps.lo, sc.speed_mps.hi);
    put("accel_mps2 = %g %g", sc.accel_mps2.lo, sc.accel_mps2.hi);
    put("vehicle_compute_hz = %g", sc.vehicle_compute_hz);
    put("tx_power = %g dBm = %g W", cfg.tx_power_dbm, sc.tx_power_w);
    put("vehicle_kappa = %g", sc.vehicle_kappa);
    line("[channel]");
    put("ref_pathloss = %g dB = %g", cfg.ref_pathloss_db, ch.ref_pathloss);
    put("exponent_vehicle_bs = %g", ch.exp_vehicle_bs);
    put("exponent_vehicle_irs = %g", ch.exp_vehicle_irs);
    put("exponent_irs_bs = %g", ch.exp_irs_bs);
    put("rician = %g dB = %g", cfg.rician_db, ch.rician);
    put("bandwidth_hz = %g", ch.bandwidth_hz);
    put("noise = %g dBm = %g W", cfg.noise_dbm, ch.noise_w);
    put("interference = %s", ch.interference ? "on" : "off");
    line("[compute]");
    put("bs_compute_hz = %g", co.bs_compute_hz);
    put("bs_kappa = %g", co.bs_kappa);
    line("[game]");
    put("w_vehicle = %g", gm.w_vehicle);
    put("w_bs = %g", gm.w_bs);
    put("revenue_shift = %g", gm.revenue_shift);
    put("unit_price = %g", gm.unit_price);
    put("vehicle_budget = %g", gm.vehicle_budget);
    put("bs_price_floor = %g", gm.bs_price_floor);
    line("[gdm]");
    put("steps = %d", sv.gdm.steps);
    put("beta_min = %g", sv.gdm.beta_min);
    put("beta_max = %g", sv.gdm.beta_max);
    {
        std::string hidden;
        for (int h : sv.gdm.hidden) {
            if (!hidden.empty()) hidden += ' ';
            hidden += std::to_string(h);
        }
        put("hidden = %s", hidden.c_str());
    }
    put("time_embed_dim = %d", sv.gdm.time_embed_dim);
    put("lr = %g", sv.gdm.lr);
    put("elite_capacity = %d", sv.gdm.elite_capacity);
    put("train_steps = %d", sv.gdm.train_steps);
    put("phase_candidates = %d", sv.gdm.phase_candidates);
    line("[solver]");
    put("j_iter = %d", sv.j_iter);
    put("epsilon = %g", sv.epsilon);
    put("dopsra_episodes = %d", sv.dopsra_episodes);
    put("dopsra_batch = %d", sv.dopsra_batch);
    put("dopsra_lr = %g", sv.dopsra_lr);
    put("dopsra_clip = %g", sv.dopsra_clip);
    put("phase_grid = %d", sv.phase_grid);
    put("resource_grid = %d", sv.resource_grid);
    put("oracle_phase_grid = %d", sv.oracle_phase_grid);
    put("oracle_resource_grid = %d", sv.oracle_resource_grid);
    line("[run]");
    {
        std::string solvers;
        for (const auto& s : cfg.run.solvers) {
            if (!solvers.empty()) solvers += ',';
            solvers += s;
        }
        put("solvers = %s", solvers.c_str());
        std::string seeds;
        for (auto s : cfg.run.seeds) {
            if (!seeds.empty()) seeds += ',';
            seeds += std::to_string(s);
        }
        put("seeds = %s", seeds.c_str());
    }
    put("out_dir = %s", cfg.run.out_dir.c_str());
    return out;
}

}  // namespace irsmec
