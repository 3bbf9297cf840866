#include "irsmec/scenario.hpp"

#include <algorithm>
#include <cmath>

namespace irsmec {

namespace {

void require(bool ok, const char* field) {
    if (!ok) throw ConfigError(std::string("invalid scenario config: ") + field);
}

// Mirrors p back into [lo, hi], flipping v on each bounce. Handles steps
// longer than the box span.
void reflect_axis(double& p, double& v, double lo, double hi) {
    if (hi <= lo) {
        p = lo;
        return;
    }
    while (p < lo || p > hi) {
        if (p > hi) {
            p = 2.0 * hi - p;
        } else {
            p = 2.0 * lo - p;
        }
        v = -v;
    }
}

}  // namespace

void ScenarioConfig::validate() const {
    require(num_vehicles >= 1, "num_vehicles must be >= 1");
    require(num_antennas >= 1, "num_antennas must be >= 1");
    require(num_elements >= 1, "num_elements must be >= 1");
    require(num_slots >= 1, "num_slots must be >= 1");
    require(slot_duration_s > 0.0, "slot_duration_s must be > 0");
    require(area_width_m >= 0.0, "area_width_m must be >= 0");
    require(area_height_m >= 0.0, "area_height_m must be >= 0");
    require(std::isfinite(bs_position.x) && std::isfinite(bs_position.y) &&
                std::isfinite(bs_position.z),
            "bs_position must be finite");
    require(std::isfinite(irs_position.x) && std::isfinite(irs_position.y) &&
                std::isfinite(irs_position.z),
            "irs_position must be finite");
    require(task_prob >= 0.0 && task_prob <= 1.0, "task_prob must be in [0,1]");
    require(data_size_bits.valid() && data_size_bits.lo > 0.0,
            "data_size_bits range must satisfy 0 < lo <= hi");
    require(intensity_cpb.valid() && intensity_cpb.lo > 0.0,
            "intensity_cpb range must satisfy 0 < lo <= hi");
    require(deadline_s.valid() && deadline_s.lo > 0.0,
            "deadline_s range must satisfy 0 < lo <= hi");
    require(speed_mps.valid() && speed_mps.lo >= 0.0,
            "speed_mps range must satisfy 0 <= lo <= hi");
    require(accel_mps2.valid(), "accel_mps2 range must satisfy lo <= hi");
    require(vehicle_compute_hz > 0.0, "vehicle_compute_hz must be > 0");
    require(tx_power_w > 0.0, "tx_power_w must be > 0");
    require(vehicle_kappa >= 0.0, "vehicle_kappa must be >= 0");
}

ScenarioState init_scenario(const ScenarioConfig& config, Rng& rng) {
    config.validate();
    ScenarioState state;
    state.config = config;
    state.vehicles.resize(config.num_vehicles);
    for (auto& v : state.vehicles) {
        v.position.x = rng.uniform(0.0, config.area_width_m);
        v.position.y = rng.uniform(0.0, config.area_height_m);
        v.position.z = 0.0;
        const double speed = rng.uniform(config.speed_mps.lo, config.speed_mps.hi);
        const double heading = rng.uniform(0.0, kTwoPi);
        v.vx = speed * std::cos(heading);
        v.vy = speed * std::sin(heading);
        v.ax = rng.uniform(config.accel_mps2.lo, config.accel_mps2.hi);
        v.ay = rng.uniform(config.accel_mps2.lo, config.accel_mps2.hi);
    }
    return state;
}

ScenarioState init_scenario(const ScenarioConfig& config, std::uint64_t seed) {
    Rng rng(seed);
    return init_scenario(config, rng);
}

ScenarioState step_mobility(const ScenarioState& state) {
    ScenarioState next = state;
    const double dt = state.config.slot_duration_s;
    for (auto& v : next.vehicles) {
        v.position.x += v.vx * dt + 0.5 * v.ax * dt * dt;
        v.position.y += v.vy * dt + 0.5 * v.ay * dt * dt;
        v.vx += v.ax * dt;
        v.vy += v.ay * dt;
        reflect_axis(v.position.x, v.vx, 0.0, state.config.area_width_m);
        reflect_axis(v.position.y, v.vy, 0.0, state.config.area_height_m);
    }
    next.slot = state.slot + 1;
    return next;
}

std::vector<Task> generate_tasks(const ScenarioState& state, Rng& rng) {
    std::vector<Task> tasks(state.vehicles.size());
    const auto& c = state.config;
    for (auto& t : tasks) {
        if (rng.uniform() < c.task_prob) {
            t.present = true;
            t.data_bits = rng.uniform(c.data_size_bits.lo, c.data_size_bits.hi);
            t.intensity_cpb = rng.uniform(c.intensity_cpb.lo, c.intensity_cpb.hi);
            t.deadline_s = rng.uniform(c.deadline_s.lo, c.deadline_s.hi);
        }
    }
    return tasks;
}

Distances distances(const ScenarioState& state) {
    Distances d;
    d.vehicle_bs.reserve(state.vehicles.size());
    d.vehicle_irs.reserve(state.vehicles.size());
    for (const auto& v : state.vehicles) {
        d.vehicle_bs.push_back(std::max(1.0, distance(v.position, state.config.bs_position)));
        d.vehicle_irs.push_back(std::max(1.0, distance(v.position, state.config.irs_position)));
    }
    d.irs_bs = std::max(1.0, distance(state.config.irs_position, state.config.bs_position));
    return d;
}

}  // namespace irsmec
