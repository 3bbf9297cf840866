#ifndef IRSMEC_SCENARIO_HPP
#define IRSMEC_SCENARIO_HPP

#include <cstdint>
#include <vector>

#include "irsmec/common.hpp"
#include "irsmec/rng.hpp"

namespace irsmec {

/// Geometry, fleet and task-arrival parameters for one simulated episode.
struct ScenarioConfig {
    int num_vehicles = 6;
    int num_antennas = 1;     // BS array size S
    int num_elements = 512;   // IRS element count K
    int num_slots = 20;
    double slot_duration_s = 1.0;
    double area_width_m = 100.0;
    double area_height_m = 100.0;
    Vec3 bs_position{80.0, 40.0, 0.0};
    Vec3 irs_position{0.0, 0.0, 50.0};
    double task_prob = 0.8;
    Range data_size_bits{0.4e6, 1.6e6};
    Range intensity_cpb{4000.0, 9000.0};   // cycles per bit
    Range deadline_s{0.1, 10.0};
    Range speed_mps{5.0, 15.0};
    Range accel_mps2{-1.5, 1.5};
    double vehicle_compute_hz = 1e9;
    double tx_power_w = 1.0;        // 30 dBm
    double vehicle_kappa = 1e-27;   // switched capacitance

    /// Throws ConfigError naming the first offending field.
    void validate() const;
};

struct VehicleState {
    Vec3 position;       // z stays 0
    double vx = 0.0, vy = 0.0;
    double ax = 0.0, ay = 0.0;
};

/// At most one task per vehicle per slot; fields are meaningful only
/// when present.
struct Task {
    bool present = false;
    double data_bits = 0.0;
    double intensity_cpb = 0.0;
    double deadline_s = 0.0;
};

struct ScenarioState {
    ScenarioConfig config;
    std::vector<VehicleState> vehicles;
    int slot = 0;
};

/// Places vehicles uniformly in the area and samples their kinematics.
/// Deterministic for a fixed seed.
ScenarioState init_scenario(const ScenarioConfig& config, std::uint64_t seed);
ScenarioState init_scenario(const ScenarioConfig& config, Rng& rng);

/// Constant-acceleration step over one slot; components leaving the area are
/// mirrored back in and the corresponding velocity component is negated.
ScenarioState step_mobility(const ScenarioState& state);

/// Independent Bernoulli arrival per vehicle, fields uniform in their ranges.
std::vector<Task> generate_tasks(const ScenarioState& state, Rng& rng);

/// 3-D Euclidean distances, clamped below at the 1 m reference distance.
struct Distances {
    std::vector<double> vehicle_bs;
    std::vector<double> vehicle_irs;
    double irs_bs = 0.0;
};
Distances distances(const ScenarioState& state);

}  // namespace irsmec

#endif
