#ifndef IRSMEC_COMPUTE_HPP
#define IRSMEC_COMPUTE_HPP

#include <vector>

#include "irsmec/common.hpp"
#include "irsmec/scenario.hpp"

namespace irsmec {

struct ComputeParams {
    double bs_compute_hz = 5e9;  // f_b^max
    double bs_kappa = 1e-26;

    void validate() const;
};

/// Cycles demanded by a task: data size times computation intensity.
double required_cycles(const Task& task);

double local_delay(double cycles, double vehicle_hz);
double local_energy(double cycles, double vehicle_hz, double kappa);

/// Transmission plus BS computation delay. rate_bps and alloc_hz must be
/// positive; offloading with zero rate or zero allocation is infeasible.
double offload_delay(double data_bits, double rate_bps, double cycles, double alloc_hz);

struct OffloadEnergy {
    double transmission = 0.0;
    double computation = 0.0;
};
OffloadEnergy offload_energy(double tx_power_w, double transmission_delay_s, double cycles,
                             double alloc_hz, double bs_kappa);

/// One per (vehicle, slot); exactly one branch may be nonzero.
struct DelayEnergyRecord {
    double local_delay_s = 0.0;
    double local_energy_j = 0.0;
    double offload_delay_s = 0.0;
    double offload_energy_j = 0.0;
};

struct Totals {
    double delay_s = 0.0;
    double energy_j = 0.0;
};

/// Double sum over the records. Throws if any record has both branches set.
Totals totals(const std::vector<DelayEnergyRecord>& records);

}  // namespace irsmec

#endif
