#include "irsmec/compute.hpp"

#include <stdexcept>

namespace irsmec {

void ComputeParams::validate() const {
    if (bs_compute_hz <= 0.0) throw ConfigError("invalid compute config: bs_compute_hz must be > 0");
    if (bs_kappa < 0.0) throw ConfigError("invalid compute config: bs_kappa must be >= 0");
}

double required_cycles(const Task& task) {
    if (!task.present) throw std::domain_error("required_cycles: task absent");
    return task.data_bits * task.intensity_cpb;
}

double local_delay(double cycles, double vehicle_hz) { return cycles / vehicle_hz; }

double local_energy(double cycles, double vehicle_hz, double kappa) {
    return kappa * vehicle_hz * vehicle_hz * cycles;
}

double offload_delay(double data_bits, double rate_bps, double cycles, double alloc_hz) {
    if (rate_bps <= 0.0 || alloc_hz <= 0.0)
        throw std::domain_error("offload_delay: offload chosen with zero rate or allocation");
    return data_bits / rate_bps + cycles / alloc_hz;
}

OffloadEnergy offload_energy(double tx_power_w, double transmission_delay_s, double cycles,
                             double alloc_hz, double bs_kappa) {
    OffloadEnergy e;
    e.transmission = tx_power_w * transmission_delay_s;
    e.computation = bs_kappa * alloc_hz * alloc_hz * cycles;
    return e;
}

Totals totals(const std::vector<DelayEnergyRecord>& records) {
    Totals t;
    for (const auto& r : records) {
        const bool local = r.local_delay_s != 0.0 || r.local_energy_j != 0.0;
        const bool offload = r.offload_delay_s != 0.0 || r.offload_energy_j != 0.0;
        if (local && offload)
            throw std::logic_error("totals: record has both local and offload branches set");
        t.delay_s += r.local_delay_s + r.offload_delay_s;
        t.energy_j += r.local_energy_j + r.offload_energy_j;
    }
    return t;
}

}  // namespace irsmec
