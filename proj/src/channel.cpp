#include "irsmec/channel.hpp"

#include <cmath>
#include <stdexcept>

namespace irsmec {

void ChannelParams::validate() const {
    if (ref_pathloss <= 0.0) throw ConfigError("invalid channel config: ref_pathloss must be > 0");
    if (exp_vehicle_bs <= 0.0 || exp_vehicle_irs <= 0.0 || exp_irs_bs <= 0.0)
        throw ConfigError("invalid channel config: path loss exponents must be > 0");
    if (rician < 0.0) throw ConfigError("invalid channel config: rician factor must be >= 0");
    if (bandwidth_hz <= 0.0) throw ConfigError("invalid channel config: bandwidth_hz must be > 0");
    if (noise_w <= 0.0) throw ConfigError("invalid channel config: noise_w must be > 0");
}

CVec apply_pathloss(double d, double alpha, double rho, const CVec& scatter) {
    if (d < 1.0) throw std::domain_error("pathloss: distance below reference distance 1 m");
    const double scale = std::sqrt(rho * std::pow(d, -alpha));
    CVec out(scatter.size());
    for (size_t i = 0; i < scatter.size(); ++i) out[i] = scale * scatter[i];
    return out;
}

CVec rayleigh_gain(double d, double alpha, double rho, int n, Rng& rng) {
    CVec scatter(n);
    for (auto& s : scatter) s = rng.cgaussian();
    return apply_pathloss(d, alpha, rho, scatter);
}

CVec rician_gain(double d, double alpha, double rho, double rician_factor, const CVec& los,
                 Rng& rng) {
    if (rician_factor < 0.0) throw std::domain_error("rician_gain: factor must be >= 0");
    const double w_los = std::sqrt(rician_factor / (1.0 + rician_factor));
    const double w_nlos = std::sqrt(1.0 / (1.0 + rician_factor));
    CVec mix(los.size());
    for (size_t i = 0; i < los.size(); ++i)
        mix[i] = w_los * los[i] + w_nlos * rng.cgaussian();
    return apply_pathloss(d, alpha, rho, mix);
}

CVec los_steering(const Vec3& array_pos, const Vec3& other_pos, int n) {
    const double d = distance(array_pos, other_pos);
    if (d <= 0.0) throw std::domain_error("los_steering: coincident positions");
    const double cos_phi = (other_pos.x - array_pos.x) / d;
    CVec a(n);
    for (int k = 0; k < n; ++k) {
        const double phase = 3.141592653589793 * k * cos_phi;
        a[k] = Complex(std::cos(phase), std::sin(phase));
    }
    return a;
}

CVec los_outer(const CVec& a, const CVec& b) {
    CVec m(a.size() * b.size());
    for (size_t r = 0; r < a.size(); ++r)
        for (size_t c = 0; c < b.size(); ++c) m[r * b.size() + c] = a[r] * b[c];
    return m;
}

CVec reflection_matrix(const std::vector<double>& theta) {
    CVec diag(theta.size());
    for (size_t k = 0; k < theta.size(); ++k) {
        if (theta[k] < 0.0 || theta[k] >= kTwoPi)
            throw std::domain_error("reflection_matrix: phase outside [0, 2*pi)");
        diag[k] = Complex(std::cos(theta[k]), std::sin(theta[k]));
    }
    return diag;
}

CVec effective_channel(const CVec& h_ib, const CVec& h_ir, const CVec& reflection_diag,
                       const CVec& h_rb, int num_elements, int num_antennas) {
    const size_t k_count = static_cast<size_t>(num_elements);
    const size_t s_count = static_cast<size_t>(num_antennas);
    if (h_ib.size() != s_count || h_ir.size() != k_count ||
        reflection_diag.size() != k_count || h_rb.size() != k_count * s_count)
        throw std::invalid_argument("effective_channel: dimension mismatch");
    CVec h = h_ib;
    for (size_t k = 0; k < k_count; ++k) {
        const Complex w = h_ir[k] * reflection_diag[k];
        const Complex* row = &h_rb[k * s_count];
        for (size_t s = 0; s < s_count; ++s) h[s] += w * row[s];
    }
    return h;
}

double sinr_from_gains(int i, const std::vector<double>& tx_power_w,
                       const std::vector<double>& effective_gain, double noise_w,
                       bool interference) {
    double denom = noise_w;
    if (interference) {
        for (size_t j = 0; j < effective_gain.size(); ++j) {
            if (static_cast<int>(j) == i) continue;
            denom += tx_power_w[j] * effective_gain[j];
        }
    }
    return tx_power_w[i] * effective_gain[i] / denom;
}

double rate_bps(double bandwidth_hz, int num_vehicles, double sinr) {
    return bandwidth_hz / num_vehicles * std::log2(1.0 + sinr);
}

std::vector<double> align_phases(const CVec& h_ib, const CVec& h_ir, const CVec& h_rb,
                                 int num_elements, int num_antennas) {
    int strongest = 0;
    for (int s = 1; s < num_antennas; ++s)
        if (std::abs(h_ib[s]) > std::abs(h_ib[strongest])) strongest = s;
    const double target = std::arg(h_ib[strongest]);
    std::vector<double> theta(num_elements);
    for (int k = 0; k < num_elements; ++k) {
        const Complex path = h_ir[k] * h_rb[k * num_antennas + strongest];
        theta[k] = normalize_phase(target - std::arg(path));
    }
    return theta;
}

std::vector<double> ChannelRealization::effective_gains(const std::vector<double>& theta) const {
    const CVec diag = reflection_matrix(theta);
    std::vector<double> gains(vehicle_bs.size());
    for (size_t i = 0; i < vehicle_bs.size(); ++i) {
        const CVec h =
            effective_channel(vehicle_bs[i], vehicle_irs[i], diag, irs_bs, num_elements, num_antennas);
        double g = 0.0;
        for (const auto& c : h) g += std::norm(c);
        gains[i] = g;
    }
    return gains;
}

ChannelRealization realize_channel(const ScenarioState& state, const ChannelParams& params,
                                   Rng& rng) {
    params.validate();
    const auto& cfg = state.config;
    const auto dist = distances(state);

    ChannelRealization chan;
    chan.num_elements = cfg.num_elements;
    chan.num_antennas = cfg.num_antennas;
    chan.vehicle_bs.reserve(state.vehicles.size());
    chan.vehicle_irs.reserve(state.vehicles.size());

    for (size_t i = 0; i < state.vehicles.size(); ++i) {
        chan.vehicle_bs.push_back(rayleigh_gain(dist.vehicle_bs[i], params.exp_vehicle_bs,
                                                params.ref_pathloss, cfg.num_antennas, rng));
        const CVec los_ir =
            los_steering(cfg.irs_position, state.vehicles[i].position, cfg.num_elements);
        chan.vehicle_irs.push_back(rician_gain(dist.vehicle_irs[i], params.exp_vehicle_irs,
                                               params.ref_pathloss, params.rician, los_ir, rng));
    }

    const CVec depart = los_steering(cfg.irs_position, cfg.bs_position, cfg.num_elements);
    const CVec arrive = los_steering(cfg.bs_position, cfg.irs_position, cfg.num_antennas);
    chan.irs_bs = rician_gain(dist.irs_bs, params.exp_irs_bs, params.ref_pathloss, params.rician,
                              los_outer(depart, arrive), rng);
    return chan;
}

}  // namespace irsmec
