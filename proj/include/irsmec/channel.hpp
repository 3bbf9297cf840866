#ifndef IRSMEC_CHANNEL_HPP
#define IRSMEC_CHANNEL_HPP

#include <complex>
#include <vector>

#include "irsmec/common.hpp"
#include "irsmec/rng.hpp"
#include "irsmec/scenario.hpp"

namespace irsmec {

using Complex = std::complex<double>;
using CVec = std::vector<Complex>;

/// Fading and link-budget parameters, all in linear units.
struct ChannelParams {
    double ref_pathloss = 0.01;      // -20 dB at d0 = 1 m
    double exp_vehicle_bs = 3.0;
    double exp_vehicle_irs = 2.5;
    double exp_irs_bs = 2.2;
    double rician = 1.9952623149688795;  // 3 dB
    double bandwidth_hz = 10e6;
    double noise_w = 3.9810717055349695e-15;  // -114 dBm
    bool interference = true;  // cross-vehicle term in the SINR denominator

    void validate() const;
};

/// sqrt(rho * d^-alpha) applied to a given scattering vector. Test hook for
/// the random generators below.
CVec apply_pathloss(double d, double alpha, double rho, const CVec& scatter);

/// Rayleigh-faded vector of n i.i.d. unit-variance complex Gaussian entries,
/// scaled by the distance path loss. Requires d >= 1 (reference distance).
CVec rayleigh_gain(double d, double alpha, double rho, int n, Rng& rng);

/// Rician mix of a unit-modulus LoS array response and an i.i.d. NLoS part,
/// scaled by the distance path loss. `los` fixes the output size, so the same
/// routine serves the 1xK vehicle-IRS vector and the KxS IRS-BS matrix.
CVec rician_gain(double d, double alpha, double rho, double rician_factor,
                 const CVec& los, Rng& rng);

/// Uniform-linear-array response with half-wavelength spacing along the x
/// axis: entry k = exp(i * pi * k * cos(phi)) with phi taken from geometry.
CVec los_steering(const Vec3& array_pos, const Vec3& other_pos, int n);

/// Rank-1 LoS matrix a*b^T, row-major (|a| rows, |b| columns).
CVec los_outer(const CVec& a, const CVec& b);

/// Diagonal of the IRS reflection matrix diag(e^{i theta_k}), unit modulus.
/// Phases must already be normalized into [0, 2*pi).
CVec reflection_matrix(const std::vector<double>& theta);

/// h_ib + h_ir * diag(theta) * h_rb. h_rb is row-major K x S.
CVec effective_channel(const CVec& h_ib, const CVec& h_ir, const CVec& reflection_diag,
                       const CVec& h_rb, int num_elements, int num_antennas);

/// SINR for vehicle i from precomputed effective channel gains ||h_eff,j||^2.
/// With interference disabled the denominator is the noise power alone.
double sinr_from_gains(int i, const std::vector<double>& tx_power_w,
                       const std::vector<double>& effective_gain, double noise_w,
                       bool interference);

/// Phases that co-phase the reflected path of one vehicle with its direct
/// path at the strongest BS antenna: theta_k = arg h_ib[s*] - arg(h_ir[k]
/// h_rb[k, s*]). Output lies in [0, 2*pi).
std::vector<double> align_phases(const CVec& h_ib, const CVec& h_ir, const CVec& h_rb,
                                 int num_elements, int num_antennas);

/// FDMA Shannon rate (bandwidth / V) * log2(1 + sinr) in bits/s.
double rate_bps(double bandwidth_hz, int num_vehicles, double sinr);

/// All random channel realizations for one slot; the reflection is applied
/// separately so one realization can be evaluated under many phase vectors.
struct ChannelRealization {
    int num_elements = 0;
    int num_antennas = 0;
    std::vector<CVec> vehicle_bs;   // V entries of length S
    std::vector<CVec> vehicle_irs;  // V entries of length K
    CVec irs_bs;                    // K x S row-major

    /// ||h_eff,i(theta)||^2 for every vehicle under one phase vector.
    std::vector<double> effective_gains(const std::vector<double>& theta) const;
};

ChannelRealization realize_channel(const ScenarioState& state, const ChannelParams& params,
                                   Rng& rng);

}  // namespace irsmec

#endif
