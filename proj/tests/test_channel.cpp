#include <doctest.h>

#include <cmath>
#include <complex>

#include "irsmec/channel.hpp"

using namespace irsmec;

TEST_CASE("apply_pathloss scales a forced scattering vector") {
    const CVec ones(4, Complex(1.0, 0.0));
    const auto h = apply_pathloss(1.0, 3.0, 0.01, ones);
    for (const auto& c : h) CHECK(std::abs(c - Complex(0.1, 0.0)) < 1e-12);
    CHECK_THROWS_AS(apply_pathloss(0.5, 3.0, 0.01, ones), std::domain_error);
}

TEST_CASE("rayleigh_gain mean power matches the path loss law") {
    Rng rng(2024u);
    SUBCASE("reference distance") {
        double power = 0.0;
        const int draws = 20000;
        const int n = 8;
        for (int d = 0; d < draws; ++d) {
            const auto h = rayleigh_gain(1.0, 3.0, 0.01, n, rng);
            for (const auto& c : h) power += std::norm(c);
        }
        power /= draws * n;
        CHECK(power == doctest::Approx(0.01).epsilon(0.02));
    }
    SUBCASE("power law at 10 m") {
        double power = 0.0;
        const int draws = 20000;
        const int n = 8;
        for (int d = 0; d < draws; ++d) {
            const auto h = rayleigh_gain(10.0, 3.0, 0.01, n, rng);
            for (const auto& c : h) power += std::norm(c);
        }
        power /= draws * n;
        CHECK(power == doctest::Approx(1e-5).epsilon(0.02));
    }
}

TEST_CASE("rician_gain limits and moments") {
    Rng rng(7u);
    const CVec los{{1.0, 0.0}, {0.0, 1.0}, {-1.0, 0.0}};

    SUBCASE("pure LoS limit") {
        const auto h = rician_gain(2.0, 2.5, 0.01, 1e12, los, rng);
        const double scale = std::sqrt(0.01 * std::pow(2.0, -2.5));
        for (size_t i = 0; i < h.size(); ++i)
            CHECK(std::abs(h[i] - scale * los[i]) <= 1e-5 * std::abs(scale * los[i]));
    }
    SUBCASE("zero factor is pure scattering") {
        // gamma = 0: no LoS part, so the ensemble mean vanishes while the
        // mean power keeps the path loss value.
        const double scale2 = 0.01 * std::pow(2.0, -2.5);
        Complex mean(0.0, 0.0);
        double power = 0.0;
        const int draws = 40000;
        for (int d = 0; d < draws; ++d) {
            const auto h = rician_gain(2.0, 2.5, 0.01, 0.0, los, rng);
            mean += h[0];
            power += std::norm(h[0]);
        }
        mean /= double(draws);
        power /= draws;
        CHECK(std::abs(mean) < 0.05 * std::sqrt(scale2));
        CHECK(power == doctest::Approx(scale2).epsilon(0.03));
    }
    SUBCASE("3 dB factor splits LoS and NLoS power") {
        const double gamma = db_to_linear(3.0);
        const double scale2 = 0.01 * std::pow(2.0, -2.5);
        Complex mean(0.0, 0.0);
        double power = 0.0;
        const int draws = 60000;
        for (int d = 0; d < draws; ++d) {
            const auto h = rician_gain(2.0, 2.5, 0.01, gamma, los, rng);
            mean += h[0];
            power += std::norm(h[0]);
        }
        mean /= double(draws);
        power /= draws;
        CHECK(power == doctest::Approx(scale2).epsilon(0.02));
        CHECK(std::norm(mean) == doctest::Approx(scale2 * gamma / (1.0 + gamma)).epsilon(0.03));
    }
    SUBCASE("negative factor rejected") {
        CHECK_THROWS_AS(rician_gain(2.0, 2.5, 0.01, -0.1, los, rng), std::domain_error);
    }
}

TEST_CASE("los_steering follows the array geometry") {
    SUBCASE("broadside gives all ones") {
        const auto a = los_steering({0, 0, 0}, {0.0, 25.0, 0.0}, 5);
        for (const auto& c : a) CHECK(std::abs(c - Complex(1.0, 0.0)) < 1e-12);
    }
    SUBCASE("endfire alternates sign") {
        const auto a = los_steering({0, 0, 0}, {10.0, 0.0, 0.0}, 3);
        CHECK(std::abs(a[1] - Complex(-1.0, 0.0)) < 1e-12);
    }
    SUBCASE("unit modulus everywhere") {
        const auto a = los_steering({1.0, -2.0, 3.0}, {7.5, 4.0, -1.0}, 16);
        for (const auto& c : a) CHECK(std::abs(c) == doctest::Approx(1.0));
    }
    SUBCASE("coincident positions rejected") {
        CHECK_THROWS_AS(los_steering({1, 1, 1}, {1, 1, 1}, 4), std::domain_error);
    }
}

TEST_CASE("reflection_matrix is diag(e^{i theta}) with unit modulus") {
    SUBCASE("zero phases give the identity") {
        const auto d = reflection_matrix({0.0, 0.0, 0.0});
        for (const auto& c : d) CHECK(std::abs(c - Complex(1.0, 0.0)) < 1e-12);
    }
    SUBCASE("pi gives minus one") {
        const auto d = reflection_matrix({3.141592653589793});
        CHECK(std::abs(d[0] - Complex(-1.0, 0.0)) < 1e-12);
    }
    SUBCASE("pi over two gives i") {
        const auto d = reflection_matrix({3.141592653589793 / 2.0});
        CHECK(std::abs(d[0] - Complex(0.0, 1.0)) < 1e-12);
    }
    SUBCASE("unit modulus for random phases") {
        Rng rng(5u);
        std::vector<double> theta(16);
        for (auto& t : theta) t = rng.uniform(0.0, kTwoPi);
        for (const auto& c : reflection_matrix(theta)) CHECK(std::abs(c) == doctest::Approx(1.0));
    }
    SUBCASE("out-of-range phase rejected") {
        CHECK_THROWS_AS(reflection_matrix({kTwoPi}), std::domain_error);
        CHECK_THROWS_AS(reflection_matrix({-0.1}), std::domain_error);
    }
}

TEST_CASE("effective_channel composes direct and reflected paths") {
    SUBCASE("no IRS path returns the direct channel") {
        const CVec h_ib{{0.3, -0.2}, {1.0, 0.5}};
        const CVec h_ir(4, Complex(0.0, 0.0));
        const CVec diag = reflection_matrix(std::vector<double>(4, 1.0));
        const CVec h_rb(8, Complex(0.7, 0.1));
        const auto h = effective_channel(h_ib, h_ir, diag, h_rb, 4, 2);
        for (size_t s = 0; s < h.size(); ++s) CHECK(std::abs(h[s] - h_ib[s]) < 1e-15);
    }
    SUBCASE("scalar product") {
        const auto h = effective_channel({Complex(0.0, 0.0)}, {Complex(2.0, 0.0)},
                                         reflection_matrix({0.0}), {Complex(3.0, 0.0)}, 1, 1);
        CHECK(std::abs(h[0] - Complex(6.0, 0.0)) < 1e-15);
    }
    SUBCASE("matches an entry-by-entry expansion") {
        Rng rng(31u);
        const int k_count = 4, s_count = 2;
        CVec h_ib(s_count), h_ir(k_count), h_rb(k_count * s_count);
        std::vector<double> theta(k_count);
        for (auto& c : h_ib) c = rng.cgaussian();
        for (auto& c : h_ir) c = rng.cgaussian();
        for (auto& c : h_rb) c = rng.cgaussian();
        for (auto& t : theta) t = rng.uniform(0.0, kTwoPi);
        const auto diag = reflection_matrix(theta);
        const auto h = effective_channel(h_ib, h_ir, diag, h_rb, k_count, s_count);
        for (int s = 0; s < s_count; ++s) {
            Complex expect = h_ib[s];
            for (int k = 0; k < k_count; ++k)
                expect += h_ir[k] * std::exp(Complex(0.0, theta[k])) * h_rb[k * s_count + s];
            CHECK(std::abs(h[s] - expect) < 1e-12);
        }
    }
    SUBCASE("dimension mismatch rejected") {
        CHECK_THROWS_AS(effective_channel({Complex(1.0)}, {Complex(1.0)}, {Complex(1.0)},
                                          {Complex(1.0)}, 2, 1),
                        std::invalid_argument);
    }
}

TEST_CASE("sinr matches the interference model") {
    const double noise = 3.9810717055349695e-15;
    SUBCASE("single vehicle has no interference") {
        CHECK(sinr_from_gains(0, {2.0}, {1e-10}, noise, true) ==
              doctest::Approx(2.0 * 1e-10 / noise));
    }
    SUBCASE("zero power gives zero") {
        CHECK(sinr_from_gains(0, {0.0, 1.0}, {1e-10, 1e-10}, noise, true) == 0.0);
    }
    SUBCASE("two symmetric vehicles") {
        const double s = sinr_from_gains(0, {1.0, 1.0}, {1e-10, 1e-10}, noise, true);
        CHECK(s == doctest::Approx(1e-10 / (1e-10 + noise)));
        CHECK(s == doctest::Approx(0.99996).epsilon(1e-4));
    }
    SUBCASE("interference off ignores the other users") {
        const double s = sinr_from_gains(0, {1.0, 1.0}, {1e-10, 5e-9}, noise, false);
        CHECK(s == doctest::Approx(1e-10 / noise));
    }
    SUBCASE("monotone in own power, antitone in others") {
        double prev = -1.0;
        for (double p = 0.0; p <= 2.0; p += 0.25) {
            const double s = sinr_from_gains(0, {p, 1.0}, {1e-10, 1e-10}, noise, true);
            CHECK(s >= prev);
            prev = s;
        }
        prev = 1e300;
        for (double pj = 0.0; pj <= 2.0; pj += 0.25) {
            const double s = sinr_from_gains(0, {1.0, pj}, {1e-10, 1e-10}, noise, true);
            CHECK(s <= prev);
            prev = s;
        }
    }
}

TEST_CASE("rate follows the FDMA Shannon formula") {
    CHECK(rate_bps(10e6, 6, 1.0) == doctest::Approx(10e6 / 6.0));
    CHECK(rate_bps(10e6, 6, 0.0) == 0.0);
    CHECK(rate_bps(10e6, 6, 3.0) == doctest::Approx(2.0 * 10e6 / 6.0));

    SUBCASE("strictly increasing and concave in the SINR") {
        double prev_rate = -1.0;
        double prev_diff = 1e300;
        const double h = 0.5;
        for (double d = 0.5; d < 20.0; d += h) {
            const double r = rate_bps(10e6, 6, d);
            CHECK(r > prev_rate);
            const double diff = r - (prev_rate < 0 ? 0.0 : prev_rate);
            if (prev_rate >= 0.0) {
                CHECK(diff < prev_diff);
                prev_diff = diff;
            }
            prev_rate = r;
        }
    }
}

TEST_CASE("without an IRS path the SINR is independent of the phases") {
    ScenarioConfig cfg;
    cfg.num_vehicles = 2;
    cfg.num_elements = 6;
    cfg.num_antennas = 2;
    ChannelParams params;
    Rng rng(12u);
    const auto state = init_scenario(cfg, 12u);
    auto chan = realize_channel(state, params, rng);
    for (auto& v : chan.vehicle_irs)
        for (auto& c : v) c = Complex(0.0, 0.0);

    std::vector<double> zero(cfg.num_elements, 0.0);
    std::vector<double> random_theta(cfg.num_elements);
    for (auto& t : random_theta) t = rng.uniform(0.0, kTwoPi);
    const auto g0 = chan.effective_gains(zero);
    const auto g1 = chan.effective_gains(random_theta);
    for (size_t i = 0; i < g0.size(); ++i) CHECK(g0[i] == doctest::Approx(g1[i]));
}
