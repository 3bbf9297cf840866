#include <doctest.h>

#include <cmath>

#include "irsmec/game.hpp"

using namespace irsmec;

namespace {

// One-slot fixture with hand-built channels so rates are predictable.
struct SlotFixture {
    ModelParams params;
    std::vector<Task> tasks;
    ChannelRealization chan;

    SlotFixture(int v_count, int k_count, int s_count) {
        params.scenario.num_vehicles = v_count;
        params.scenario.num_elements = k_count;
        params.scenario.num_antennas = s_count;
        tasks.resize(v_count);
        chan.num_elements = k_count;
        chan.num_antennas = s_count;
        chan.vehicle_bs.assign(v_count, CVec(s_count, Complex(0.0, 0.0)));
        chan.vehicle_irs.assign(v_count, CVec(k_count, Complex(0.0, 0.0)));
        chan.irs_bs.assign(k_count * s_count, Complex(0.0, 0.0));
    }

    SlotContext ctx() const { return {&params, &tasks, &chan}; }
};

Task make_task(double data_bits, double intensity, double deadline) {
    Task t;
    t.present = true;
    t.data_bits = data_bits;
    t.intensity_cpb = intensity;
    t.deadline_s = deadline;
    return t;
}

}  // namespace

TEST_CASE("task_revenue is the shifted log of the slack") {
    CHECK(task_revenue(1.0, 1.0, 1.0) == doctest::Approx(0.0));
    CHECK(task_revenue(std::exp(1.0) - 1.0, 0.0, 1.0) == doctest::Approx(1.0));
    CHECK(task_revenue(0.5, 0.0, 1.0) == doctest::Approx(std::log(1.5)));
    CHECK_THROWS_AS(task_revenue(1.0, 3.0, 1.0), std::domain_error);
}

TEST_CASE("task costs follow the pricing model") {
    CHECK(task_cost_local(1.0) == doctest::Approx(1.0));
    CHECK(task_cost_offload(0.6, 5e9, 1e-9, 10.0) == doctest::Approx(5.6));
    // fee equal to the budget leaves only the energy term
    CHECK(task_cost_offload(0.6, 10e9, 1e-9, 10.0) == doctest::Approx(0.6));
}

TEST_CASE("vehicle utility weights revenue against the cost branch") {
    CHECK(vehicle_utility_local(1.0, 0.4055, 123.0) == doctest::Approx(0.4055));
    CHECK(vehicle_utility_local(0.0, 0.4055, 1.0) == doctest::Approx(-1.0));
    CHECK(vehicle_utility_local(0.5, std::log(1.5), 1.0) ==
          doctest::Approx(-0.29725).epsilon(1e-3));
    CHECK(vehicle_utility_local(0.5, std::log(1.5), 1.0) ==
          doctest::Approx(0.5 * std::log(1.5) - 0.5));
    // the offload branch charges transmission energy plus unspent budget
    CHECK(vehicle_utility_offload(0.5, 0.0, 0.6, 5e9, 1e-9, 10.0) ==
          doctest::Approx(-0.5 * 5.6));
}

TEST_CASE("bs utility and its allocation slope") {
    CHECK(bs_utility(1.0, 5e9, 1e-9, 1.0, 99.0) == doctest::Approx(4.0));
    CHECK(bs_utility(0.0, 5e9, 1e-9, 1.0, 2.0) == doctest::Approx(-2.0));
    CHECK(bs_utility(0.5, 5e9, 1e-9, 1.0, 2.0) == doctest::Approx(1.0));

    SUBCASE("finite-difference slope matches the analytic derivative") {
        const double w = 0.5, price = 5e-8, floor = 1.0, kappa = 1e-26, cycles = 1.5e9;
        const double f = 2.2e9;
        const double h = 1e3;
        auto u = [&](double fx) {
            return bs_utility(w, fx, price, floor, kappa * fx * fx * cycles);
        };
        const double numeric = (u(f + h) - u(f - h)) / (2.0 * h);
        const double analytic = w * price - 2.0 * (1.0 - w) * kappa * f * cycles;
        CHECK(std::abs(numeric - analytic) <= 1e-6 * std::abs(analytic));
    }
}

TEST_CASE("total utility and reward") {
    CHECK(total_utility(2.0, 4.0, 0.5, 0.5) == doctest::Approx(3.0));
    CHECK(total_utility(0.0, 0.0, 0.5, 0.5) == 0.0);
    CHECK(total_utility(1.0, -1.0, 0.7, 0.3) == doctest::Approx(0.4));

    CHECK(reward(5.0, 3.0) == doctest::Approx(2.0));
    CHECK(reward(3.0, 5.0) == 0.0);
    CHECK(reward(4.0, 4.0) == 0.0);

    SUBCASE("nonnegative and shift invariant") {
        for (double u = -3.0; u <= 3.0; u += 0.37) {
            for (double v = -3.0; v <= 3.0; v += 0.41) {
                CHECK(reward(u, v) >= 0.0);
                CHECK(reward(u + 17.0, v + 17.0) == doctest::Approx(reward(u, v)));
            }
        }
    }
}

TEST_CASE("vehicle utility is strictly decreasing in the delay") {
    double prev = 1e300;
    for (double delay = 0.1; delay < 4.0; delay += 0.3) {
        const double u = vehicle_utility_local(0.5, task_revenue(5.0, delay, 1.0), 1.0);
        CHECK(u < prev);
        prev = u;
    }
}

TEST_CASE("evaluate_slot accounts served and failed tasks") {
    SlotFixture fx(2, 2, 1);
    fx.params.channel.interference = false;
    fx.tasks[0] = make_task(1e6, 1000.0, 5.0);  // local: 1 s, 1 J
    fx.tasks[1] = make_task(1e6, 1000.0, 0.5);  // local infeasible

    SlotDecision dec;
    dec.action = {Action::local, Action::none};
    dec.theta = {0.0, 0.0};
    dec.alloc_hz = {0.0, 0.0};

    const auto eval = evaluate_slot(fx.ctx(), dec);
    CHECK(eval.vehicles[0].delay_s == doctest::Approx(1.0));
    CHECK(eval.vehicles[0].local_energy_j == doctest::Approx(1.0));
    CHECK_FALSE(eval.vehicles[0].failed);
    CHECK(eval.vehicles[1].failed);
    CHECK(eval.vehicles[1].delay_s == doctest::Approx(0.5));  // waits out the deadline
    CHECK(eval.vehicles[1].utility_vehicle == doctest::Approx(0.0));
    CHECK(eval.delay_s == doctest::Approx(1.5));
    CHECK(eval.energy_j == doctest::Approx(1.0));
    const double expect_qoe = 0.5 * std::log(1.0 + 5.0 - 1.0) - 0.5 * 1.0;
    CHECK(eval.u_qoe == doctest::Approx(expect_qoe));
    CHECK(eval.u_revenue == 0.0);
    CHECK(eval.u_total == doctest::Approx(0.5 * expect_qoe));
}

TEST_CASE("check_constraints reports violations with indices") {
    SlotFixture fx(2, 2, 1);
    fx.params.channel.interference = false;
    fx.tasks[0] = make_task(1e6, 1000.0, 5.0);
    fx.tasks[1] = make_task(1e6, 1000.0, 5.0);
    std::vector<SlotContext> ctxs{fx.ctx()};

    SlotDecision dec;
    dec.action = {Action::local, Action::local};
    dec.theta = {0.0, 0.0};
    dec.alloc_hz = {0.0, 0.0};

    SUBCASE("feasible all-local decision") {
        const auto report = check_constraints({{dec}}, ctxs);
        CHECK(report.feasible);
    }
    SUBCASE("allocation sum above the budget trips 14g") {
        dec.action = {Action::offload, Action::offload};
        dec.alloc_hz = {3e9, 3e9};
        const auto report = check_constraints({{dec}}, ctxs);
        CHECK_FALSE(report.feasible);
        CHECK_FALSE(report.find("14g")->ok);
        CHECK(report.find("14g")->violations.size() == 1);
    }
    SUBCASE("phase at exactly two pi trips 14h") {
        dec.theta = {kTwoPi, 0.0};
        const auto report = check_constraints({{dec}}, ctxs);
        CHECK_FALSE(report.find("14h")->ok);
    }
    SUBCASE("allocation outside the range trips 14f") {
        dec.alloc_hz = {-1.0, 0.0};
        const auto report = check_constraints({{dec}}, ctxs);
        CHECK_FALSE(report.find("14f")->ok);
    }
    SUBCASE("action without a task trips 14c") {
        fx.tasks[1].present = false;
        const auto report = check_constraints({{dec}}, ctxs);
        CHECK_FALSE(report.find("14c")->ok);
    }
}

TEST_CASE("follower_response picks feasible utility maxima") {
    SlotFixture fx(1, 1, 1);
    fx.params.channel.interference = false;
    // h_eff(theta) = x + e^{i theta} * r with x = 2.9 r: theta = 0 roughly
    // quadruples the SINR relative to theta = pi.
    const double x = 1.81e-8, r = 6.25e-9;
    fx.chan.vehicle_bs[0][0] = Complex(x, 0.0);
    fx.chan.vehicle_irs[0][0] = Complex(r, 0.0);
    fx.chan.irs_bs[0] = Complex(1.0, 0.0);
    fx.tasks[0] = make_task(1e6, 1000.0, 5.0);

    const double f_max = fx.params.compute.bs_compute_hz;
    const std::vector<double> theta_zero{0.0};
    const std::vector<double> theta_pi{3.141592653589793};

    SUBCASE("zero allocation forces local execution") {
        const auto fr = follower_response(fx.ctx(), {0.0}, {theta_zero, theta_pi});
        CHECK(fr.actions[0] == Action::local);
    }
    SUBCASE("grid of two phases picks the better one") {
        const auto fr = follower_response(fx.ctx(), {f_max}, {theta_zero, theta_pi});
        // Verify against single-candidate evaluations.
        double u[2];
        for (int c = 0; c < 2; ++c) {
            const auto single =
                follower_response(fx.ctx(), {f_max}, {c == 0 ? theta_zero : theta_pi});
            SlotDecision dec{single.actions, c == 0 ? theta_zero : theta_pi, {f_max}};
            u[c] = evaluate_slot(fx.ctx(), dec).u_qoe;
        }
        CHECK(fr.theta_index == (u[0] >= u[1] ? 0 : 1));
        CHECK(fr.actions[0] == Action::offload);
    }
    SUBCASE("infeasible leader allocation is a precondition error") {
        CHECK_THROWS_AS(follower_response(fx.ctx(), {2.0 * f_max}, {theta_zero}),
                        std::invalid_argument);
        CHECK_THROWS_AS(follower_response(fx.ctx(), {-1.0}, {theta_zero}), std::invalid_argument);
    }
}

TEST_CASE("symmetric vehicles get identical follower actions") {
    SlotFixture fx(2, 2, 1);
    fx.params.channel.interference = true;
    for (int i = 0; i < 2; ++i) {
        fx.chan.vehicle_bs[i][0] = Complex(1.5e-8, 0.0);
        fx.chan.vehicle_irs[i] = {Complex(3e-9, 0.0), Complex(3e-9, 0.0)};
        fx.tasks[i] = make_task(1e6, 1000.0, 5.0);
    }
    fx.chan.irs_bs = {Complex(1.0, 0.0), Complex(1.0, 0.0)};
    const double half = fx.params.compute.bs_compute_hz / 2.0;
    const auto fr = follower_response(fx.ctx(), {half, half}, {{0.0, 0.0}});
    CHECK(fr.actions[0] == fr.actions[1]);
}
