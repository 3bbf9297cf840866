#include <doctest.h>

#include <cmath>

#include "irsmec/scenario.hpp"

using namespace irsmec;

TEST_CASE("init_scenario places vehicles inside the area") {
    ScenarioConfig cfg;
    cfg.num_vehicles = 6;
    const auto state = init_scenario(cfg, 42u);
    REQUIRE(state.vehicles.size() == 6);
    for (const auto& v : state.vehicles) {
        CHECK(v.position.x >= 0.0);
        CHECK(v.position.x <= 100.0);
        CHECK(v.position.y >= 0.0);
        CHECK(v.position.y <= 100.0);
        CHECK(v.position.z == 0.0);
        CHECK(std::hypot(v.vx, v.vy) >= 0.0);
    }
}

TEST_CASE("init_scenario degenerate zero area puts the vehicle at the origin") {
    ScenarioConfig cfg;
    cfg.num_vehicles = 1;
    cfg.area_width_m = 0.0;
    cfg.area_height_m = 0.0;
    const auto state = init_scenario(cfg, 7u);
    CHECK(state.vehicles[0].position.x == 0.0);
    CHECK(state.vehicles[0].position.y == 0.0);
}

TEST_CASE("init_scenario is deterministic per seed") {
    ScenarioConfig cfg;
    const auto a = init_scenario(cfg, 123u);
    const auto b = init_scenario(cfg, 123u);
    REQUIRE(a.vehicles.size() == b.vehicles.size());
    for (size_t i = 0; i < a.vehicles.size(); ++i) {
        CHECK(a.vehicles[i].position.x == b.vehicles[i].position.x);
        CHECK(a.vehicles[i].position.y == b.vehicles[i].position.y);
        CHECK(a.vehicles[i].vx == b.vehicles[i].vx);
        CHECK(a.vehicles[i].vy == b.vehicles[i].vy);
        CHECK(a.vehicles[i].ax == b.vehicles[i].ax);
        CHECK(a.vehicles[i].ay == b.vehicles[i].ay);
    }
}

TEST_CASE("init_scenario rejects invalid configs naming the field") {
    ScenarioConfig cfg;
    cfg.task_prob = 1.5;
    CHECK_THROWS_WITH_AS(init_scenario(cfg, 1u),
                         "invalid scenario config: task_prob must be in [0,1]", ConfigError);
}

TEST_CASE("step_mobility kinematics") {
    ScenarioConfig cfg;
    cfg.num_vehicles = 1;
    cfg.slot_duration_s = 1.0;
    auto state = init_scenario(cfg, 1u);

    SUBCASE("constant velocity") {
        state.vehicles[0] = {{0.0, 0.0, 0.0}, 1.0, 0.0, 0.0, 0.0};
        const auto next = step_mobility(state);
        CHECK(next.vehicles[0].position.x == doctest::Approx(1.0));
        CHECK(next.vehicles[0].position.y == doctest::Approx(0.0));
        CHECK(next.slot == state.slot + 1);
    }
    SUBCASE("half a t squared") {
        state.vehicles[0] = {{0.0, 0.0, 0.0}, 0.0, 0.0, 2.0, 0.0};
        const auto next = step_mobility(state);
        CHECK(next.vehicles[0].position.x == doctest::Approx(1.0));
        CHECK(next.vehicles[0].vx == doctest::Approx(2.0));
    }
    SUBCASE("boundary reflection mirrors position and negates velocity") {
        state.vehicles[0] = {{99.5, 0.0, 0.0}, 1.0, 0.0, 0.0, 0.0};
        const auto next = step_mobility(state);
        CHECK(next.vehicles[0].position.x == doctest::Approx(99.5));
        CHECK(next.vehicles[0].vx == doctest::Approx(-1.0));
    }
}

TEST_CASE("reflection keeps every coordinate inside the area") {
    ScenarioConfig cfg;
    cfg.num_vehicles = 10;
    cfg.speed_mps = {0.0, 40.0};
    cfg.accel_mps2 = {-5.0, 5.0};
    auto state = init_scenario(cfg, 99u);
    for (int step = 0; step < 100000; ++step) {
        state = step_mobility(state);
        for (const auto& v : state.vehicles) {
            REQUIRE(v.position.x >= 0.0);
            REQUIRE(v.position.x <= cfg.area_width_m);
            REQUIRE(v.position.y >= 0.0);
            REQUIRE(v.position.y <= cfg.area_height_m);
        }
    }
}

TEST_CASE("generate_tasks respects the arrival probability") {
    ScenarioConfig cfg;
    cfg.num_vehicles = 4;
    auto state = init_scenario(cfg, 5u);
    Rng rng(11u);

    SUBCASE("probability zero") {
        state.config.task_prob = 0.0;
        const auto tasks = generate_tasks(state, rng);
        for (const auto& t : tasks) CHECK_FALSE(t.present);
    }
    SUBCASE("probability one, fields in range") {
        state.config.task_prob = 1.0;
        const auto tasks = generate_tasks(state, rng);
        for (const auto& t : tasks) {
            REQUIRE(t.present);
            CHECK(t.data_bits >= state.config.data_size_bits.lo);
            CHECK(t.data_bits <= state.config.data_size_bits.hi);
            CHECK(t.intensity_cpb >= state.config.intensity_cpb.lo);
            CHECK(t.intensity_cpb <= state.config.intensity_cpb.hi);
            CHECK(t.deadline_s >= state.config.deadline_s.lo);
            CHECK(t.deadline_s <= state.config.deadline_s.hi);
        }
    }
    SUBCASE("empirical rate over many slots") {
        state.config.num_vehicles = 1;
        state.vehicles.resize(1);
        state.config.task_prob = 0.5;
        int hits = 0;
        const int slots = 100000;
        for (int n = 0; n < slots; ++n)
            if (generate_tasks(state, rng)[0].present) ++hits;
        CHECK(std::abs(hits / double(slots) - 0.5) < 0.01);
    }
}

TEST_CASE("distances clamp at the reference distance and follow geometry") {
    ScenarioConfig cfg;
    cfg.num_vehicles = 2;
    auto state = init_scenario(cfg, 17u);

    SUBCASE("vehicle on top of the BS clamps to 1 m") {
        state.vehicles[0].position = state.config.bs_position;
        const auto d = distances(state);
        CHECK(d.vehicle_bs[0] == doctest::Approx(1.0));
    }
    SUBCASE("vehicle under the IRS") {
        state.vehicles[0].position = {0.0, 0.0, 0.0};
        const auto d = distances(state);
        CHECK(d.vehicle_irs[0] == doctest::Approx(50.0));
    }
    SUBCASE("IRS to BS distance") {
        const auto d = distances(state);
        CHECK(d.irs_bs == doctest::Approx(std::sqrt(10500.0)));
    }
    SUBCASE("translation invariance") {
        const auto before = distances(state);
        const double shift = 31.7;
        for (auto& v : state.vehicles) {
            v.position.x += shift;
            v.position.y += shift;
        }
        state.config.bs_position.x += shift;
        state.config.bs_position.y += shift;
        state.config.irs_position.x += shift;
        state.config.irs_position.y += shift;
        const auto after = distances(state);
        for (size_t i = 0; i < before.vehicle_bs.size(); ++i) {
            CHECK(after.vehicle_bs[i] == doctest::Approx(before.vehicle_bs[i]));
            CHECK(after.vehicle_irs[i] == doctest::Approx(before.vehicle_irs[i]));
        }
        CHECK(after.irs_bs == doctest::Approx(before.irs_bs));
    }
    SUBCASE("symmetry under endpoint swap") {
        const Vec3 a{3.0, 4.0, 5.0};
        const Vec3 b{-1.0, 2.0, 9.0};
        CHECK(distance(a, b) == doctest::Approx(distance(b, a)));
    }
}
