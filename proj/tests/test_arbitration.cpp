#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "tandem/arbitration.hpp"

using namespace tandem;

namespace {

// state primed so the next call sees deltas relative to `prev`
ArbitrationState primed_state(const PerWheel<AngleDeg>& prev) {
    ArbitrationState st;
    st.prev_wheel_angles = prev;
    st.has_prev = true;
    st.last_cycle = 0;
    return st;
}

WheelReading reading(double w1, double w2, bool enable = true) {
    WheelReading r;
    r.angles_deg = {w1, w2};
    r.enable_switch = enable;
    return r;
}

}  // namespace

TEST_CASE("motion onset is a strict threshold") {
    ArbitrationConfig cfg;
    CHECK(detect_motion_onset(10.00, 10.03, cfg));
    CHECK_FALSE(detect_motion_onset(5.0, 5.0, cfg));
    CHECK_FALSE(detect_motion_onset(0.00, 0.02, cfg));  // boundary: not "more than"
}

TEST_CASE("sigma rises on onset, latches both wheels") {
    ArbitrationConfig cfg;
    auto st = primed_state({10.0, -4.0});
    const auto out = arbitrate(st, 1, 2000, reading(10.05, -4.0), {123.0, -55.0}, cfg);
    CHECK(out.sigma);
    CHECK(out.transitioned);
    REQUIRE(out.events.size() == 1);
    CHECK(out.events[0].kind == EventKind::GuidanceStart);
    CHECK(out.events[0].wheel == WheelId::Wheel1);
    REQUIRE(st.latches[0].has_value());
    REQUIRE(st.latches[1].has_value());
    CHECK(st.latches[0]->motor_pos_deg == 123.0);
    CHECK(st.latches[0]->wheel_angle_deg == 10.05);
    CHECK(st.latches[1]->motor_pos_deg == -55.0);
    CHECK(st.latches[1]->wheel_angle_deg == -4.0);
}

TEST_CASE("disabled switch gates guidance") {
    ArbitrationConfig cfg;
    auto st = primed_state({0.0, 0.0});
    const auto out = arbitrate(st, 1, 2000, reading(1.0, 0.0, false), {0.0, 0.0}, cfg);
    CHECK_FALSE(out.sigma);
    CHECK(out.events.empty());
}

TEST_CASE("dwell exhaustion ends guidance on the 125th quiet cycle") {
    ArbitrationConfig cfg;
    auto st = primed_state({0.0, 0.0});
    auto out = arbitrate(st, 1, 2000, reading(0.5, 0.0), {0.0, 0.0}, cfg);
    REQUIRE(out.sigma);

    std::int64_t cycle = 2;
    for (int quiet = 1; quiet < cfg.exit_dwell_cycles; ++quiet, ++cycle) {
        out = arbitrate(st, cycle, 2000 * static_cast<std::uint64_t>(cycle),
                        reading(0.5, 0.0), {0.0, 0.0}, cfg);
        CHECK(out.sigma);
        CHECK(out.events.empty());
    }
    out = arbitrate(st, cycle, 2000 * static_cast<std::uint64_t>(cycle), reading(0.5, 0.0),
                    {0.0, 0.0}, cfg);
    CHECK_FALSE(out.sigma);
    REQUIRE(out.events.size() == 1);
    CHECK(out.events[0].kind == EventKind::GuidanceEnd);
    CHECK_FALSE(st.latches[0].has_value());
}

TEST_CASE("enable drop ends guidance immediately") {
    ArbitrationConfig cfg;
    auto st = primed_state({0.0, 0.0});
    REQUIRE(arbitrate(st, 1, 2000, reading(0.5, 0.0), {0.0, 0.0}, cfg).sigma);
    const auto out = arbitrate(st, 2, 4000, reading(1.0, 0.0, false), {0.0, 0.0}, cfg);
    CHECK_FALSE(out.sigma);
    REQUIRE(out.events.size() == 1);
    CHECK(out.events[0].kind == EventKind::GuidanceEnd);
}

TEST_CASE("latches are immutable while guiding") {
    ArbitrationConfig cfg;
    auto st = primed_state({0.0, 0.0});
    arbitrate(st, 1, 2000, reading(0.5, 0.0), {10.0, 20.0}, cfg);
    const OnsetLatch latch0 = *st.latches[0];
    arbitrate(st, 2, 4000, reading(1.5, 0.0), {99.0, 77.0}, cfg);
    arbitrate(st, 3, 6000, reading(2.5, 0.0), {98.0, 76.0}, cfg);
    CHECK(st.latches[0]->motor_pos_deg == latch0.motor_pos_deg);
    CHECK(st.latches[0]->wheel_angle_deg == latch0.wheel_angle_deg);
}

TEST_CASE("out-of-order cycles are rejected") {
    ArbitrationConfig cfg;
    auto st = primed_state({0.0, 0.0});
    arbitrate(st, 1, 2000, reading(0.0, 0.0), {0.0, 0.0}, cfg);
    CHECK_THROWS_AS(arbitrate(st, 1, 2000, reading(0.0, 0.0), {0.0, 0.0}, cfg), OutOfOrderTick);
    CHECK_THROWS_AS(arbitrate(st, 0, 0, reading(0.0, 0.0), {0.0, 0.0}, cfg), OutOfOrderTick);
}

TEST_CASE("with the switch off sigma stays 0 over any input") {
    ArbitrationConfig cfg;
    ArbitrationState st;
    std::mt19937_64 rng(19);
    std::uniform_real_distribution<double> step(-2.0, 2.0);
    PerWheel<AngleDeg> angles{{0.0, 0.0}};
    for (std::int64_t i = 0; i < 2000; ++i) {
        angles[0] += step(rng);
        angles[1] += step(rng);
        const auto out = arbitrate(st, i, static_cast<std::uint64_t>(i) * 2000,
                                   reading(angles[0], angles[1], false), {0.0, 0.0}, cfg);
        CHECK_FALSE(out.sigma);
        CHECK(out.events.empty());
    }
}

TEST_CASE("event stream alternates start/end under random input") {
    ArbitrationConfig cfg;
    cfg.exit_dwell_cycles = 5;
    ArbitrationState st;
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    PerWheel<AngleDeg> angles{{0.0, 0.0}};
    std::vector<EventKind> kinds;
    for (std::int64_t i = 0; i < 20000; ++i) {
        if (unit(rng) < 0.3) {
            angles[0] += (unit(rng) - 0.5) * 0.5;
        }
        if (unit(rng) < 0.1) {
            angles[1] += (unit(rng) - 0.5) * 0.5;
        }
        const bool enable = unit(rng) < 0.95;
        const auto out = arbitrate(st, i, static_cast<std::uint64_t>(i) * 2000,
                                   reading(angles[0], angles[1], enable),
                                   {angles[0] * 10.0, angles[1] * 10.0}, cfg);
        for (const auto& ev : out.events) {
            kinds.push_back(ev.kind);
        }
        if (out.sigma) {
            CHECK(st.latches[0].has_value());
            CHECK(st.latches[1].has_value());
        }
    }
    bool open = false;
    for (const auto k : kinds) {
        if (k == EventKind::GuidanceStart) {
            CHECK_FALSE(open);
            open = true;
        } else if (k == EventKind::GuidanceEnd) {
            CHECK(open);
            open = false;
        }
    }
}

TEST_CASE("stall clock accumulates and warns at the window") {
    ArbitrationConfig cfg;
    const double dt = cfg.dt_s();

    SUBCASE("crossing three seconds fires the warning") {
        const auto up = guidance_trigger_check(2.998, 0.0, dt, cfg);
        CHECK(up.stall_clock_s == doctest::Approx(3.0).epsilon(1e-12));
        CHECK(up.warning);
    }

    SUBCASE("progress resets the clock") {
        const auto up = guidance_trigger_check(2.5, 0.01, dt, cfg);
        CHECK(up.stall_clock_s == 0.0);
        CHECK_FALSE(up.warning);
    }

    SUBCASE("500 stalled cycles add one second, no warning yet") {
        double clock = 1.0;
        bool warned = false;
        for (int i = 0; i < 500; ++i) {
            const auto up = guidance_trigger_check(clock, 0.0, dt, cfg);
            clock = up.stall_clock_s;
            warned = warned || up.warning;
        }
        CHECK(clock == doctest::Approx(2.0).epsilon(1e-9));
        CHECK_FALSE(warned);
    }

    SUBCASE("a contiguous stall warns exactly once, at the window") {
        double clock = 0.0;
        int warnings = 0;
        int warn_cycle = -1;
        for (int i = 0; i < 3000; ++i) {
            const auto up = guidance_trigger_check(clock, 0.0, dt, cfg);
            clock = up.stall_clock_s;
            if (up.warning) {
                ++warnings;
                warn_cycle = i;
            }
        }
        CHECK(warnings == 1);
        // 1500 increments of 2 ms reach the 3 s window (zero-based cycle 1499)
        CHECK(std::abs(warn_cycle - 1499) <= 1);
    }
}
