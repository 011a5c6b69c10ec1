#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "tandem/controller.hpp"

using namespace tandem;

TEST_CASE("guidance reference follows the onset latch") {
    GearTrain half{1.0, 0.5};
    CHECK(guidance_reference({0.0, 12.0}, 12.0, half) == 0.0);
    CHECK(guidance_reference({100.0, 20.0}, 50.0, half) == 160.0);
    CHECK(guidance_reference({-40.0, 0.0}, -10.0, GearTrain{1.0, 0.1}) ==
          doctest::Approx(-140.0).epsilon(1e-12));
}

TEST_CASE("guidance reference is affine in the current wheel angle") {
    GearTrain gear{1.0, 0.1};
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> angle(-360.0, 360.0);
    for (int i = 0; i < 2000; ++i) {
        const OnsetLatch latch{angle(rng), angle(rng)};
        // evaluating at the onset angle returns q* exactly
        CHECK(guidance_reference(latch, latch.wheel_angle_deg, gear) == latch.motor_pos_deg);
        const double t0 = angle(rng);
        const double slope = (guidance_reference(latch, t0 + 1.0, gear) -
                              guidance_reference(latch, t0, gear));
        CHECK(slope == doctest::Approx(1.0 / gear.ratio()).epsilon(1e-12));
    }
}

TEST_CASE("compliance reference is the identity") {
    CHECK(compliance_reference(0.0) == 0.0);
    CHECK(compliance_reference(123.4) == 123.4);
    CHECK(compliance_reference(-7.25) == -7.25);
}

TEST_CASE("select_gains follows sigma") {
    GainSchedule sched;
    sched.compliance = {1.0, 2.0, 3.0};
    sched.guidance = {4.0, 5.0, 6.0};
    CHECK(select_gains(false, sched).kp == 1.0);
    CHECK(select_gains(true, sched).kp == 4.0);

    GainSchedule same;
    same.compliance = same.guidance = {9.0, 9.0, 9.0};
    CHECK(select_gains(false, same).kp == select_gains(true, same).kp);
}

TEST_CASE("pid_step basics") {
    PidConfig cfg;
    cfg.torque_limit_nmm = 0.0;  // no clamp

    SUBCASE("zero error, zero history, zero torque") {
        PidState st;
        CHECK(pid_step(st, 0.0, 0.002, {2.0, 1.0, 1.0}, cfg) == 0.0);
    }

    SUBCASE("pure proportional") {
        PidState st;
        CHECK(pid_step(st, 1.0, 0.002, {2.0, 0.0, 0.0}, cfg) == 2.0);
    }

    SUBCASE("derivative of a unit ramp is 1 after the first step") {
        PidConfig nofilter = cfg;
        nofilter.derivative_filter_hz = 0.0;
        PidState st;
        const double dt = 0.002;
        pid_step(st, 0.0, dt, {0.0, 1.0, 0.0}, nofilter);  // t = 0, seeds prev_error
        const double torque = pid_step(st, dt, dt, {0.0, 1.0, 0.0}, nofilter);  // e(t) = t
        CHECK(torque == doctest::Approx(1.0).epsilon(1e-12));
    }

    SUBCASE("non-finite inputs are rejected") {
        PidState st;
        CHECK_THROWS_AS(pid_step(st, std::nan(""), 0.002, {1.0, 0.0, 0.0}, cfg), NonFiniteInput);
        CHECK_THROWS_AS(pid_step(st, 1.0, 0.0, {1.0, 0.0, 0.0}, cfg), NonFiniteInput);
    }
}

TEST_CASE("integral clamp holds under adversarial input") {
    PidConfig cfg;
    cfg.integral_limit = 5.0;
    PidState st;
    std::mt19937_64 rng(13);
    std::uniform_real_distribution<double> err(-1e4, 1e4);
    for (int i = 0; i < 5000; ++i) {
        pid_step(st, i % 7 == 0 ? err(rng) : 1e4, 0.002, {1.0, 0.1, 2.0}, cfg);
        CHECK(std::abs(st.integral) <= cfg.integral_limit);
    }
}

TEST_CASE("doubling gains doubles every torque with the clamp off") {
    PidConfig cfg;
    cfg.torque_limit_nmm = 0.0;
    cfg.integral_limit = 1e18;
    const PidGains g{1.3, 0.07, 0.4};
    const PidGains g2{2.6, 0.14, 0.8};
    PidState a;
    PidState b;
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> err(-50.0, 50.0);
    for (int i = 0; i < 2000; ++i) {
        const double e = err(rng);
        const double t1 = pid_step(a, e, 0.002, g, cfg);
        const double t2 = pid_step(b, e, 0.002, g2, cfg);
        if (t1 == 0.0) {
            CHECK(t2 == 0.0);
        } else {
            CHECK(std::abs(t2 - 2.0 * t1) <= 1e-12 * std::abs(t2));
        }
    }
}

TEST_CASE("mode transition clears controller memory") {
    PidConfig cfg;
    PidState st;
    for (int i = 0; i < 100; ++i) {
        pid_step(st, 3.0, 0.002, {1.0, 0.5, 2.0}, cfg);
    }
    REQUIRE(st.integral > 0.0);
    on_mode_transition(st);
    CHECK(st.integral == 0.0);
    CHECK(st.deriv_filtered == 0.0);
    CHECK_FALSE(st.has_prev_error);

    // idempotent
    on_mode_transition(st);
    CHECK(st.integral == 0.0);

    // first step after the reset carries no integral contribution
    const double torque = pid_step(st, 2.0, 0.002, {0.0, 0.0, 10.0}, cfg);
    CHECK(torque == doctest::Approx(10.0 * 2.0 * 0.002).epsilon(1e-12));
}

TEST_CASE("torque output is linear in the error sequence") {
    PidConfig cfg;
    cfg.torque_limit_nmm = 0.0;
    cfg.integral_limit = 1e18;
    const PidGains g{2.0, 0.3, 1.1};
    std::mt19937_64 rng(29);
    std::uniform_real_distribution<double> err(-10.0, 10.0);
    std::vector<double> e1(500);
    std::vector<double> e2(500);
    for (auto& v : e1) v = err(rng);
    for (auto& v : e2) v = err(rng);

    PidState sa;
    PidState sb;
    PidState sab;
    for (std::size_t i = 0; i < e1.size(); ++i) {
        const double ta = pid_step(sa, e1[i], 0.002, g, cfg);
        const double tb = pid_step(sb, e2[i], 0.002, g, cfg);
        const double tab = pid_step(sab, e1[i] + e2[i], 0.002, g, cfg);
        CHECK(tab == doctest::Approx(ta + tb).epsilon(1e-9));
    }
}
