#include <doctest.h>

#include <random>
#include <sstream>

#include "tandem/session.hpp"

using namespace tandem;

namespace {

TickRecord make_tick(std::int64_t i, std::uint64_t period_us = 2000) {
    TickRecord t;
    t.tick_index = i;
    t.t_us = static_cast<std::uint64_t>(i) * period_us;
    return t;
}

SessionTrace random_trace(std::uint64_t seed, std::size_t n_ticks) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> val(-1000.0, 1000.0);
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    SessionTrace trace;
    trace.header.scenario = "random";
    trace.header.seed = seed;
    trace.header.colon_length_m = 1.6;
    trace.header.configs = {{"alpha", val(rng)}, {"nested", {{"beta", val(rng)}}}};

    for (std::size_t i = 0; i < n_ticks; ++i) {
        TickRecord t = make_tick(static_cast<std::int64_t>(i));
        t.sigma = unit(rng) < 0.3;
        for (std::size_t w = 0; w < kWheelCount; ++w) {
            t.preceptor_deg[w] = val(rng);
            t.trainee_deg[w] = val(rng);
            t.motor_deg[w] = val(rng);
            t.reference_deg[w] = val(rng);
            t.torque_nmm[w] = val(rng);
        }
        t.depth_m = unit(rng) * 1.6;
        for (auto& p : t.trackers) {
            p = Vec3{val(rng), val(rng), val(rng)};
        }
        trace.record_tick(t);
        if (unit(rng) < 0.02) {
            ArbitrationEvent ev;
            const double k = unit(rng);
            ev.kind = k < 0.33 ? EventKind::GuidanceWarning
                               : (k < 0.66 ? EventKind::GuidanceStart : EventKind::GuidanceEnd);
            ev.t_us = t.t_us;
            if (ev.kind == EventKind::GuidanceStart) {
                ev.wheel = unit(rng) < 0.5 ? WheelId::Wheel1 : WheelId::Wheel2;
            }
            trace.record_event(ev);
            if (unit(rng) < 0.3) {
                ArbitrationEvent tie = ev;  // same timestamp, order must hold
                tie.kind = EventKind::GuidanceEnd;
                tie.wheel.reset();
                trace.record_event(tie);
            }
        }
    }
    trace.outcome.completed = true;
    trace.outcome.completion_time_s = static_cast<double>(n_ticks - 1) * 0.002;
    return trace;
}

}  // namespace

TEST_CASE("record_tick enforces contiguity") {
    SessionTrace trace;
    trace.record_tick(make_tick(0));
    CHECK(trace.ticks.size() == 1);
    trace.record_tick(make_tick(1));

    TickRecord gap = make_tick(3);
    CHECK_THROWS_AS(trace.record_tick(gap), NonContiguousTick);

    TickRecord off_grid = make_tick(2);
    off_grid.t_us = 4001;
    CHECK_THROWS_AS(trace.record_tick(off_grid), NonContiguousTick);
}

TEST_CASE("empty trace round trip") {
    SessionTrace trace;
    trace.header.scenario = "empty";
    std::stringstream ss;
    write_trace(trace, ss);
    const SessionTrace back = read_trace(ss);
    CHECK(back == trace);
}

TEST_CASE("randomized trace round trip preserves everything") {
    const SessionTrace trace = random_trace(1234, 500);
    std::stringstream ss;
    write_trace(trace, ss);
    const SessionTrace back = read_trace(ss);
    CHECK(back == trace);
    // serialization is deterministic
    std::stringstream ss2;
    write_trace(back, ss2);
    CHECK(ss.str() == ss2.str());
}

TEST_CASE("truncated stream reports the corrupt line") {
    const SessionTrace trace = random_trace(99, 50);
    std::stringstream ss;
    write_trace(trace, ss);
    std::string text = ss.str();

    SUBCASE("cut inside a record") {
        text.resize(text.size() * 2 / 3);
        std::istringstream in(text);
        CHECK_THROWS_AS(read_trace(in), CorruptRecord);
    }

    SUBCASE("missing outcome record") {
        const auto last_line_start = text.rfind("{\"completed\"");
        REQUIRE(last_line_start != std::string::npos);
        text.resize(last_line_start);
        std::istringstream in(text);
        CHECK_THROWS_AS(read_trace(in), CorruptRecord);
    }
}

TEST_CASE("schema version mismatch is rejected") {
    SessionTrace trace;
    std::stringstream ss;
    write_trace(trace, ss);
    std::string text = ss.str();
    const auto pos = text.find("\"schema_version\":1");
    REQUIRE(pos != std::string::npos);
    text.replace(pos, 18, "\"schema_version\":2");
    std::istringstream in(text);
    CHECK_THROWS_AS(read_trace(in), SchemaMismatch);
}

TEST_CASE("garbage line is a corrupt record") {
    SessionTrace trace;
    std::stringstream ss;
    write_trace(trace, ss);
    std::string text = ss.str();
    text.insert(text.find('\n') + 1, "not json\n");
    std::istringstream in(text);
    try {
        read_trace(in);
        FAIL("expected CorruptRecord");
    } catch (const CorruptRecord& ex) {
        CHECK(ex.line() == 2);
    }
}

TEST_CASE("replay delivers events with their tick") {
    SessionTrace trace;
    trace.record_tick(make_tick(0));
    trace.record_tick(make_tick(1));
    trace.record_tick(make_tick(2));
    trace.record_event({EventKind::GuidanceStart, 4000, WheelId::Wheel1});
    trace.record_event({EventKind::GuidanceEnd, 4000, std::nullopt});

    const auto steps = replay(trace);
    REQUIRE(steps.size() == 3);
    CHECK(steps[0].events.empty());
    CHECK(steps[1].events.empty());
    REQUIRE(steps[2].events.size() == 2);
    CHECK(steps[2].events[0]->kind == EventKind::GuidanceStart);  // tie keeps file order
    CHECK(steps[2].events[1]->kind == EventKind::GuidanceEnd);
    CHECK(steps[2].tick->tick_index == 2);
}

TEST_CASE("loop rates must divide one second exactly") {
    TraceHeader hdr;
    hdr.loop_rate_hz = 500.0;
    CHECK_NOTHROW(hdr.validate());
    CHECK(hdr.period_us() == 2000);

    hdr.loop_rate_hz = 300.0;  // 1e6 / 300 is not integral
    CHECK_THROWS_AS(hdr.validate(), ConfigError);

    hdr.loop_rate_hz = 250.5;
    CHECK_THROWS_AS(hdr.validate(), ConfigError);
}
