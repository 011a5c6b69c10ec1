#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "tandem/arbitration.hpp"
#include "tandem/geometry.hpp"
#include "tandem/kinematics.hpp"

namespace tandem {

inline constexpr int kTraceSchemaVersion = 1;

// One control cycle. Timestamps are integer microseconds so the 2 ms grid is
// exact (2000 us per tick at 500 Hz, no floating drift).
struct TickRecord {
    std::int64_t tick_index = 0;
    std::uint64_t t_us = 0;
    bool sigma = false;
    PerWheel<AngleDeg> preceptor_deg{{0.0, 0.0}};
    PerWheel<AngleDeg> trainee_deg{{0.0, 0.0}};
    PerWheel<AngleDeg> motor_deg{{0.0, 0.0}};
    PerWheel<AngleDeg> reference_deg{{0.0, 0.0}};
    PerWheel<double> torque_nmm{{0.0, 0.0}};
    double depth_m = 0.0;
    std::array<Vec3, 4> trackers{};

    bool operator==(const TickRecord&) const = default;
};

struct TraceHeader {
    int schema_version = kTraceSchemaVersion;
    double loop_rate_hz = 500.0;
    std::string scenario;
    std::uint64_t seed = 0;
    double colon_length_m = 0.0;
    nlohmann::json configs = nlohmann::json::object();  // opaque snapshot

    std::uint64_t period_us() const;
    void validate() const;

    bool operator==(const TraceHeader&) const = default;
};

struct Outcome {
    bool completed = false;
    double completion_time_s = 0.0;

    bool operator==(const Outcome&) const = default;
};

// The unit of persistence, replay and metrics: every tick plus the mode
// events, in order.
struct SessionTrace {
    TraceHeader header;
    std::vector<TickRecord> ticks;
    std::vector<ArbitrationEvent> events;
    Outcome outcome;

    // Appends; tick_index must be previous + 1 (0 for the first) and t_us
    // must sit exactly on the loop-period grid.
    void record_tick(const TickRecord& record);

    // Appends; event times must be non-decreasing.
    void record_event(const ArbitrationEvent& event);

    bool operator==(const SessionTrace&) const = default;
};

// JSON Lines, one record per line with a "kind" discriminator; doubles are
// serialized at full round-trip precision. See docs/schema.md.
void write_trace(const SessionTrace& trace, std::ostream& out);
void write_trace(const SessionTrace& trace, const std::filesystem::path& file);

SessionTrace read_trace(std::istream& in);
SessionTrace read_trace(const std::filesystem::path& file);

// Tick-ordered view with each tick's events attached (events between ticks
// attach to the next tick; ties keep file order).
struct ReplayStep {
    const TickRecord* tick = nullptr;
    std::vector<const ArbitrationEvent*> events;
};
std::vector<ReplayStep> replay(const SessionTrace& trace);

std::string event_kind_name(EventKind kind);

}  // namespace tandem
