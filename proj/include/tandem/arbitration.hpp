#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "tandem/controller.hpp"
#include "tandem/kinematics.hpp"

namespace tandem {

enum class EventKind : std::uint8_t {
    GuidanceWarning,  // the verbal three-count trigger point
    GuidanceStart,
    GuidanceEnd,
};

struct ArbitrationEvent {
    EventKind kind = EventKind::GuidanceWarning;
    std::uint64_t t_us = 0;
    std::optional<WheelId> wheel;  // set on GuidanceStart: the wheel whose motion triggered

    bool operator==(const ArbitrationEvent&) const = default;
};

struct ArbitrationConfig {
    double onset_threshold_deg = 0.02;  // per control cycle, strict >
    double loop_rate_hz = 500.0;
    int exit_dwell_cycles = 125;        // 250 ms of quiet wheels ends guidance
    double stall_window_s = 3.0;
    double warning_lead_s = 3.0;        // scripted delay between the warning and expert motion
    double advancement_epsilon_m = 0.001;  // progress rate (m/s) below which the scope is stalled

    double dt_s() const { return 1.0 / loop_rate_hz; }
    void validate() const;
};

// One per-cycle sample of the preceptor side.
struct WheelReading {
    PerWheel<AngleDeg> angles_deg{{0.0, 0.0}};
    bool enable_switch = false;
};

struct ArbitrationState {
    bool sigma = false;
    PerWheel<std::optional<OnsetLatch>> latches{};
    int quiet_cycles = 0;
    PerWheel<AngleDeg> prev_wheel_angles{{0.0, 0.0}};
    bool has_prev = false;
    std::int64_t last_cycle = -1;
    double stall_clock_s = 0.0;
    bool warning_active = false;  // a warning has fired for the ongoing stall
};

// Strict inequality: the paper's rule reads "more than", so a delta equal to
// the threshold does not count as motion onset.
bool detect_motion_onset(AngleDeg prev, AngleDeg curr, const ArbitrationConfig& cfg);

struct ArbitrationOutcome {
    bool sigma = false;
    bool transitioned = false;  // mode changed this cycle; controllers must reset
    std::vector<ArbitrationEvent> events;
};

// Per-cycle mode decision. Entry: any wheel delta strictly above threshold
// while enabled latches both wheels' (motor position, wheel angle) and raises
// sigma. Exit: both wheels quiet for exit_dwell_cycles, or the enable switch
// dropping, clears the latches. Must be called once per cycle in order.
ArbitrationOutcome arbitrate(ArbitrationState& state, std::int64_t cycle_index,
                             std::uint64_t t_us, const WheelReading& wheels,
                             const PerWheel<AngleDeg>& motor_pos_deg,
                             const ArbitrationConfig& cfg);

struct StallUpdate {
    double stall_clock_s = 0.0;
    bool warning = false;  // fired on this cycle (first crossing of the window)
};

// Advances or resets the no-advancement clock. The warning fires exactly when
// the clock first reaches stall_window_s; the clock keeps counting so a
// contiguous stall warns only once.
StallUpdate guidance_trigger_check(double stall_clock_s, double advancement_delta_m,
                                   double dt_s, const ArbitrationConfig& cfg);

}  // namespace tandem
