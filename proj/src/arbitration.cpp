#include "tandem/arbitration.hpp"

#include <cmath>
#include <string>

namespace tandem {

void ArbitrationConfig::validate() const {
    if (!(onset_threshold_deg > 0.0)) {
        throw ConfigError("onset_threshold_deg must be positive");
    }
    if (!(loop_rate_hz > 0.0)) {
        throw ConfigError("loop_rate_hz must be positive");
    }
    if (exit_dwell_cycles < 1) {
        throw ConfigError("exit_dwell_cycles must be >= 1");
    }
    if (!(stall_window_s > 0.0) || !(warning_lead_s > 0.0)) {
        throw ConfigError("stall_window_s and warning_lead_s must be positive");
    }
    if (!(advancement_epsilon_m > 0.0)) {
        throw ConfigError("advancement_epsilon_m must be positive");
    }
}

bool detect_motion_onset(AngleDeg prev, AngleDeg curr, const ArbitrationConfig& cfg) {
    return std::abs(curr - prev) > cfg.onset_threshold_deg;
}

ArbitrationOutcome arbitrate(ArbitrationState& state, std::int64_t cycle_index,
                             std::uint64_t t_us, const WheelReading& wheels,
                             const PerWheel<AngleDeg>& motor_pos_deg,
                             const ArbitrationConfig& cfg) {
    if (cycle_index <= state.last_cycle) {
        throw OutOfOrderTick("arbitrate called with cycle " + std::to_string(cycle_index) +
                             " after cycle " + std::to_string(state.last_cycle));
    }
    state.last_cycle = cycle_index;

    PerWheel<bool> moving{{false, false}};
    if (state.has_prev) {
        for (std::size_t i = 0; i < kWheelCount; ++i) {
            moving[i] = detect_motion_onset(state.prev_wheel_angles[i], wheels.angles_deg[i], cfg);
        }
    }
    state.prev_wheel_angles = wheels.angles_deg;
    state.has_prev = true;

    ArbitrationOutcome out;
    if (!state.sigma) {
        if (wheels.enable_switch && (moving[0] || moving[1])) {
            state.sigma = true;
            state.quiet_cycles = 0;
            for (std::size_t i = 0; i < kWheelCount; ++i) {
                state.latches[i] = OnsetLatch{motor_pos_deg[i], wheels.angles_deg[i]};
            }
            const WheelId trigger = moving[0] ? WheelId::Wheel1 : WheelId::Wheel2;
            out.events.push_back({EventKind::GuidanceStart, t_us, trigger});
            out.transitioned = true;
        }
    } else {
        bool end = false;
        if (!wheels.enable_switch) {
            end = true;
        } else if (!moving[0] && !moving[1]) {
            ++state.quiet_cycles;
            end = state.quiet_cycles >= cfg.exit_dwell_cycles;
        } else {
            state.quiet_cycles = 0;
        }
        if (end) {
            state.sigma = false;
            state.quiet_cycles = 0;
            state.latches = {};
            out.events.push_back({EventKind::GuidanceEnd, t_us, std::nullopt});
            out.transitioned = true;
        }
    }
    out.sigma = state.sigma;
    return out;
}

StallUpdate guidance_trigger_check(double stall_clock_s, double advancement_delta_m,
                                   double dt_s, const ArbitrationConfig& cfg) {
    StallUpdate up;
    const bool advancing = advancement_delta_m > cfg.advancement_epsilon_m * dt_s;
    if (advancing) {
        up.stall_clock_s = 0.0;
        return up;
    }
    up.stall_clock_s = stall_clock_s + dt_s;
    // Tolerance absorbs the accumulated rounding of summing dt (about 1e-13
    // over a 3 s window), keeping the warning within one tick of the window.
    const double window = cfg.stall_window_s - 1e-9;
    up.warning = stall_clock_s < window && up.stall_clock_s >= window;
    return up;
}

}  // namespace tandem
