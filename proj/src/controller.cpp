#include "tandem/controller.hpp"

#include <algorithm>
#include <cmath>

namespace tandem {

void PidGains::validate() const {
    if (!(kp >= 0.0) || !(kd >= 0.0) || !(ki >= 0.0)) {
        throw ConfigError("PID gains must be non-negative and finite");
    }
}

void GainSchedule::validate() const {
    compliance.validate();
    guidance.validate();
}

void PidConfig::validate() const {
    if (!(integral_limit > 0.0)) {
        throw ConfigError("integral_limit must be positive");
    }
    if (!std::isfinite(derivative_filter_hz) || !std::isfinite(torque_limit_nmm) ||
        !std::isfinite(friction_feedforward_nmm)) {
        throw ConfigError("PID config values must be finite");
    }
}

AngleDeg guidance_reference(const OnsetLatch& latch, AngleDeg wheel_angle_now,
                            const GearTrain& gear) {
    return latch.motor_pos_deg +
           wheel_delta_to_motor_delta(wheel_angle_now - latch.wheel_angle_deg, gear);
}

const PidGains& select_gains(bool sigma, const GainSchedule& schedule) {
    return sigma ? schedule.guidance : schedule.compliance;
}

double pid_step(PidState& state, double error_deg, double dt_s, const PidGains& gains,
                const PidConfig& cfg) {
    if (!std::isfinite(error_deg) || !std::isfinite(dt_s) || dt_s <= 0.0) {
        throw NonFiniteInput("pid_step requires finite error and dt > 0");
    }

    state.integral = std::clamp(state.integral + error_deg * dt_s,
                                -cfg.integral_limit, cfg.integral_limit);

    const double raw_deriv =
        state.has_prev_error ? (error_deg - state.prev_error) / dt_s : 0.0;
    if (cfg.derivative_filter_hz > 0.0) {
        const double tau = 1.0 / (2.0 * 3.14159265358979323846 * cfg.derivative_filter_hz);
        const double alpha = dt_s / (dt_s + tau);
        state.deriv_filtered += alpha * (raw_deriv - state.deriv_filtered);
    } else {
        state.deriv_filtered = raw_deriv;
    }
    state.prev_error = error_deg;
    state.has_prev_error = true;

    double torque = gains.kp * error_deg + gains.kd * state.deriv_filtered +
                    gains.ki * state.integral;
    if (cfg.torque_limit_nmm > 0.0) {
        torque = std::clamp(torque, -cfg.torque_limit_nmm, cfg.torque_limit_nmm);
    }
    return torque;
}

void on_mode_transition(PidState& state) {
    state.integral = 0.0;
    state.deriv_filtered = 0.0;
    state.has_prev_error = false;
}

}  // namespace tandem
