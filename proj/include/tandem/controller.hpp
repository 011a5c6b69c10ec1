#pragma once

#include <cstdint>

#include "tandem/kinematics.hpp"

namespace tandem {

struct PidGains {
    double kp = 0.0;  // torque per degree of error (N*mm/deg)
    double kd = 0.0;  // N*mm*s/deg
    double ki = 0.0;  // N*mm/(deg*s)

    void validate() const;
};

// The two gain sets of the dual control scheme: soft/transparent while the
// trainee drives (sigma=0), stiff/tracking while the preceptor guides
// (sigma=1).
struct GainSchedule {
    PidGains compliance{0.02, 0.001, 0.0};
    PidGains guidance{5.0, 0.05, 0.5};

    void validate() const;
};

struct PidConfig {
    double integral_limit = 50.0;        // deg*s, clamping anti-windup
    double derivative_filter_hz = 50.0;  // first-order low-pass; <= 0 disables
    double torque_limit_nmm = 500.0;     // output clamp; <= 0 disables
    double friction_feedforward_nmm = 0.0;

    void validate() const;
};

struct PidState {
    double integral = 0.0;       // deg*s
    double prev_error = 0.0;     // deg
    double deriv_filtered = 0.0; // deg/s
    // Cleared at mode transitions so the first step after a gain jump sees a
    // zero derivative instead of a spike against stale prev_error.
    bool has_prev_error = false;
};

// Latched at guidance onset: motor position q* and the preceptor wheel angle
// the subsequent deltas are measured from.
struct OnsetLatch {
    AngleDeg motor_pos_deg = 0.0;   // q*
    AngleDeg wheel_angle_deg = 0.0; // theta at onset
};

// Reference motor position while guiding: q* + (theta_now - theta_onset)/(g1*g2).
AngleDeg guidance_reference(const OnsetLatch& latch, AngleDeg wheel_angle_now,
                            const GearTrain& gear);

// Compliance reference tracks the measured position, so the tracking error is
// zero by construction and the soft gains leave the wheel free in the
// trainee's hand.
inline AngleDeg compliance_reference(AngleDeg measured_motor_pos) { return measured_motor_pos; }

const PidGains& select_gains(bool sigma, const GainSchedule& schedule);

// One 2 ms PID step. Rectangular-rule integral with clamping anti-windup,
// backward-difference derivative through an optional first-order low-pass.
// Returns the torque before the output clamp is applied by the caller's
// config (clamping lives here too, driven by cfg.torque_limit_nmm).
double pid_step(PidState& state, double error_deg, double dt_s, const PidGains& gains,
                const PidConfig& cfg);

// Call exactly when sigma changes: zero the integrator and derivative memory
// so the gain jump does not kick the motor.
void on_mode_transition(PidState& state);

struct MotorCommand {
    double torque_nmm = 0.0;
    AngleDeg reference_deg = 0.0;
    bool sigma = false;
};

}  // namespace tandem
