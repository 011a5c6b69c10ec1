#include "tandem/plant.hpp"

#include <algorithm>
#include <cmath>

namespace tandem {

void PlantConfig::validate() const {
    if (!(inertia > 0.0)) {
        throw ConfigError("plant inertia must be positive");
    }
    if (!(damping >= 0.0) || !(static_friction >= 0.0)) {
        throw ConfigError("plant damping and friction must be non-negative");
    }
    if (!(wheel_angle_limit_deg > 0.0)) {
        throw ConfigError("wheel_angle_limit_deg must be positive");
    }
    if (!(tip_gain > 0.0) || !(insertion_speed_max > 0.0)) {
        throw ConfigError("tip_gain and insertion_speed_max must be positive");
    }
    if (!(alignment_stall_threshold > -1.0) || !(alignment_stall_threshold < 1.0)) {
        throw ConfigError("alignment_stall_threshold must lie in (-1, 1)");
    }
    if (!(tracker_noise_std >= 0.0)) {
        throw ConfigError("tracker_noise_std must be non-negative");
    }
}

void plant_step(PlantState& state, const PerWheel<double>& motor_torques_nmm,
                const PerWheel<double>& trainee_hand_torques_nmm, double dt_s,
                const PerWheel<GearTrain>& gears, const PlantConfig& cfg) {
    for (std::size_t i = 0; i < kWheelCount; ++i) {
        const double tau = motor_torques_nmm[i] + trainee_hand_torques_nmm[i];
        if (!std::isfinite(tau)) {
            throw NonFiniteTorque("non-finite torque on motor " + std::to_string(i + 1));
        }
        double vel = state.motor_vel_deg_s[i];
        vel += dt_s * (tau - cfg.damping * vel) / cfg.inertia;
        // Coulomb friction opposes motion but cannot reverse it within a
        // step, otherwise it would inject energy at low speed.
        const double friction_dv = dt_s * cfg.static_friction / cfg.inertia;
        if (vel > 0.0) {
            vel = std::max(0.0, vel - friction_dv);
        } else if (vel < 0.0) {
            vel = std::min(0.0, vel + friction_dv);
        }
        double pos = state.motor_pos_deg[i] + dt_s * vel;

        const double motor_limit = cfg.wheel_angle_limit_deg / std::abs(gears[i].ratio());
        if (pos > motor_limit) {
            pos = motor_limit;
            vel = 0.0;
        } else if (pos < -motor_limit) {
            pos = -motor_limit;
            vel = 0.0;
        }
        state.motor_pos_deg[i] = pos;
        state.motor_vel_deg_s[i] = vel;
        state.wheel_angle_deg[i] = motor_to_wheel(pos, gears[i]);
    }
}

TipPose tip_pose(const PerWheel<AngleDeg>& wheel_angles_deg, double insertion_depth_m,
                 const ColonModel& colon, const PlantConfig& cfg) {
    const Vec3 base = colon.point_at(insertion_depth_m);
    const Vec3 t = colon.tangent_at(insertion_depth_m);

    // local frame: normal from the global up unless the tangent is vertical
    Vec3 up{0.0, 0.0, 1.0};
    if (std::abs(dot(up, t)) > 0.99) {
        up = Vec3{1.0, 0.0, 0.0};
    }
    const Vec3 n = normalized(up - t * dot(up, t));
    const Vec3 b = cross(t, n);

    const double defl_limit = cfg.tip_gain * 180.0;
    const double pitch = std::clamp(cfg.tip_gain * wheel_angles_deg[0], -defl_limit, defl_limit);
    const double yaw = std::clamp(cfg.tip_gain * wheel_angles_deg[1], -defl_limit, defl_limit);

    const auto deflect = [&](double pitch_deg, double yaw_deg) {
        Vec3 d = rotate_about(t, n, deg_to_rad(yaw_deg));
        d = rotate_about(d, b, deg_to_rad(pitch_deg));
        return normalized(d);
    };

    TipPose pose;
    pose.tangent = deflect(pitch, yaw);
    // constant-curvature segment: the chord leaves at half the bend angle
    const Vec3 chord = deflect(0.5 * pitch, 0.5 * yaw);
    pose.position = base + chord * 0.10;
    return pose;
}

double advancement_step(const Vec3& tip_tangent, const Vec3& centerline_tangent,
                        double push_effort, double dt_s, const PlantConfig& cfg) {
    const double alignment = dot(tip_tangent, centerline_tangent);
    if (alignment < cfg.alignment_stall_threshold) {
        return 0.0;
    }
    return push_effort * cfg.insertion_speed_max * dt_s * std::max(0.0, alignment);
}

TrackerSample tracker_sample(const PlantState& state, double t_s, const ColonModel& colon,
                             const PlantConfig& cfg, DeterministicRng& rng) {
    TrackerSample sample;
    sample.t_s = t_s;
    sample.positions[0] = state.tip_position;
    for (std::size_t k = 1; k < 4; ++k) {
        const double s = std::max(0.0, state.insertion_depth_m - 0.10 * static_cast<double>(k));
        sample.positions[k] = colon.point_at(s);
    }
    if (cfg.tracker_noise_std > 0.0) {
        for (auto& p : sample.positions) {
            p.x += rng.gaussian(0.0, cfg.tracker_noise_std);
            p.y += rng.gaussian(0.0, cfg.tracker_noise_std);
            p.z += rng.gaussian(0.0, cfg.tracker_noise_std);
        }
    }
    return sample;
}

}  // namespace tandem
