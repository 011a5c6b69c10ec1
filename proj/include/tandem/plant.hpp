#pragma once

#include <array>

#include "tandem/colon.hpp"
#include "tandem/geometry.hpp"
#include "tandem/kinematics.hpp"
#include "tandem/rng.hpp"

namespace tandem {

// Simulated follower: motors, gear train, trainee wheels, a kinematic tip
// map and an advancement model. None of this corresponds to the physical
// device; every constant is configuration so the control stack has a closed
// loop to act on.
struct PlantConfig {
    double inertia = 2e-4;               // N*mm*s^2/deg, motor space
    double damping = 0.01;               // N*mm*s/deg
    double static_friction = 0.0;        // N*mm, opposes motion
    double wheel_angle_limit_deg = 180.0;
    double tip_gain = 1.35;              // tip degrees per wheel degree
    double insertion_speed_max = 0.05;   // m/s at full push, perfect alignment
    double alignment_stall_threshold = 0.5;  // cosine below which the tip jams
    double tracker_noise_std = 0.001;    // meters, isotropic

    void validate() const;
};

struct PlantState {
    PerWheel<AngleDeg> motor_pos_deg{{0.0, 0.0}};
    PerWheel<double> motor_vel_deg_s{{0.0, 0.0}};
    PerWheel<AngleDeg> wheel_angle_deg{{0.0, 0.0}};  // trainee wheels, geared to the motors
    double insertion_depth_m = 0.0;
    Vec3 tip_position;
    Vec3 tip_tangent{1.0, 0.0, 0.0};
};

struct TrackerSample {
    double t_s = 0.0;
    std::array<Vec3, 4> positions;  // tip plus three stem sensors

    bool operator==(const TrackerSample&) const = default;
};

// Semi-implicit Euler update of both motors; wheels follow through the gear
// train and clamp at the mechanical limits (velocity zeroed on contact).
void plant_step(PlantState& state, const PerWheel<double>& motor_torques_nmm,
                const PerWheel<double>& trainee_hand_torques_nmm, double dt_s,
                const PerWheel<GearTrain>& gears, const PlantConfig& cfg);

// Tip pose from wheel deflection at the current insertion depth: wheel1 bends
// in the up/down plane, wheel2 left/right, both scaled by tip_gain; the tip
// point sits one articulated-segment chord (10 cm) past the base point.
struct TipPose {
    Vec3 position;
    Vec3 tangent;
};
TipPose tip_pose(const PerWheel<AngleDeg>& wheel_angles_deg, double insertion_depth_m,
                 const ColonModel& colon, const PlantConfig& cfg);

// Forward progress this cycle. Advancement needs the tip roughly aligned with
// the lumen; below the alignment threshold the scope is pushing into the wall
// and makes no progress.
double advancement_step(const Vec3& tip_tangent, const Vec3& centerline_tangent,
                        double push_effort, double dt_s, const PlantConfig& cfg);

// Four-sensor magnetic tracker sample: tip sensor plus stem sensors trailing
// by 10/20/30 cm of insertion depth (clamped at the anus end).
TrackerSample tracker_sample(const PlantState& state, double t_s, const ColonModel& colon,
                             const PlantConfig& cfg, DeterministicRng& rng);

}  // namespace tandem
