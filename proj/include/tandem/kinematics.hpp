#pragma once

#include <array>
#include <cstdint>

#include "tandem/errors.hpp"

namespace tandem {

// Angles are multi-turn reals in degrees. They accumulate without wrapping:
// the guidance law works on deltas relative to motion onset, so wrapping to
// [0, 360) would corrupt them (relative encoder semantics).
using AngleDeg = double;

enum class WheelId : std::uint8_t {
    Wheel1 = 0,  // up/down
    Wheel2 = 1,  // left/right
};

inline constexpr std::size_t kWheelCount = 2;

template <class T>
using PerWheel = std::array<T, kWheelCount>;

constexpr std::size_t index_of(WheelId w) { return static_cast<std::size_t>(w); }

// Incremental encoder on one control-wheel shaft, quadrature decoded.
struct EncoderConfig {
    std::int64_t counts_per_rev = 8192;  // 2048 CPR x4 quadrature
    double zero_offset_deg = 0.0;

    double quantum_deg() const { return 360.0 / static_cast<double>(counts_per_rev); }
    void validate() const;
};

// Gear ratios between a control wheel and its motor. The reference law
// divides wheel deltas by g1*g2, so the default product 0.1 means one wheel
// degree commands ten motor degrees (reduction drive).
struct GearTrain {
    double g1 = 1.0;
    double g2 = 0.1;

    double ratio() const { return g1 * g2; }
    void validate() const;
};

// Snap an angle onto the encoder grid, nearest count.
std::int64_t quantize_angle(AngleDeg angle, const EncoderConfig& cfg);

// Exact inverse of the quantization grid: counts * quantum + zero offset.
AngleDeg counts_to_angle(std::int64_t counts, const EncoderConfig& cfg);

// Wheel-space delta to motor-space delta: dtheta / (g1*g2).
AngleDeg wheel_delta_to_motor_delta(AngleDeg wheel_delta, const GearTrain& gear);

// Follower wheel angle for a given motor angle (inverse mapping).
AngleDeg motor_to_wheel(AngleDeg motor_angle, const GearTrain& gear);

}  // namespace tandem
