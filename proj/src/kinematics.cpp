#include "tandem/kinematics.hpp"

#include <cmath>

namespace tandem {

void EncoderConfig::validate() const {
    if (counts_per_rev < 4) {
        throw ConfigError("encoder counts_per_rev must be >= 4");
    }
    if (!std::isfinite(zero_offset_deg)) {
        throw ConfigError("encoder zero_offset_deg must be finite");
    }
}

void GearTrain::validate() const {
    if (!std::isfinite(g1) || !std::isfinite(g2)) {
        throw ConfigError("gear ratios must be finite");
    }
    if (ratio() == 0.0) {
        throw ZeroGearRatio();
    }
}

std::int64_t quantize_angle(AngleDeg angle, const EncoderConfig& cfg) {
    return std::llround((angle - cfg.zero_offset_deg) / cfg.quantum_deg());
}

AngleDeg counts_to_angle(std::int64_t counts, const EncoderConfig& cfg) {
    return static_cast<double>(counts) * cfg.quantum_deg() + cfg.zero_offset_deg;
}

AngleDeg wheel_delta_to_motor_delta(AngleDeg wheel_delta, const GearTrain& gear) {
    return wheel_delta / gear.ratio();
}

AngleDeg motor_to_wheel(AngleDeg motor_angle, const GearTrain& gear) {
    return motor_angle * gear.ratio();
}

}  // namespace tandem
