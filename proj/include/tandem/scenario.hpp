#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "tandem/arbitration.hpp"
#include "tandem/controller.hpp"
#include "tandem/kinematics.hpp"
#include "tandem/plant.hpp"

namespace tandem {

// A move starts when its anchor is satisfied and the previous move on the
// same channel has finished; the channel value ramps linearly from its
// current value to `target` over `duration_s` (0 means step).
struct ScriptAnchor {
    bool by_event = false;
    double at_s = 0.0;                            // time anchor
    EventKind event = EventKind::GuidanceWarning; // event anchor
    double delay_s = 0.0;                         // after the event fires
};

struct ScriptMove {
    ScriptAnchor anchor;
    double target = 0.0;
    double duration_s = 0.0;
};

struct ScriptChannel {
    double initial = 0.0;
    std::vector<ScriptMove> moves;
};

// Everything a deterministic run needs: module configs plus the scripted
// preceptor/trainee inputs. Loadable from JSON or TOML; unknown keys are
// rejected.
struct Scenario {
    std::string name = "unnamed";
    std::uint64_t seed = 0;
    double duration_s = 10.0;
    bool run_to_completion = false;
    double max_duration_s = 600.0;  // cap for run_to_completion
    double loop_rate_hz = 500.0;

    std::string colon_builtin = "normal_loop";
    std::optional<std::string> colon_file;

    EncoderConfig encoder;
    PerWheel<GearTrain> gears{{GearTrain{}, GearTrain{}}};
    ArbitrationConfig arbitration;
    GainSchedule gains;
    PidConfig pid;
    PlantConfig plant;
    std::uint64_t staleness_timeout_us = 100000;

    ScriptChannel enable{1.0, {}};  // the expert's binary switch, armed by default
    PerWheel<ScriptChannel> preceptor_wheels;
    PerWheel<ScriptChannel> trainee_torques;
    ScriptChannel push;

    double dt_s() const { return 1.0 / loop_rate_hz; }
    std::int64_t tick_count() const;  // ceil(duration * rate); cap when run_to_completion

    void validate() const;

    static Scenario from_json(const nlohmann::json& j);
    static Scenario load(const std::filesystem::path& file);

    // Deterministic snapshot embedded in trace headers.
    nlohmann::json to_json() const;
};

}  // namespace tandem
