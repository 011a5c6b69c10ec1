#include "tandem/scenario.hpp"

#include <cmath>
#include <fstream>
#include <initializer_list>
#include <set>

#include "tandem/session.hpp"
#include "tandem/toml_lite.hpp"

namespace tandem {

using nlohmann::json;

namespace {

void require_keys(const json& j, const std::string& where,
                  std::initializer_list<const char*> allowed) {
    if (!j.is_object()) {
        throw ConfigError(where + " must be a table/object");
    }
    const std::set<std::string> ok(allowed.begin(), allowed.end());
    for (const auto& [key, value] : j.items()) {
        if (!ok.count(key)) {
            throw ConfigError("unknown key '" + key + "' in " + where);
        }
    }
}

double get_num(const json& j, const char* key, double fallback) {
    if (!j.contains(key)) {
        return fallback;
    }
    if (!j.at(key).is_number()) {
        throw ConfigError(std::string("key '") + key + "' must be a number");
    }
    return j.at(key).get<double>();
}

EventKind event_kind_from_name(const std::string& name) {
    if (name == "guidance_warning") return EventKind::GuidanceWarning;
    if (name == "guidance_start") return EventKind::GuidanceStart;
    if (name == "guidance_end") return EventKind::GuidanceEnd;
    throw ConfigError("unknown event '" + name + "' in script anchor");
}

ScriptMove move_from_json(const json& j, const std::string& where, double default_delay) {
    require_keys(j, where, {"at", "after_event", "delay", "target", "duration"});
    ScriptMove m;
    const bool has_at = j.contains("at");
    const bool has_event = j.contains("after_event");
    if (has_at == has_event) {
        throw ConfigError(where + ": each move needs exactly one of 'at' or 'after_event'");
    }
    if (has_at) {
        m.anchor.at_s = get_num(j, "at", 0.0);
    } else {
        m.anchor.by_event = true;
        m.anchor.event = event_kind_from_name(j.at("after_event").get<std::string>());
        m.anchor.delay_s = get_num(j, "delay", default_delay);
    }
    if (!j.contains("target")) {
        throw ConfigError(where + ": move needs a 'target'");
    }
    m.target = get_num(j, "target", 0.0);
    m.duration_s = get_num(j, "duration", 0.0);
    if (m.duration_s < 0.0) {
        throw ConfigError(where + ": duration must be >= 0");
    }
    return m;
}

ScriptChannel channel_from_json(const json& j, const std::string& where, double default_delay) {
    require_keys(j, where, {"initial", "moves"});
    ScriptChannel ch;
    ch.initial = get_num(j, "initial", 0.0);
    if (j.contains("moves")) {
        if (!j.at("moves").is_array()) {
            throw ConfigError(where + ".moves must be an array");
        }
        std::size_t k = 0;
        for (const auto& mj : j.at("moves")) {
            ch.moves.push_back(
                move_from_json(mj, where + ".moves[" + std::to_string(k) + "]", default_delay));
            ++k;
        }
    }
    return ch;
}

json move_to_json(const ScriptMove& m) {
    json j;
    if (m.anchor.by_event) {
        j["after_event"] = event_kind_name(m.anchor.event);
        j["delay"] = m.anchor.delay_s;
    } else {
        j["at"] = m.anchor.at_s;
    }
    j["target"] = m.target;
    j["duration"] = m.duration_s;
    return j;
}

json channel_to_json(const ScriptChannel& ch) {
    json j;
    j["initial"] = ch.initial;
    json moves = json::array();
    for (const auto& m : ch.moves) {
        moves.push_back(move_to_json(m));
    }
    j["moves"] = moves;
    return j;
}

GearTrain gear_from_json(const json& j, const std::string& where) {
    require_keys(j, where, {"g1", "g2"});
    GearTrain g;
    g.g1 = get_num(j, "g1", g.g1);
    g.g2 = get_num(j, "g2", g.g2);
    return g;
}

}  // namespace

std::int64_t Scenario::tick_count() const {
    const double d = run_to_completion ? max_duration_s : duration_s;
    return static_cast<std::int64_t>(std::ceil(d * loop_rate_hz));
}

void Scenario::validate() const {
    if (!(loop_rate_hz > 0.0) || loop_rate_hz != std::floor(loop_rate_hz) ||
        1000000 % static_cast<std::uint64_t>(loop_rate_hz) != 0) {
        throw ConfigError("loop_rate_hz must be a positive integer divisor of 1e6");
    }
    if (!run_to_completion && !(duration_s > 0.0)) {
        throw ConfigError("duration_s must be positive");
    }
    if (run_to_completion && !(max_duration_s > 0.0)) {
        throw ConfigError("max_duration_s must be positive");
    }
    encoder.validate();
    for (const auto& g : gears) {
        g.validate();
    }
    arbitration.validate();
    gains.validate();
    pid.validate();
    plant.validate();
    if (colon_builtin != "normal_loop" && !colon_file) {
        throw ConfigError("unknown builtin colon '" + colon_builtin + "'");
    }
}

Scenario Scenario::from_json(const json& j) {
    require_keys(j, "scenario",
                 {"name", "seed", "duration_s", "run_to_completion", "max_duration_s",
                  "loop_rate_hz", "colon", "encoder", "gear", "arbitration", "gains", "pid",
                  "plant", "link", "enable", "preceptor", "trainee"});
    Scenario sc;
    if (j.contains("name")) {
        sc.name = j.at("name").get<std::string>();
    }
    if (j.contains("seed")) {
        sc.seed = j.at("seed").get<std::uint64_t>();
    }
    sc.duration_s = get_num(j, "duration_s", sc.duration_s);
    if (j.contains("run_to_completion")) {
        sc.run_to_completion = j.at("run_to_completion").get<bool>();
    }
    sc.max_duration_s = get_num(j, "max_duration_s", sc.max_duration_s);
    sc.loop_rate_hz = get_num(j, "loop_rate_hz", sc.loop_rate_hz);

    if (j.contains("colon")) {
        const json& cj = j.at("colon");
        require_keys(cj, "colon", {"builtin", "file"});
        if (cj.contains("builtin") && cj.contains("file")) {
            throw ConfigError("colon: give either 'builtin' or 'file', not both");
        }
        if (cj.contains("builtin")) {
            sc.colon_builtin = cj.at("builtin").get<std::string>();
        }
        if (cj.contains("file")) {
            sc.colon_file = cj.at("file").get<std::string>();
        }
    }

    if (j.contains("encoder")) {
        const json& ej = j.at("encoder");
        require_keys(ej, "encoder", {"counts_per_rev", "zero_offset_deg"});
        sc.encoder.counts_per_rev =
            static_cast<std::int64_t>(get_num(ej, "counts_per_rev",
                                              static_cast<double>(sc.encoder.counts_per_rev)));
        sc.encoder.zero_offset_deg = get_num(ej, "zero_offset_deg", sc.encoder.zero_offset_deg);
    }

    if (j.contains("gear")) {
        const json& gj = j.at("gear");
        if (gj.is_array()) {
            if (gj.size() != kWheelCount) {
                throw ConfigError("gear array must hold one entry per wheel");
            }
            sc.gears[0] = gear_from_json(gj[0], "gear[0]");
            sc.gears[1] = gear_from_json(gj[1], "gear[1]");
        } else {
            const GearTrain g = gear_from_json(gj, "gear");
            sc.gears = {g, g};
        }
    }

    if (j.contains("arbitration")) {
        const json& aj = j.at("arbitration");
        require_keys(aj, "arbitration",
                     {"onset_threshold_deg", "exit_dwell_cycles", "stall_window_s",
                      "warning_lead_s", "advancement_epsilon_m"});
        sc.arbitration.onset_threshold_deg =
            get_num(aj, "onset_threshold_deg", sc.arbitration.onset_threshold_deg);
        sc.arbitration.exit_dwell_cycles = static_cast<int>(
            get_num(aj, "exit_dwell_cycles", sc.arbitration.exit_dwell_cycles));
        sc.arbitration.stall_window_s = get_num(aj, "stall_window_s", sc.arbitration.stall_window_s);
        sc.arbitration.warning_lead_s = get_num(aj, "warning_lead_s", sc.arbitration.warning_lead_s);
        sc.arbitration.advancement_epsilon_m =
            get_num(aj, "advancement_epsilon_m", sc.arbitration.advancement_epsilon_m);
    }
    sc.arbitration.loop_rate_hz = sc.loop_rate_hz;

    if (j.contains("gains")) {
        const json& gj = j.at("gains");
        require_keys(gj, "gains", {"compliance", "guidance"});
        const auto read_gains = [&](const char* key, PidGains& out) {
            if (!gj.contains(key)) {
                return;
            }
            const json& pj = gj.at(key);
            require_keys(pj, std::string("gains.") + key, {"kp", "kd", "ki"});
            out.kp = get_num(pj, "kp", out.kp);
            out.kd = get_num(pj, "kd", out.kd);
            out.ki = get_num(pj, "ki", out.ki);
        };
        read_gains("compliance", sc.gains.compliance);
        read_gains("guidance", sc.gains.guidance);
    }

    if (j.contains("pid")) {
        const json& pj = j.at("pid");
        require_keys(pj, "pid",
                     {"integral_limit", "derivative_filter_hz", "torque_limit_nmm",
                      "friction_feedforward_nmm"});
        sc.pid.integral_limit = get_num(pj, "integral_limit", sc.pid.integral_limit);
        sc.pid.derivative_filter_hz =
            get_num(pj, "derivative_filter_hz", sc.pid.derivative_filter_hz);
        sc.pid.torque_limit_nmm = get_num(pj, "torque_limit_nmm", sc.pid.torque_limit_nmm);
        sc.pid.friction_feedforward_nmm =
            get_num(pj, "friction_feedforward_nmm", sc.pid.friction_feedforward_nmm);
    }

    if (j.contains("plant")) {
        const json& pj = j.at("plant");
        require_keys(pj, "plant",
                     {"inertia", "damping", "static_friction", "wheel_angle_limit_deg",
                      "tip_gain", "insertion_speed_max", "alignment_stall_threshold",
                      "tracker_noise_std"});
        sc.plant.inertia = get_num(pj, "inertia", sc.plant.inertia);
        sc.plant.damping = get_num(pj, "damping", sc.plant.damping);
        sc.plant.static_friction = get_num(pj, "static_friction", sc.plant.static_friction);
        sc.plant.wheel_angle_limit_deg =
            get_num(pj, "wheel_angle_limit_deg", sc.plant.wheel_angle_limit_deg);
        sc.plant.tip_gain = get_num(pj, "tip_gain", sc.plant.tip_gain);
        sc.plant.insertion_speed_max =
            get_num(pj, "insertion_speed_max", sc.plant.insertion_speed_max);
        sc.plant.alignment_stall_threshold =
            get_num(pj, "alignment_stall_threshold", sc.plant.alignment_stall_threshold);
        sc.plant.tracker_noise_std = get_num(pj, "tracker_noise_std", sc.plant.tracker_noise_std);
    }

    if (j.contains("link")) {
        const json& lj = j.at("link");
        require_keys(lj, "link", {"staleness_timeout_us"});
        sc.staleness_timeout_us = static_cast<std::uint64_t>(
            get_num(lj, "staleness_timeout_us", static_cast<double>(sc.staleness_timeout_us)));
    }

    const double lead = sc.arbitration.warning_lead_s;
    if (j.contains("enable")) {
        sc.enable = channel_from_json(j.at("enable"), "enable", lead);
    }
    if (j.contains("preceptor")) {
        const json& pj = j.at("preceptor");
        require_keys(pj, "preceptor", {"wheel1", "wheel2"});
        if (pj.contains("wheel1")) {
            sc.preceptor_wheels[0] = channel_from_json(pj.at("wheel1"), "preceptor.wheel1", lead);
        }
        if (pj.contains("wheel2")) {
            sc.preceptor_wheels[1] = channel_from_json(pj.at("wheel2"), "preceptor.wheel2", lead);
        }
    }
    if (j.contains("trainee")) {
        const json& tj = j.at("trainee");
        require_keys(tj, "trainee", {"torque1", "torque2", "push"});
        if (tj.contains("torque1")) {
            sc.trainee_torques[0] = channel_from_json(tj.at("torque1"), "trainee.torque1", lead);
        }
        if (tj.contains("torque2")) {
            sc.trainee_torques[1] = channel_from_json(tj.at("torque2"), "trainee.torque2", lead);
        }
        if (tj.contains("push")) {
            sc.push = channel_from_json(tj.at("push"), "trainee.push", lead);
        }
    }

    sc.validate();
    return sc;
}

Scenario Scenario::load(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) {
        throw ConfigError("cannot open scenario: " + file.string());
    }
    json j;
    if (file.extension() == ".toml") {
        j = parse_toml(in);
    } else {
        try {
            j = json::parse(in);
        } catch (const json::exception& ex) {
            throw ConfigError("scenario " + file.string() + ": " + ex.what());
        }
    }
    return from_json(j);
}

json Scenario::to_json() const {
    json j;
    j["name"] = name;
    j["seed"] = seed;
    j["duration_s"] = duration_s;
    j["run_to_completion"] = run_to_completion;
    j["max_duration_s"] = max_duration_s;
    j["loop_rate_hz"] = loop_rate_hz;
    if (colon_file) {
        j["colon"] = json{{"file", *colon_file}};
    } else {
        j["colon"] = json{{"builtin", colon_builtin}};
    }
    j["encoder"] = {{"counts_per_rev", encoder.counts_per_rev},
                    {"zero_offset_deg", encoder.zero_offset_deg}};
    j["gear"] = json::array({json{{"g1", gears[0].g1}, {"g2", gears[0].g2}},
                             json{{"g1", gears[1].g1}, {"g2", gears[1].g2}}});
    j["arbitration"] = {{"onset_threshold_deg", arbitration.onset_threshold_deg},
                        {"exit_dwell_cycles", arbitration.exit_dwell_cycles},
                        {"stall_window_s", arbitration.stall_window_s},
                        {"warning_lead_s", arbitration.warning_lead_s},
                        {"advancement_epsilon_m", arbitration.advancement_epsilon_m}};
    j["gains"] = {{"compliance",
                   {{"kp", gains.compliance.kp}, {"kd", gains.compliance.kd},
                    {"ki", gains.compliance.ki}}},
                  {"guidance",
                   {{"kp", gains.guidance.kp}, {"kd", gains.guidance.kd},
                    {"ki", gains.guidance.ki}}}};
    j["pid"] = {{"integral_limit", pid.integral_limit},
                {"derivative_filter_hz", pid.derivative_filter_hz},
                {"torque_limit_nmm", pid.torque_limit_nmm},
                {"friction_feedforward_nmm", pid.friction_feedforward_nmm}};
    j["plant"] = {{"inertia", plant.inertia},
                  {"damping", plant.damping},
                  {"static_friction", plant.static_friction},
                  {"wheel_angle_limit_deg", plant.wheel_angle_limit_deg},
                  {"tip_gain", plant.tip_gain},
                  {"insertion_speed_max", plant.insertion_speed_max},
                  {"alignment_stall_threshold", plant.alignment_stall_threshold},
                  {"tracker_noise_std", plant.tracker_noise_std}};
    j["link"] = {{"staleness_timeout_us", staleness_timeout_us}};
    j["enable"] = channel_to_json(enable);
    j["preceptor"] = {{"wheel1", channel_to_json(preceptor_wheels[0])},
                      {"wheel2", channel_to_json(preceptor_wheels[1])}};
    j["trainee"] = {{"torque1", channel_to_json(trainee_torques[0])},
                    {"torque2", channel_to_json(trainee_torques[1])},
                    {"push", channel_to_json(push)}};
    return j;
}

}  // namespace tandem
