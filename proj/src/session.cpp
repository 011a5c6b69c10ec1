#include "tandem/session.hpp"

#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>

namespace tandem {

using nlohmann::json;

std::uint64_t TraceHeader::period_us() const {
    return static_cast<std::uint64_t>(1000000.0 / loop_rate_hz);
}

void TraceHeader::validate() const {
    if (schema_version != kTraceSchemaVersion) {
        throw SchemaMismatch("unsupported schema_version " + std::to_string(schema_version));
    }
    if (!(loop_rate_hz > 0.0) || loop_rate_hz != std::floor(loop_rate_hz) ||
        1000000 % static_cast<std::uint64_t>(loop_rate_hz) != 0) {
        throw ConfigError("loop_rate_hz must be a positive integer divisor of 1e6");
    }
}

void SessionTrace::record_tick(const TickRecord& record) {
    const std::int64_t expected = ticks.empty() ? 0 : ticks.back().tick_index + 1;
    if (record.tick_index != expected) {
        throw NonContiguousTick("tick " + std::to_string(record.tick_index) +
                                " after tick " + std::to_string(expected - 1));
    }
    const std::uint64_t want_t = static_cast<std::uint64_t>(record.tick_index) * header.period_us();
    if (record.t_us != want_t) {
        throw NonContiguousTick("tick " + std::to_string(record.tick_index) +
                                " timestamp off the loop grid");
    }
    ticks.push_back(record);
}

void SessionTrace::record_event(const ArbitrationEvent& event) {
    if (!events.empty() && event.t_us < events.back().t_us) {
        throw Error("event timestamps must be non-decreasing");
    }
    events.push_back(event);
}

std::string event_kind_name(EventKind kind) {
    switch (kind) {
        case EventKind::GuidanceWarning: return "guidance_warning";
        case EventKind::GuidanceStart: return "guidance_start";
        case EventKind::GuidanceEnd: return "guidance_end";
    }
    return "unknown";
}

namespace {

EventKind event_kind_from(const std::string& name, std::size_t line) {
    if (name == "guidance_warning") return EventKind::GuidanceWarning;
    if (name == "guidance_start") return EventKind::GuidanceStart;
    if (name == "guidance_end") return EventKind::GuidanceEnd;
    throw CorruptRecord(line, "unknown event kind '" + name + "'");
}

json vec3_to_json(const Vec3& v) { return json::array({v.x, v.y, v.z}); }

Vec3 vec3_from_json(const json& j, std::size_t line) {
    if (!j.is_array() || j.size() != 3) {
        throw CorruptRecord(line, "expected [x, y, z]");
    }
    return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

template <class T>
json pair_to_json(const PerWheel<T>& p) {
    return json::array({p[0], p[1]});
}

PerWheel<double> pair_from_json(const json& j, std::size_t line) {
    if (!j.is_array() || j.size() != 2) {
        throw CorruptRecord(line, "expected a two-element array");
    }
    return {j[0].get<double>(), j[1].get<double>()};
}

json tick_to_json(const TickRecord& t) {
    json j;
    j["kind"] = "tick";
    j["tick"] = t.tick_index;
    j["t_us"] = t.t_us;
    j["sigma"] = t.sigma ? 1 : 0;
    j["preceptor_deg"] = pair_to_json(t.preceptor_deg);
    j["trainee_deg"] = pair_to_json(t.trainee_deg);
    j["motor_deg"] = pair_to_json(t.motor_deg);
    j["reference_deg"] = pair_to_json(t.reference_deg);
    j["torque_nmm"] = pair_to_json(t.torque_nmm);
    j["depth_m"] = t.depth_m;
    json trackers = json::array();
    for (const auto& p : t.trackers) {
        trackers.push_back(vec3_to_json(p));
    }
    j["trackers"] = trackers;
    return j;
}

TickRecord tick_from_json(const json& j, std::size_t line) {
    TickRecord t;
    t.tick_index = j.at("tick").get<std::int64_t>();
    t.t_us = j.at("t_us").get<std::uint64_t>();
    t.sigma = j.at("sigma").get<int>() != 0;
    t.preceptor_deg = pair_from_json(j.at("preceptor_deg"), line);
    t.trainee_deg = pair_from_json(j.at("trainee_deg"), line);
    t.motor_deg = pair_from_json(j.at("motor_deg"), line);
    t.reference_deg = pair_from_json(j.at("reference_deg"), line);
    t.torque_nmm = pair_from_json(j.at("torque_nmm"), line);
    t.depth_m = j.at("depth_m").get<double>();
    const json& trackers = j.at("trackers");
    if (!trackers.is_array() || trackers.size() != 4) {
        throw CorruptRecord(line, "trackers must hold exactly 4 sensors");
    }
    for (std::size_t k = 0; k < 4; ++k) {
        t.trackers[k] = vec3_from_json(trackers[k], line);
    }
    return t;
}

json event_to_json(const ArbitrationEvent& e) {
    json j;
    j["kind"] = "event";
    j["event"] = event_kind_name(e.kind);
    j["t_us"] = e.t_us;
    if (e.wheel) {
        j["wheel"] = static_cast<int>(index_of(*e.wheel)) + 1;
    }
    return j;
}

ArbitrationEvent event_from_json(const json& j, std::size_t line) {
    ArbitrationEvent e;
    e.kind = event_kind_from(j.at("event").get<std::string>(), line);
    e.t_us = j.at("t_us").get<std::uint64_t>();
    if (j.contains("wheel")) {
        const int w = j.at("wheel").get<int>();
        if (w != 1 && w != 2) {
            throw CorruptRecord(line, "wheel must be 1 or 2");
        }
        e.wheel = static_cast<WheelId>(w - 1);
    }
    return e;
}

}  // namespace

void write_trace(const SessionTrace& trace, std::ostream& out) {
    json header;
    header["kind"] = "header";
    header["schema_version"] = trace.header.schema_version;
    header["loop_rate_hz"] = trace.header.loop_rate_hz;
    header["scenario"] = trace.header.scenario;
    header["seed"] = trace.header.seed;
    header["colon_length_m"] = trace.header.colon_length_m;
    header["configs"] = trace.header.configs;
    out << header.dump() << '\n';

    // stable merge: each event follows the tick it happened on
    std::size_t e = 0;
    for (const auto& tick : trace.ticks) {
        out << tick_to_json(tick).dump() << '\n';
        while (e < trace.events.size() && trace.events[e].t_us <= tick.t_us) {
            out << event_to_json(trace.events[e]).dump() << '\n';
            ++e;
        }
    }
    for (; e < trace.events.size(); ++e) {
        out << event_to_json(trace.events[e]).dump() << '\n';
    }

    json outcome;
    outcome["kind"] = "outcome";
    outcome["completed"] = trace.outcome.completed;
    if (trace.outcome.completed) {
        outcome["completion_time_s"] = trace.outcome.completion_time_s;
    }
    out << outcome.dump() << '\n';
}

void write_trace(const SessionTrace& trace, const std::filesystem::path& file) {
    std::ofstream out(file, std::ios::binary);
    if (!out) {
        throw Error("cannot open trace for writing: " + file.string());
    }
    write_trace(trace, out);
}

SessionTrace read_trace(std::istream& in) {
    SessionTrace trace;
    std::string line;
    std::size_t lineno = 0;
    bool have_header = false;
    bool have_outcome = false;

    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) {
            continue;
        }
        json j;
        try {
            j = json::parse(line);
        } catch (const json::exception& ex) {
            throw CorruptRecord(lineno, ex.what());
        }
        try {
            const std::string kind = j.at("kind").get<std::string>();
            if (kind == "header") {
                if (have_header) {
                    throw CorruptRecord(lineno, "duplicate header");
                }
                trace.header.schema_version = j.at("schema_version").get<int>();
                if (trace.header.schema_version != kTraceSchemaVersion) {
                    throw SchemaMismatch("unsupported schema_version " +
                                         std::to_string(trace.header.schema_version));
                }
                trace.header.loop_rate_hz = j.at("loop_rate_hz").get<double>();
                trace.header.scenario = j.at("scenario").get<std::string>();
                trace.header.seed = j.at("seed").get<std::uint64_t>();
                trace.header.colon_length_m = j.at("colon_length_m").get<double>();
                trace.header.configs = j.at("configs");
                have_header = true;
            } else if (kind == "tick") {
                if (!have_header) {
                    throw CorruptRecord(lineno, "tick before header");
                }
                trace.record_tick(tick_from_json(j, lineno));
            } else if (kind == "event") {
                trace.record_event(event_from_json(j, lineno));
            } else if (kind == "outcome") {
                trace.outcome.completed = j.at("completed").get<bool>();
                trace.outcome.completion_time_s =
                    trace.outcome.completed ? j.at("completion_time_s").get<double>() : 0.0;
                have_outcome = true;
            } else {
                throw CorruptRecord(lineno, "unknown record kind '" + kind + "'");
            }
        } catch (const json::exception& ex) {
            throw CorruptRecord(lineno, ex.what());
        } catch (const NonContiguousTick& ex) {
            throw CorruptRecord(lineno, ex.what());
        }
    }
    if (!have_header) {
        throw CorruptRecord(lineno == 0 ? 1 : lineno, "stream ended before a header record");
    }
    if (!have_outcome) {
        throw CorruptRecord(lineno, "stream truncated: missing outcome record");
    }
    return trace;
}

SessionTrace read_trace(const std::filesystem::path& file) {
    std::ifstream in(file, std::ios::binary);
    if (!in) {
        throw Error("cannot open trace: " + file.string());
    }
    return read_trace(in);
}

std::vector<ReplayStep> replay(const SessionTrace& trace) {
    std::vector<ReplayStep> steps;
    steps.reserve(trace.ticks.size());
    std::size_t e = 0;
    for (const auto& tick : trace.ticks) {
        ReplayStep step;
        step.tick = &tick;
        while (e < trace.events.size() && trace.events[e].t_us <= tick.t_us) {
            step.events.push_back(&trace.events[e]);
            ++e;
        }
        steps.push_back(std::move(step));
    }
    // events past the last tick (none in well-formed traces) ride the last step
    for (; e < trace.events.size() && !steps.empty(); ++e) {
        steps.back().events.push_back(&trace.events[e]);
    }
    return steps;
}

}  // namespace tandem
