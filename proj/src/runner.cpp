#include "tandem/runner.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "tandem/colon.hpp"
#include "tandem/plant.hpp"
#include "tandem/script.hpp"

namespace tandem {

namespace {

ColonModel build_colon(const Scenario& sc) {
    if (sc.colon_file) {
        return ColonModel::load(*sc.colon_file);
    }
    return ColonModel::normal_loop();
}

SessionTrace run_loop(const Scenario& sc, FrameSource* source, const TickPacer& pacer,
                      const StopFlag& stop) {
    sc.validate();
    const ColonModel colon = build_colon(sc);
    const double dt = sc.dt_s();
    const std::uint64_t period_us = static_cast<std::uint64_t>(std::llround(dt * 1e6));

    SessionTrace trace;
    trace.header.loop_rate_hz = sc.loop_rate_hz;
    trace.header.scenario = sc.name;
    trace.header.seed = sc.seed;
    trace.header.colon_length_m = colon.length_m();
    trace.header.configs = sc.to_json();
    trace.header.validate();

    DeterministicRng rng(sc.seed);
    PlantState plant;
    {
        const auto pose = tip_pose(plant.wheel_angle_deg, 0.0, colon, sc.plant);
        plant.tip_position = pose.position;
        plant.tip_tangent = pose.tangent;
    }
    ArbitrationState arb;
    PerWheel<PidState> pid{{PidState{}, PidState{}}};

    ScriptPlayer enable_player(sc.enable);
    PerWheel<ScriptPlayer> wheel_players{{ScriptPlayer(sc.preceptor_wheels[0]),
                                           ScriptPlayer(sc.preceptor_wheels[1])}};
    PerWheel<ScriptPlayer> torque_players{{ScriptPlayer(sc.trainee_torques[0]),
                                            ScriptPlayer(sc.trainee_torques[1])}};
    ScriptPlayer push_player(sc.push);
    const auto broadcast_event = [&](const ArbitrationEvent& ev) {
        const double t_s = static_cast<double>(ev.t_us) / 1e6;
        enable_player.on_event(ev.kind, t_s);
        for (auto& p : wheel_players) {
            p.on_event(ev.kind, t_s);
        }
        for (auto& p : torque_players) {
            p.on_event(ev.kind, t_s);
        }
        push_player.on_event(ev.kind, t_s);
    };

    LinkState link;
    link.staleness_timeout_us = sc.staleness_timeout_us;
    std::vector<Frame> arrivals;

    const std::int64_t total_ticks = sc.tick_count();

    try {
        for (std::int64_t i = 0; i < total_ticks; ++i) {
            if (stop && stop()) {
                break;
            }
            const std::uint64_t t_us = static_cast<std::uint64_t>(i) * period_us;
            const double t_s = static_cast<double>(i) * dt;
            if (pacer) {
                pacer(t_us);
            }

            // ingest
            WheelReading reading;
            if (source) {
                arrivals.clear();
                source->poll(t_us, arrivals);
                for (const Frame& f : arrivals) {
                    rx_update(link, f, t_us);
                }
                const bool fresh = staleness_check(link, t_us) == LinkHealth::Fresh;
                if (link.last_frame) {
                    reading.angles_deg = {link.last_frame->wheel_deg(WheelId::Wheel1),
                                          link.last_frame->wheel_deg(WheelId::Wheel2)};
                    reading.enable_switch = link.last_frame->enable_switch && fresh;
                }
            } else {
                for (std::size_t w = 0; w < kWheelCount; ++w) {
                    const double raw = wheel_players[w].value_at(t_s);
                    reading.angles_deg[w] =
                        counts_to_angle(quantize_angle(raw, sc.encoder), sc.encoder);
                }
                reading.enable_switch = enable_player.value_at(t_s) >= 0.5;
            }

            // arbitrate
            const auto arb_out = arbitrate(arb, i, t_us, reading, plant.motor_pos_deg,
                                           sc.arbitration);
            if (arb_out.transitioned) {
                for (auto& p : pid) {
                    on_mode_transition(p);
                }
            }
            std::vector<ArbitrationEvent> tick_events = arb_out.events;

            // reference + pid
            PerWheel<AngleDeg> references{};
            PerWheel<double> torques{};
            for (std::size_t w = 0; w < kWheelCount; ++w) {
                if (arb_out.sigma) {
                    references[w] = guidance_reference(*arb.latches[w], reading.angles_deg[w],
                                                       sc.gears[w]);
                } else {
                    references[w] = compliance_reference(plant.motor_pos_deg[w]);
                }
                const double error = references[w] - plant.motor_pos_deg[w];
                double torque = pid_step(pid[w], error, dt, select_gains(arb_out.sigma, sc.gains),
                                         sc.pid);
                if (sc.pid.friction_feedforward_nmm != 0.0) {
                    const double v = plant.motor_vel_deg_s[w];
                    torque += sc.pid.friction_feedforward_nmm * (v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0));
                }
                torques[w] = torque;
            }

            // plant
            const PerWheel<double> hand{{torque_players[0].value_at(t_s),
                                         torque_players[1].value_at(t_s)}};
            plant_step(plant, torques, hand, dt, sc.gears, sc.plant);

            double advancement = 0.0;
            if (!trace.outcome.completed) {
                const auto pose = tip_pose(plant.wheel_angle_deg, plant.insertion_depth_m, colon,
                                           sc.plant);
                advancement = advancement_step(pose.tangent,
                                               colon.tangent_at(plant.insertion_depth_m),
                                               std::clamp(push_player.value_at(t_s), 0.0, 1.0),
                                               dt, sc.plant);
                plant.insertion_depth_m =
                    std::min(plant.insertion_depth_m + advancement, colon.length_m());
            }
            {
                const auto pose = tip_pose(plant.wheel_angle_deg, plant.insertion_depth_m, colon,
                                           sc.plant);
                plant.tip_position = pose.position;
                plant.tip_tangent = pose.tangent;
            }

            // trigger-check (idle once the procedure is complete)
            if (!trace.outcome.completed) {
                const auto up = guidance_trigger_check(arb.stall_clock_s, advancement, dt,
                                                       sc.arbitration);
                arb.stall_clock_s = up.stall_clock_s;
                if (up.stall_clock_s == 0.0) {
                    arb.warning_active = false;
                }
                if (up.warning) {
                    arb.warning_active = true;
                    tick_events.push_back({EventKind::GuidanceWarning, t_us, std::nullopt});
                }
            }
            for (const auto& ev : tick_events) {
                trace.record_event(ev);
                broadcast_event(ev);
            }

            // record
            TickRecord rec;
            rec.tick_index = i;
            rec.t_us = t_us;
            rec.sigma = arb_out.sigma;
            rec.preceptor_deg = reading.angles_deg;
            rec.trainee_deg = plant.wheel_angle_deg;
            rec.motor_deg = plant.motor_pos_deg;
            rec.reference_deg = references;
            rec.torque_nmm = torques;
            rec.depth_m = plant.insertion_depth_m;
            const auto sample = tracker_sample(plant, t_s, colon, sc.plant, rng);
            rec.trackers = sample.positions;
            trace.record_tick(rec);

            if (!trace.outcome.completed && plant.insertion_depth_m >= colon.length_m()) {
                trace.outcome.completed = true;
                trace.outcome.completion_time_s = t_s;
                if (sc.run_to_completion) {
                    break;
                }
            }
        }
    } catch (const Error& ex) {
        throw Error("tick " + std::to_string(trace.ticks.size()) + ": " + ex.what());
    }
    return trace;
}

}  // namespace

SessionTrace run(const Scenario& scenario, const TickPacer& pacer) {
    return run_loop(scenario, nullptr, pacer, {});
}

SessionTrace run_tethered(const Scenario& scenario, FrameSource& source, const TickPacer& pacer) {
    return run_loop(scenario, &source, pacer, {});
}

SessionTrace run_tethered(const Scenario& scenario, FrameSource& source, const TickPacer& pacer,
                          const StopFlag& stop) {
    return run_loop(scenario, &source, pacer, stop);
}

}  // namespace tandem
