#pragma once

#include <map>

#include "tandem/scenario.hpp"

namespace tandem {

// Plays one scripted channel: moves run in order, each starting once its
// anchor is satisfied and the previous move is done, ramping linearly from
// the current value to the move's target.
class ScriptPlayer {
public:
    explicit ScriptPlayer(const ScriptChannel& channel)
        : channel_(channel), value_(channel.initial) {}

    // Resolves pending event anchors; evaluation time for an anchored move is
    // the event time plus its delay.
    void on_event(EventKind kind, double t_s) {
        for (std::size_t k = next_; k < channel_.moves.size(); ++k) {
            auto& resolved = resolved_[k];
            const auto& anchor = channel_.moves[k].anchor;
            if (anchor.by_event && anchor.event == kind && !resolved) {
                resolved = t_s + anchor.delay_s;
            }
        }
    }

    // Sample the channel; call with non-decreasing t.
    double value_at(double t_s) {
        for (;;) {
            if (active_) {
                const auto& m = channel_.moves[next_ - 1];
                if (m.duration_s <= 0.0 || t_s >= start_t_ + m.duration_s) {
                    value_ = m.target;
                    active_ = false;
                } else if (t_s <= start_t_) {
                    return start_value_;
                } else {
                    return start_value_ +
                           (m.target - start_value_) * (t_s - start_t_) / m.duration_s;
                }
            }
            if (next_ >= channel_.moves.size()) {
                return value_;
            }
            const auto& m = channel_.moves[next_];
            double anchor_t = 0.0;
            if (m.anchor.by_event) {
                const auto it = resolved_.find(next_);
                if (it == resolved_.end()) {
                    return value_;  // event not seen yet
                }
                anchor_t = it->second;
            } else {
                anchor_t = m.anchor.at_s;
            }
            if (t_s < anchor_t) {
                return value_;
            }
            start_t_ = anchor_t;
            start_value_ = value_;
            active_ = true;
            ++next_;
        }
    }

private:
    const ScriptChannel& channel_;
    double value_;
    std::size_t next_ = 0;
    bool active_ = false;
    double start_t_ = 0.0;
    double start_value_ = 0.0;
    std::map<std::size_t, double> resolved_;
};

}  // namespace tandem
