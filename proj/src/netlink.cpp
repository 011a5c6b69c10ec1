#include "tandem/netlink.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>

#include <zlib.h>

namespace tandem {

namespace {

void put_u32(std::uint8_t* p, std::uint32_t v) {
    p[0] = static_cast<std::uint8_t>(v);
    p[1] = static_cast<std::uint8_t>(v >> 8);
    p[2] = static_cast<std::uint8_t>(v >> 16);
    p[3] = static_cast<std::uint8_t>(v >> 24);
}

void put_u64(std::uint8_t* p, std::uint64_t v) {
    for (int i = 0; i < 8; ++i) {
        p[i] = static_cast<std::uint8_t>(v >> (8 * i));
    }
}

std::uint32_t get_u32(const std::uint8_t* p) {
    return static_cast<std::uint32_t>(p[0]) | static_cast<std::uint32_t>(p[1]) << 8 |
           static_cast<std::uint32_t>(p[2]) << 16 | static_cast<std::uint32_t>(p[3]) << 24;
}

std::uint64_t get_u64(const std::uint8_t* p) {
    std::uint64_t v = 0;
    for (int i = 7; i >= 0; --i) {
        v = (v << 8) | p[i];
    }
    return v;
}

std::uint32_t frame_crc(const std::uint8_t* data) {
    return static_cast<std::uint32_t>(
        crc32(0L, reinterpret_cast<const Bytef*>(data), kFrameSize - 4));
}

std::int32_t to_centideg(AngleDeg deg) {
    const double cd = deg * 100.0;
    if (!std::isfinite(cd) || cd > 2147483647.0 || cd < -2147483648.0) {
        throw AngleOverflow("wheel angle " + std::to_string(deg) +
                            " deg does not fit the centidegree field");
    }
    return static_cast<std::int32_t>(std::llround(cd));
}

}  // namespace

FrameBytes encode_frame(const PerWheel<AngleDeg>& wheel_angles_deg, std::uint32_t seq,
                        std::uint64_t t_send_us, bool enable_switch) {
    FrameBytes b{};
    b[0] = kFrameMagic0;
    b[1] = kFrameMagic1;
    b[2] = kFrameVersion;
    put_u32(&b[3], seq);
    put_u64(&b[7], t_send_us);
    put_u32(&b[15], static_cast<std::uint32_t>(to_centideg(wheel_angles_deg[0])));
    put_u32(&b[19], static_cast<std::uint32_t>(to_centideg(wheel_angles_deg[1])));
    b[23] = enable_switch ? kFlagEnableSwitch : 0;
    put_u32(&b[24], frame_crc(b.data()));
    return b;
}

std::variant<Frame, DecodeError> decode_frame(const std::uint8_t* data, std::size_t size) {
    if (size != kFrameSize) {
        return DecodeError::BadLength;
    }
    if (data[0] != kFrameMagic0 || data[1] != kFrameMagic1) {
        return DecodeError::BadMagic;
    }
    if (data[2] != kFrameVersion) {
        return DecodeError::BadVersion;
    }
    if (get_u32(&data[24]) != frame_crc(data)) {
        return DecodeError::BadCrc;
    }
    Frame f;
    f.seq = get_u32(&data[3]);
    f.t_send_us = get_u64(&data[7]);
    f.wheel_centideg[0] = static_cast<std::int32_t>(get_u32(&data[15]));
    f.wheel_centideg[1] = static_cast<std::int32_t>(get_u32(&data[19]));
    f.enable_switch = (data[23] & kFlagEnableSwitch) != 0;
    return f;
}

bool rx_update(LinkState& link, const Frame& frame, std::uint64_t now_us) {
    if (static_cast<std::int64_t>(frame.seq) <= link.last_seq_accepted) {
        return false;
    }
    link.last_seq_accepted = frame.seq;
    link.last_frame = frame;
    link.last_rx_time_us = now_us;
    return true;
}

LinkHealth staleness_check(const LinkState& link, std::uint64_t now_us) {
    if (!link.last_frame) {
        return LinkHealth::Degraded;
    }
    return now_us - link.last_rx_time_us > link.staleness_timeout_us ? LinkHealth::Degraded
                                                                     : LinkHealth::Fresh;
}

void ChannelConfig::validate() const {
    if (!(loss_prob >= 0.0 && loss_prob <= 1.0) ||
        !(reorder_prob >= 0.0 && reorder_prob <= 1.0)) {
        throw ConfigError("channel probabilities must lie in [0, 1]");
    }
    if (!(jitter_std_ms >= 0.0) || !std::isfinite(jitter_mean_ms)) {
        throw ConfigError("channel jitter parameters must be finite, std >= 0");
    }
}

ChannelSim::ChannelSim(const ChannelConfig& cfg) : cfg_(cfg), rng_(cfg.seed) {
    cfg_.validate();
}

std::vector<Delivery> ChannelSim::offer(const Frame& frame, std::uint64_t now_us) {
    std::vector<Delivery> out;
    if (cfg_.loss_prob > 0.0 && rng_.uniform() < cfg_.loss_prob) {
        return out;
    }

    double delay_ms = 0.0;
    if (cfg_.jitter_mean_ms != 0.0 || cfg_.jitter_std_ms > 0.0) {
        delay_ms = std::max(0.0, rng_.gaussian(cfg_.jitter_mean_ms, cfg_.jitter_std_ms));
    }
    Delivery d{now_us + static_cast<std::uint64_t>(std::llround(delay_ms * 1000.0)), frame};

    if (cfg_.reorder_prob <= 0.0) {
        out.push_back(d);
        return out;
    }
    if (in_flight_ && rng_.uniform() < cfg_.reorder_prob) {
        std::swap(in_flight_->deliver_at_us, d.deliver_at_us);
    }
    if (in_flight_) {
        out.push_back(*in_flight_);
    }
    in_flight_ = d;
    return out;
}

std::vector<Delivery> ChannelSim::flush() {
    std::vector<Delivery> out;
    if (in_flight_) {
        out.push_back(*in_flight_);
        in_flight_.reset();
    }
    return out;
}

ScheduledFrameSource::ScheduledFrameSource(std::vector<Delivery> deliveries)
    : deliveries_(std::move(deliveries)) {
    std::stable_sort(deliveries_.begin(), deliveries_.end(),
                     [](const Delivery& a, const Delivery& b) {
                         return a.deliver_at_us < b.deliver_at_us;
                     });
}

void ScheduledFrameSource::poll(std::uint64_t now_us, std::vector<Frame>& out) {
    while (cursor_ < deliveries_.size() && deliveries_[cursor_].deliver_at_us <= now_us) {
        out.push_back(deliveries_[cursor_].frame);
        ++cursor_;
    }
}

}  // namespace tandem
