#pragma once

#include <array>
#include <cstdint>
#include <mutex>
#include <optional>
#include <variant>
#include <vector>

#include "tandem/kinematics.hpp"
#include "tandem/rng.hpp"

namespace tandem {

// Preceptor->trainee datagram, fixed 28 bytes, little-endian:
//   magic 0x54 0x4C | version u8 | seq u32 | t_send_us u64 |
//   wheel1_centideg i32 | wheel2_centideg i32 | flags u8 | crc32 u32
// The CRC covers all prior bytes. Centidegrees keep the 0.02 deg onset
// threshold exactly representable (2 centideg).
inline constexpr std::size_t kFrameSize = 28;
inline constexpr std::uint8_t kFrameMagic0 = 0x54;
inline constexpr std::uint8_t kFrameMagic1 = 0x4C;
inline constexpr std::uint8_t kFrameVersion = 1;
inline constexpr std::uint8_t kFlagEnableSwitch = 0x01;

using FrameBytes = std::array<std::uint8_t, kFrameSize>;

struct Frame {
    std::uint32_t seq = 0;
    std::uint64_t t_send_us = 0;
    PerWheel<std::int32_t> wheel_centideg{{0, 0}};
    bool enable_switch = false;

    AngleDeg wheel_deg(WheelId w) const {
        return static_cast<double>(wheel_centideg[index_of(w)]) / 100.0;
    }

    bool operator==(const Frame&) const = default;
};

FrameBytes encode_frame(const PerWheel<AngleDeg>& wheel_angles_deg, std::uint32_t seq,
                        std::uint64_t t_send_us, bool enable_switch);

enum class DecodeError : std::uint8_t { BadMagic, BadVersion, BadLength, BadCrc };

std::variant<Frame, DecodeError> decode_frame(const std::uint8_t* data, std::size_t size);

inline std::variant<Frame, DecodeError> decode_frame(const FrameBytes& bytes) {
    return decode_frame(bytes.data(), bytes.size());
}

// Receiver-side hold-last-sample state. Duplicates and reordered (stale)
// frames are dropped; the control loop always reads the newest accepted
// frame, and a silent link degrades to "no guidance" via the enable gate.
struct LinkState {
    std::int64_t last_seq_accepted = -1;
    std::optional<Frame> last_frame;
    std::uint64_t last_rx_time_us = 0;
    std::uint64_t staleness_timeout_us = 100000;
};

// True iff the frame advances the sequence; updates hold-last state.
bool rx_update(LinkState& link, const Frame& frame, std::uint64_t now_us);

enum class LinkHealth : std::uint8_t { Fresh, Degraded };

// Degraded iff strictly more than the timeout has passed since the last
// accepted frame (a link that never delivered is degraded from the start).
LinkHealth staleness_check(const LinkState& link, std::uint64_t now_us);

// Deterministic channel impairment for tests and demos: i.i.d. loss,
// Gaussian delay, and optional swap with the previous in-flight frame.
struct ChannelConfig {
    double loss_prob = 0.0;
    double jitter_mean_ms = 0.0;
    double jitter_std_ms = 0.0;
    double reorder_prob = 0.0;
    std::uint64_t seed = 0;

    void validate() const;
};

struct Delivery {
    std::uint64_t deliver_at_us = 0;
    Frame frame;
};

class ChannelSim {
public:
    explicit ChannelSim(const ChannelConfig& cfg);

    // Offers one frame to the channel; returns the deliveries finalized by
    // this call (none if lost; a held frame may be released alongside).
    // With reorder enabled, frames pass through a one-slot delay line so a
    // reorder draw can swap delivery times with the previous in-flight frame.
    std::vector<Delivery> offer(const Frame& frame, std::uint64_t now_us);

    // Releases the held frame, if any. Call when the sender is done.
    std::vector<Delivery> flush();

private:
    ChannelConfig cfg_;
    DeterministicRng rng_;
    std::optional<Delivery> in_flight_;
};

// Single-slot latest-value mailbox between the receive path and the control
// loop: the writer overwrites, the reader snapshots.
class FrameMailbox {
public:
    void publish(const Frame& frame, std::uint64_t rx_time_us) {
        std::lock_guard<std::mutex> lock(mutex_);
        slot_ = Slot{frame, rx_time_us};
    }

    std::optional<std::pair<Frame, std::uint64_t>> snapshot() const {
        std::lock_guard<std::mutex> lock(mutex_);
        if (!slot_) {
            return std::nullopt;
        }
        return std::make_pair(slot_->frame, slot_->rx_time_us);
    }

private:
    struct Slot {
        Frame frame;
        std::uint64_t rx_time_us;
    };
    mutable std::mutex mutex_;
    std::optional<Slot> slot_;
};

// Where the tethered runner pulls its frames from each tick.
class FrameSource {
public:
    virtual ~FrameSource() = default;
    // Appends every frame that has arrived by virtual time now_us.
    virtual void poll(std::uint64_t now_us, std::vector<Frame>& out) = 0;
};

// FrameSource over a precomputed delivery schedule (virtual-time tests and
// loopback demos). Deliveries are replayed in (time, insertion) order.
class ScheduledFrameSource : public FrameSource {
public:
    explicit ScheduledFrameSource(std::vector<Delivery> deliveries);
    void poll(std::uint64_t now_us, std::vector<Frame>& out) override;

private:
    std::vector<Delivery> deliveries_;
    std::size_t cursor_ = 0;
};

}  // namespace tandem
