#pragma once

#include <functional>

#include "tandem/netlink.hpp"
#include "tandem/scenario.hpp"
#include "tandem/session.hpp"

namespace tandem {

// Called once per tick with the tick's virtual time; live demos use it to
// pace the loop against the wall clock. Null means free-running.
using TickPacer = std::function<void(std::uint64_t t_us)>;

// Fixed stage order per tick:
//   ingest -> arbitrate -> reference -> pid -> plant -> trigger-check -> record
// Virtual time advances exactly one loop period per tick; identical scenario
// and seed give a byte-identical serialized trace.
SessionTrace run(const Scenario& scenario, const TickPacer& pacer = {});

// As run, but the preceptor side arrives as frames: the ingest stage drains
// the source, applies sequence filtering, and holds the last accepted frame.
// A stale link (no accepted frame within the timeout) forces the enable
// switch off for that tick, so sigma falls back to 0 through the normal exit
// path.
SessionTrace run_tethered(const Scenario& scenario, FrameSource& source,
                          const TickPacer& pacer = {});

// Should-stop callback checked each tick (endpoint shutdown on SIGINT).
using StopFlag = std::function<bool()>;

SessionTrace run_tethered(const Scenario& scenario, FrameSource& source, const TickPacer& pacer,
                          const StopFlag& stop);

}  // namespace tandem
