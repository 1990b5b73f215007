#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "ffpack/engine.hpp"

namespace ffpack {

// One line per applied event:
//
//   ARR <event_index> <clock> <type> <placement_start>
//   DEP <event_index> <clock> <item_id>
//
// Lines starting with '#' are comments.  Clocks are printed with enough
// digits to round-trip a double exactly.
struct TraceRecord {
    std::uint64_t event_index = 0;
    double clock = 0.0;
    Event::Kind kind = Event::Kind::Arrival;
    std::uint64_t type_or_id = 0;
    std::int64_t placement_start = -1;
};

std::string format_trace_line(const DeltaRecord& delta);

// Sink that appends every applied event to the stream.
DeltaSink make_trace_sink(std::ostream& out);

struct ReplayIssue {
    std::size_t line = 0;
    std::string message;
};

struct ReplayReport {
    std::uint64_t records = 0;
    std::uint64_t arrivals = 0;
    std::uint64_t departures = 0;
    std::vector<ReplayIssue> mismatches;
    std::vector<ReplayIssue> malformed;

    bool clean() const { return mismatches.empty() && malformed.empty(); }
};

// Re-executes the trace against a fresh configuration, recomputing every
// arrival placement by first fit.  A recorded placement_start that differs
// from the recomputed one is reported as a mismatch; the recomputed
// placement is the one applied, so a single edited line yields a single
// mismatch.  Malformed lines are reported and skipped.
ReplayReport replay_trace(std::istream& in);

ReplayReport replay_trace_file(const std::string& path);

}  // namespace ffpack
