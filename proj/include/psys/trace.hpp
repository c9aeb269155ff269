#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace psys {

struct TraceRow {
    std::uint64_t attempt = 0;
    std::string region;
    std::string object;
    std::uint64_t count = 0;

    friend bool operator==(const TraceRow&, const TraceRow&) = default;
};

struct Emission {
    std::uint64_t attempt = 0;
    std::string object;

    friend bool operator==(const Emission&, const Emission&) = default;
};

/// Time-indexed record of a run. "Time" is the global attempt counter.
struct Trace {
    std::vector<TraceRow> rows;
    std::vector<Emission> emitted;
    std::optional<std::uint64_t> halted_at;
    std::uint64_t attempts = 0;

    friend bool operator==(const Trace&, const Trace&) = default;
};

/// `attempt,region,object,count` with header. `preamble` lines are written
/// first, each prefixed with "# ".
void write_trace_rows(std::ostream& out, const Trace& trace, const std::vector<std::string>& preamble = {});

/// `attempt,emitted_object` with header.
void write_trace_emitted(std::ostream& out, const Trace& trace, const std::vector<std::string>& preamble = {});

}  // namespace psys
