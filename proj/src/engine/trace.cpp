#include "psys/trace.hpp"

namespace psys {

namespace {

void write_preamble(std::ostream& out, const std::vector<std::string>& preamble) {
    for (const auto& line : preamble) {
        out << "# " << line << '\n';
    }
}

}  // namespace

void write_trace_rows(std::ostream& out, const Trace& trace, const std::vector<std::string>& preamble) {
    write_preamble(out, preamble);
    out << "attempt,region,object,count\n";
    for (const auto& row : trace.rows) {
        out << row.attempt << ',' << row.region << ',' << row.object << ',' << row.count << '\n';
    }
}

void write_trace_emitted(std::ostream& out, const Trace& trace, const std::vector<std::string>& preamble) {
    write_preamble(out, preamble);
    out << "attempt,emitted_object\n";
    for (const auto& e : trace.emitted) {
        out << e.attempt << ',' << e.object << '\n';
    }
}

}  // namespace psys
