#pragma once

#include <charconv>
#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include "fraccd/config.hpp"
#include "fraccd/rng.hpp"

namespace fraccd {

struct TraceRecord {
    std::int64_t t;
    std::int64_t coord;
    double eta;
    double objective;
    double elapsed_s;
};

struct Trace {
    std::vector<TraceRecord> records;
    StopReason status = StopReason::IterBudget;
    std::string rng_id = kRngAlgorithmId;
    std::uint64_t seed = 0;
    std::int64_t iterations = 0;
    double final_objective = 0.0;
    double elapsed_s = 0.0;
};

namespace detail {
inline void append_double(std::string& s, double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    s.append(buf, res.ptr);
}
}  // namespace detail

inline void write_trace_csv(std::ostream& out, const Trace& trace, std::int64_t every = 1) {
    out << "# rng=" << trace.rng_id << " seed=" << trace.seed
        << " status=" << to_string(trace.status) << '\n';
    out << "t,coord,eta,F,elapsed_s\n";
    std::string line;
    for (const auto& r : trace.records) {
        if (every > 1 && r.t % every != 0) continue;
        line.clear();
        line += std::to_string(r.t);
        line += ',';
        line += std::to_string(r.coord);
        line += ',';
        detail::append_double(line, r.eta);
        line += ',';
        detail::append_double(line, r.objective);
        line += ',';
        detail::append_double(line, r.elapsed_s);
        line += '\n';
        out << line;
    }
}

}  // namespace fraccd
