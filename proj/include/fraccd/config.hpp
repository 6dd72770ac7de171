#pragma once

#include <cstdint>
#include <string>

#include "fraccd/errors.hpp"

namespace fraccd {

enum class Method { Fcd, Pcd };
enum class Rule { Cyclic, Random, Greedy };
enum class StopReason { Converged, IterBudget, TimeBudget };

inline const char* to_string(Method m) { return m == Method::Fcd ? "fcd" : "pcd"; }
inline const char* to_string(Rule r) {
    switch (r) {
        case Rule::Cyclic: return "cyclic";
        case Rule::Random: return "random";
        default: return "greedy";
    }
}
inline const char* to_string(StopReason s) {
    switch (s) {
        case StopReason::Converged: return "converged";
        case StopReason::IterBudget: return "iter-budget";
        default: return "time-budget";
    }
}

struct SolverConfig {
    Method method = Method::Pcd;
    Rule rule = Rule::Cyclic;
    double theta = 1e-6;        // proximal weight; the sufficient-decrease margin
    double eps = 1e-10;         // stopping threshold on the windowed mean of w_t
    std::int64_t window = 500;  // stopping window length
    double max_time_s = 100.0;
    std::int64_t max_iters = 1'000'000;
    std::uint64_t seed = 0;
    double greedy_lipschitz = 0.0;  // full-gradient Lipschitz constant, greedy rule only
    bool verify = false;            // per-iteration descent-lemma assertions
    std::int64_t trace_every = 1;
    std::int64_t refresh_every = 10'000;  // full cache recomputation cadence

    void validate() const {
        if (!(theta > 0.0)) throw ConfigError("theta must be positive");
        if (!(eps > 0.0)) throw ConfigError("eps must be positive");
        if (window < 1) throw ConfigError("window must be >= 1");
        if (max_iters < 0) throw ConfigError("max_iters must be nonnegative");
        if (rule == Rule::Greedy && !(greedy_lipschitz > 0.0))
            throw ConfigError("greedy rule needs a positive Lipschitz constant");
        if (trace_every < 1) throw ConfigError("trace_every must be >= 1");
    }
};

}  // namespace fraccd
