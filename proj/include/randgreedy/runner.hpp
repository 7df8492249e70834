#pragma once

#include <cstdint>
#include <string>

#include "json.hpp"
#include "randgreedy/apfree.hpp"
#include "randgreedy/config.hpp"
#include "randgreedy/dem.hpp"
#include "randgreedy/trifree.hpp"

namespace randgreedy {

/// One seeded AP-free run as configured, with its serialized outputs.
struct ApfreeOutcome {
    APParams params;
    BandContext bands;
    RunResult result;
    HittingReport hitting;
    RunSummaryRow summary;
    std::string transcript;  // JSON lines: header, checkpoints, summary
    std::string residues;    // I-file
};

/// Uses keys N, r, xi, delta, mode, checkpoint_every, tracked_k, sampled_v,
/// monitor, hitting_samples and k (0 = the process's own k).
ApfreeOutcome run_apfree(const RunConfig& cfg, std::uint64_t seed);

struct TrifreeOutcome {
    TriFreeParams params;
    TriFreeRun run;
    GraphStats stats;
    nlohmann::json summary;
    std::string trajectory;  // JSON lines: header, steps
    std::string graph;       // edge list with header
};

/// Uses keys n, beta, check_triangles and event_samples.
TrifreeOutcome run_trifree(const RunConfig& cfg, std::uint64_t seed);

}  // namespace randgreedy
