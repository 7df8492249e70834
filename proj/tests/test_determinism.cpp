#include <string>

#include "doctest.h"
#include "randgreedy/config.hpp"
#include "randgreedy/io.hpp"
#include "randgreedy/runner.hpp"
#include "reference_digests.hpp"

using namespace randgreedy;

TEST_CASE("AP-free transcripts are byte-identical and pinned") {
    RunConfig cfg;
    cfg.set("N", "1009");
    const ApfreeOutcome a = run_apfree(cfg, 7);
    const ApfreeOutcome b = run_apfree(cfg, 7);
    CHECK(a.transcript == b.transcript);
    CHECK(a.residues == b.residues);
    CHECK(run_apfree(cfg, 8).transcript != a.transcript);
    MESSAGE("apfree transcript digest " << fnv1a64(a.transcript) << " residues digest " << fnv1a64(a.residues));
    CHECK(fnv1a64(a.transcript) == APFREE_TRANSCRIPT_DIGEST);
    CHECK(fnv1a64(a.residues) == APFREE_RESIDUES_DIGEST);
}

TEST_CASE("triangle-free outputs are byte-identical and pinned") {
    RunConfig cfg;
    cfg.set("n", "1024");
    cfg.set("event_samples", "200");
    const TrifreeOutcome a = run_trifree(cfg, 3);
    const TrifreeOutcome b = run_trifree(cfg, 3);
    CHECK(a.trajectory == b.trajectory);
    CHECK(a.graph == b.graph);
    MESSAGE("trifree graph digest " << fnv1a64(a.graph) << " trajectory digest " << fnv1a64(a.trajectory));
    CHECK(fnv1a64(a.graph) == TRIFREE_GRAPH_DIGEST);
    CHECK(fnv1a64(a.trajectory) == TRIFREE_TRAJECTORY_DIGEST);
}
