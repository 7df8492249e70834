#include <cmath>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "randgreedy/trifree.hpp"

using namespace randgreedy;

TEST_CASE("parameters") {
    const TriFreeParams p = make_trifree_params(4096, 0.05);
    const double L = std::log(4096.0);
    CHECK(p.sigma == doctest::Approx(1 / (L * L)));
    CHECK(p.p == doctest::Approx(p.sigma / 64));
    CHECK(p.rho == doctest::Approx(std::sqrt(0.05 * L / 4096)));
    CHECK(p.steps == static_cast<std::uint64_t>(std::ceil(std::pow(4096.0, 0.05))));
    CHECK(p.D_s == doctest::Approx(10800));
    CHECK(p.s == static_cast<std::uint64_t>(std::ceil(10800 * L / p.rho)));
    CHECK(p.s_exceeds_n);
    CHECK_THROWS_AS(make_trifree_params(3, 0.05), std::invalid_argument);
    CHECK_THROWS_AS(make_trifree_params(4096, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(make_trifree_params(4096, 1.0 / 14), std::invalid_argument);
    CHECK_THROWS_AS(make_trifree_params(1u << 17, 0.05), std::invalid_argument);
}

TEST_CASE("pi and q sequences") {
    const TriFreeParams p = make_trifree_params(1u << 16, 0.05);
    const PiQSequences seq = pi_q_sequences(p);
    REQUIRE(seq.pi.size() == p.steps + 1);
    REQUIRE(seq.q.size() == p.steps + 1);
    double pi = p.sigma, q = 1.0;
    for (std::uint64_t i = 0; i <= p.steps; ++i) {
        CHECK(seq.pi[i] == doctest::Approx(pi).epsilon(1e-12));
        CHECK(seq.q[i] == doctest::Approx(q).epsilon(1e-12));
        CHECK(seq.q[i] > 0.0);
        CHECK(seq.q[i] <= 1.0);
        if (i > 0) CHECK(seq.pi[i] > seq.pi[i - 1]);
        const double next_q = q * (1 - p.p) * std::exp(-2 * p.sigma * pi * q);
        pi += p.sigma * q;
        q = next_q;
    }
}

TEST_CASE("process invariants hold after every step") {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const TriFreeParams params = make_trifree_params(90, 0.07);
        TriFreeProcess proc(params, seed);
        CHECK(proc.open_count() == proc.pair_count());
        while (proc.step_index() < params.steps) {
            const std::uint64_t open_before = proc.open_count();
            const std::uint64_t t_before = proc.T().edge_count();
            const TriStepReport rep = proc.step();
            const Graph& E = proc.E();
            const Graph& T = proc.T();
            REQUIRE(is_triangle_free(T));
            for (auto [u, v] : T.edges()) REQUIRE(E.has_edge(u, v));
            CHECK(T.edge_count() - t_before == rep.sampled - rep.deleted);
            std::uint64_t open = 0;
            for (Vertex u = 0; u < params.n; ++u) {
                for (Vertex v = u + 1; v < params.n; ++v) {
                    if (!proc.is_open(u, v)) continue;
                    ++open;
                    REQUIRE_FALSE(E.has_edge(u, v));
                    REQUIRE(common_neighbors(E, u, v) == 0);
                }
            }
            CHECK(open == proc.open_count());
            CHECK(open_before - open == rep.sampled + rep.closed + rep.extra_removed);
        }
        CHECK_THROWS_AS(proc.step(), std::logic_error);
    }
}

TEST_CASE("cross-edge counts agree") {
    const TriFreeParams params = make_trifree_params(300, 0.07);
    TriFreeProcess proc(params, 3);
    while (proc.step_index() < params.steps) proc.step();
    Rng rng(4);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<Vertex> A, B;
        for (Vertex v = 0; v < 300; ++v) {
            const auto side = rng.below(3);
            if (side == 0) A.push_back(v);
            if (side == 1) B.push_back(v);
        }
        REQUIRE(cross_edges(proc.T(), A, B) == cross_edges_by_scan(proc.T(), A, B));
    }
}

TEST_CASE("runs are triangle-free, replayable and consistent") {
    const TriFreeParams params = make_trifree_params(1024, 0.05);
    TriMonitorConfig cfg;
    cfg.event_samples = 500;
    const TriFreeRun a = run_trifree(params, 7, cfg);
    const TriFreeRun b = run_trifree(params, 7, cfg);
    CHECK(a.always_triangle_free);
    CHECK(is_triangle_free(a.H));
    CHECK(a.H == b.H);
    REQUIRE(a.trajectory.size() == params.steps);
    CHECK(a.trajectory.back().T_edges == a.H.edge_count());
    CHECK(a.events.tplus_samples == 500);
    CHECK(a.events.tstar_vacuous);
    std::uint64_t sum = 0;
    for (const TriStepRecord& rec : a.trajectory) {
        CHECK(rec.triangle_checked);
        sum += rec.report.max_gamma_degree;
    }
    CHECK(a.events.gamma_degree_sum == sum);
    CHECK(graph_stats(a.H).max_degree <= sum);
}

TEST_CASE("JSON views carry the key fields") {
    const TriFreeParams params = make_trifree_params(256, 0.05);
    const nlohmann::json j = to_json(params);
    CHECK(j["n"] == 256);
    CHECK(j["steps"] == params.steps);
    const TriFreeRun run = run_trifree(params, 1, TriMonitorConfig{true, 10});
    CHECK(to_json(run.trajectory.front())["type"] == "step");
    CHECK(to_json(run.events).contains("tplusViolations"));
}
