#include <cmath>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "randgreedy/bipartite.hpp"
#include "randgreedy/rng.hpp"

using namespace randgreedy;

namespace {

Graph cycle(Vertex n) {
    std::vector<Edge> e;
    for (Vertex i = 0; i < n; ++i) e.emplace_back(i, (i + 1) % n);
    return Graph::from_edges(n, e);
}

Graph random_graph(Vertex n, double p, Rng& rng) {
    std::vector<Edge> edges;
    for (Vertex u = 0; u < n; ++u)
        for (Vertex v = u + 1; v < n; ++v)
            if (rng.bernoulli(p)) edges.emplace_back(u, v);
    return Graph::from_edges(n, edges);
}

// Max over bipartite induced subgraphs of the min degree, by plain subset
// enumeration with a stack-based 2-coloring on an adjacency matrix.
std::uint32_t brute_value(const Graph& g) {
    const Vertex n = g.n();
    std::vector<std::vector<bool>> adj(n, std::vector<bool>(n, false));
    for (auto [u, v] : g.edges()) adj[u][v] = adj[v][u] = true;
    std::uint32_t best = 0;
    for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
        std::vector<int> side(n, -1);
        bool ok = true;
        for (Vertex s = 0; s < n && ok; ++s) {
            if (!((mask >> s) & 1) || side[s] >= 0) continue;
            side[s] = 0;
            std::vector<Vertex> stack{s};
            while (!stack.empty() && ok) {
                const Vertex x = stack.back();
                stack.pop_back();
                for (Vertex y = 0; y < n; ++y) {
                    if (!((mask >> y) & 1) || !adj[x][y]) continue;
                    if (side[y] < 0) {
                        side[y] = 1 - side[x];
                        stack.push_back(y);
                    } else if (side[y] == side[x]) {
                        ok = false;
                    }
                }
            }
        }
        if (!ok) continue;
        std::uint32_t lo = UINT32_MAX;
        for (Vertex x = 0; x < n; ++x) {
            if (!((mask >> x) & 1)) continue;
            std::uint32_t d = 0;
            for (Vertex y = 0; y < n; ++y) d += ((mask >> y) & 1) && adj[x][y];
            lo = std::min(lo, d);
        }
        best = std::max(best, lo);
    }
    return best;
}

}  // namespace

TEST_CASE("pruning") {
    const Graph star = Graph::from_edges(6, std::vector<Edge>{{0, 1}, {0, 2}, {0, 3}, {0, 4}, {0, 5}});
    const PrunedGraph p = prune_min_degree(star, 1);
    CHECK(p.graph.n() == 0);
    CHECK(p.kept.empty());
    const PrunedGraph c = prune_min_degree(cycle(6), 1);
    CHECK(c.graph == cycle(6));
    CHECK(c.kept == std::vector<Vertex>{0, 1, 2, 3, 4, 5});

    Rng rng(1);
    for (int trial = 0; trial < 50; ++trial) {
        const Graph g = random_graph(40, 0.1, rng);
        const PrunedGraph q = prune_min_degree(g, 2.5);
        for (Vertex v = 0; v < q.graph.n(); ++v) CHECK(q.graph.degree(v) > 2.5);
        CHECK(q.graph == g.induced(q.kept));
    }
}

TEST_CASE("blow-up and disjoint union") {
    const Graph e = Graph::from_edges(2, std::vector<Edge>{{0, 1}});
    const Graph k23 = blow_up(e, std::vector<std::uint32_t>{2, 3});
    CHECK(k23.n() == 5);
    CHECK(k23.edge_count() == 6);
    CHECK_FALSE(k23.has_edge(0, 1));
    CHECK(k23.has_edge(1, 4));

    const Graph c5 = cycle(5);
    CHECK(blow_up(c5, std::vector<std::uint32_t>(5, 1)) == c5);
    const Graph b = blow_up(c5, std::vector<std::uint32_t>(5, 2));
    CHECK(b.n() == 10);
    CHECK(is_triangle_free(b));
    for (Vertex v = 0; v < 10; ++v) CHECK(b.degree(v) == 4);
    CHECK_THROWS_AS(blow_up(c5, std::vector<std::uint32_t>{1, 1, 0, 1, 1}), std::invalid_argument);
    CHECK_THROWS_AS(blow_up(c5, std::vector<std::uint32_t>{1, 1}), std::invalid_argument);

    CHECK(disjoint_union(c5, 1) == c5);
    const Graph u = disjoint_union(c5, 3);
    CHECK(u.n() == 15);
    CHECK(u.edge_count() == 15);
    CHECK(is_triangle_free(u));
    CHECK_THROWS_AS(disjoint_union(c5, 0), std::invalid_argument);
}

TEST_CASE("exact bipartite min degree") {
    // Frozen from tests/oracles/oracles.py.
    CHECK(exact_max_bipartite_min_degree(cycle(5)).value == 1);
    CHECK(exact_max_bipartite_min_degree(cycle(6)).value == 2);
    CHECK(exact_max_bipartite_min_degree(cycle(7)).value == 1);
    CHECK(exact_max_bipartite_min_degree(Graph::from_edges(2, std::vector<Edge>{{0, 1}})).value == 1);
    std::vector<Edge> pet;
    for (Vertex i = 0; i < 5; ++i) {
        pet.emplace_back(i, (i + 1) % 5);
        pet.emplace_back(i, i + 5);
        pet.emplace_back(5 + i, 5 + (i + 2) % 5);
    }
    const BipartiteWitness w = exact_max_bipartite_min_degree(Graph::from_edges(10, pet));
    CHECK(w.value == 2);
    const Graph petersen = Graph::from_edges(10, pet);
    CHECK(induces_bipartite(petersen, w.vertices));
    CHECK(induced_min_degree(petersen, w.vertices) == 2);
    CHECK_THROWS_AS(exact_max_bipartite_min_degree(Graph(21)), std::invalid_argument);
}

TEST_CASE("exact oracle matches an independent enumeration") {
    Rng rng(2);
    for (int trial = 0; trial < 150; ++trial) {
        const Vertex n = 1 + static_cast<Vertex>(rng.below(10));
        const Graph g = random_graph(n, 0.2 + 0.5 * rng.uniform01(), rng);
        const BipartiteWitness w = exact_max_bipartite_min_degree(g);
        REQUIRE(w.value == brute_value(g));
        REQUIRE(induces_bipartite(g, w.vertices));
        REQUIRE(induced_min_degree(g, w.vertices) == w.value);
    }
}

TEST_CASE("heuristic never beats the exact value and returns a valid witness") {
    Rng rng(3);
    for (int trial = 0; trial < 150; ++trial) {
        const Vertex n = 2 + static_cast<Vertex>(rng.below(13));
        const Graph g = random_graph(n, 0.2 + 0.5 * rng.uniform01(), rng);
        const BipartiteWitness h = heuristic_bipartite_min_degree(g, 4, trial);
        REQUIRE(h.value <= exact_max_bipartite_min_degree(g).value);
        if (!h.vertices.empty()) {
            REQUIRE(induces_bipartite(g, h.vertices));
            REQUIRE(induced_min_degree(g, h.vertices) == h.value);
        }
    }
    CHECK(heuristic_bipartite_min_degree(cycle(8), 4, 1).value == 2);
}

TEST_CASE("g(n,d) witnesses from the Cayley source") {
    const GraphSource source = cayley_source(20.0, 0.01);
    GndOptions opts;
    opts.mode = GndMode::measured;
    for (std::uint64_t d : {80ull, 120ull, 200ull, 280ull}) {
        CAPTURE(d);
        const GndWitness w = build_gnd_witness(5000, d, source, opts);
        const double split = w.constants.A * std::sqrt(5000 * std::log(5000.0));
        CHECK(w.gnd_case == (static_cast<double>(d) <= split ? GndCase::smallD : GndCase::largeD));
        REQUIRE(w.built);
        CHECK(w.verified());
        CHECK(w.graph.n() == 5000);
        CHECK(is_triangle_free(w.graph));
        CHECK(graph_stats(w.graph).min_degree >= d);
        CHECK(w.links.back().name == "delta(G_{n,d}) >= d");
        CHECK(w.links.back().holds);
    }
    CHECK_THROWS_AS(build_gnd_witness(5000, 50, source, opts), std::invalid_argument);
    CHECK_THROWS_AS(build_gnd_witness(5000, 300, source, opts), std::invalid_argument);
    CHECK(parse_gnd_mode(to_string(GndMode::measured)) == GndMode::measured);
}

TEST_CASE("asymptotic constants at desk scale name the failing link") {
    const GndWitness w = build_gnd_witness(5000, 100, trifree_source(0.01, 1), GndOptions{});
    if (!w.verified()) CHECK_FALSE(w.failing_link().empty());
    const nlohmann::json j = to_json(w);
    CHECK(j.contains("failingLink"));
    CHECK(j["n"] == 5000);
}
