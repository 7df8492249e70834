#include "randgreedy/bipartite.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <queue>
#include <stdexcept>

#include "randgreedy/rng.hpp"
#include "randgreedy/trifree.hpp"

namespace randgreedy {

PrunedGraph prune_min_degree(const Graph& g, double threshold) {
    const Vertex n = g.n();
    std::vector<std::uint32_t> degree(n);
    std::vector<std::uint8_t> removed(n, 0);
    std::vector<Vertex> queue;
    for (Vertex v = 0; v < n; ++v) {
        degree[v] = g.degree(v);
        if (degree[v] <= threshold) {
            removed[v] = 1;
            queue.push_back(v);
        }
    }
    while (!queue.empty()) {
        const Vertex v = queue.back();
        queue.pop_back();
        for (Vertex w : g.neighbors(v)) {
            if (removed[w]) continue;
            if (--degree[w] <= threshold) {
                removed[w] = 1;
                queue.push_back(w);
            }
        }
    }
    PrunedGraph out;
    for (Vertex v = 0; v < n; ++v) {
        if (!removed[v]) out.kept.push_back(v);
    }
    out.graph = g.induced(out.kept);
    return out;
}

Graph blow_up(const Graph& g, std::span<const std::uint32_t> sizes) {
    if (sizes.size() != g.n()) throw std::invalid_argument("blow_up: need one size per vertex");
    std::vector<std::uint64_t> offset(g.n() + 1, 0);
    for (Vertex v = 0; v < g.n(); ++v) {
        if (sizes[v] == 0) throw std::invalid_argument("blow_up: sizes must be positive");
        offset[v + 1] = offset[v] + sizes[v];
    }
    if (offset.back() > UINT32_MAX) throw std::invalid_argument("blow_up: result too large");
    std::vector<std::vector<Vertex>> adj(offset.back());
    for (Vertex v = 0; v < g.n(); ++v) {
        std::vector<Vertex> row;
        for (Vertex u : g.neighbors(v)) {
            for (std::uint64_t x = offset[u]; x < offset[u + 1]; ++x) row.push_back(static_cast<Vertex>(x));
        }
        for (std::uint64_t x = offset[v]; x < offset[v + 1]; ++x) adj[x] = row;
    }
    return Graph::from_sorted_adjacency(std::move(adj));
}

Graph disjoint_union(const Graph& g, std::uint32_t copies) {
    if (copies == 0) throw std::invalid_argument("disjoint_union: copies must be at least 1");
    const std::uint64_t n = g.n();
    if (n * copies > UINT32_MAX) throw std::invalid_argument("disjoint_union: result too large");
    std::vector<std::vector<Vertex>> adj(n * copies);
    for (std::uint64_t c = 0; c < copies; ++c) {
        for (Vertex v = 0; v < n; ++v) {
            auto& row = adj[c * n + v];
            for (Vertex u : g.neighbors(v)) row.push_back(static_cast<Vertex>(c * n + u));
        }
    }
    return Graph::from_sorted_adjacency(std::move(adj));
}

BipartiteWitness exact_max_bipartite_min_degree(const Graph& g) {
    const Vertex n = g.n();
    if (n > kExactBipartiteLimit) {
        throw std::invalid_argument("exact_max_bipartite_min_degree: n=" + std::to_string(n) + " exceeds " +
                                    std::to_string(kExactBipartiteLimit) + "; use the heuristic");
    }
    BipartiteWitness best;
    if (n == 0) return best;
    std::vector<std::uint32_t> adj(n, 0);
    for (Vertex v = 0; v < n; ++v) {
        for (Vertex u : g.neighbors(v)) adj[v] |= 1u << u;
    }

    auto bipartite = [&](std::uint32_t mask) {
        std::uint32_t side[2] = {0, 0};
        std::uint32_t visited = 0;
        while (mask & ~visited) {
            std::uint32_t frontier = (mask & ~visited) & (0u - (mask & ~visited));
            visited |= frontier;
            int parity = 0;
            side[0] |= frontier;
            while (frontier) {
                std::uint32_t reach = 0;
                for (std::uint32_t f = frontier; f; f &= f - 1) reach |= adj[std::countr_zero(f)];
                reach &= mask;
                if (reach & side[parity]) return false;
                frontier = reach & ~visited;
                visited |= frontier;
                parity ^= 1;
                side[parity] |= frontier;
            }
        }
        return true;
    };

    std::int64_t best_value = -1;
    std::uint32_t best_mask = 0;
    const std::uint32_t limit = n == 32 ? 0xffffffffu : (1u << n) - 1;
    for (std::uint32_t mask = 1; mask != 0 && mask <= limit; ++mask) {
        std::int64_t min_deg = INT64_MAX;
        for (std::uint32_t m = mask; m; m &= m - 1) {
            min_deg = std::min<std::int64_t>(min_deg, std::popcount(adj[std::countr_zero(m)] & mask));
            if (min_deg <= best_value) break;
        }
        if (min_deg <= best_value || !bipartite(mask)) continue;
        best_value = min_deg;
        best_mask = mask;
    }
    best.value = static_cast<std::uint32_t>(best_value);
    for (std::uint32_t m = best_mask; m; m &= m - 1) best.vertices.push_back(static_cast<Vertex>(std::countr_zero(m)));
    return best;
}

namespace {

// Peels minimum-degree vertices of G[kept] and returns the snapshot with the
// largest minimum degree.
BipartiteWitness best_core(const Graph& g, const std::vector<Vertex>& kept) {
    BipartiteWitness out;
    if (kept.empty()) return out;
    std::vector<std::uint8_t> alive(g.n(), 0);
    for (Vertex v : kept) alive[v] = 1;
    std::vector<std::uint32_t> degree(g.n(), 0);
    using Item = std::pair<std::uint32_t, Vertex>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
    for (Vertex v : kept) {
        for (Vertex w : g.neighbors(v)) degree[v] += alive[w];
        heap.push({degree[v], v});
    }
    std::vector<Vertex> order;
    order.reserve(kept.size());
    std::int64_t best = -1;
    std::size_t best_removed = 0;
    while (!heap.empty()) {
        const auto [d, v] = heap.top();
        heap.pop();
        if (!alive[v] || d != degree[v]) continue;
        if (static_cast<std::int64_t>(d) > best) {
            best = d;
            best_removed = order.size();
        }
        alive[v] = 0;
        order.push_back(v);
        for (Vertex w : g.neighbors(v)) {
            if (alive[w]) heap.push({--degree[w], w});
        }
    }
    out.value = static_cast<std::uint32_t>(best);
    out.vertices.assign(order.begin() + static_cast<std::ptrdiff_t>(best_removed), order.end());
    std::sort(out.vertices.begin(), out.vertices.end());
    return out;
}

}  // namespace

BipartiteWitness heuristic_bipartite_min_degree(const Graph& g, std::uint32_t tries, std::uint64_t seed) {
    BipartiteWitness best;
    const Vertex n = g.n();
    if (n == 0) return best;
    best.vertices = {0};
    Rng rng(seed);
    std::vector<Vertex> order(n);
    std::vector<int> side(n);
    for (std::uint32_t t = 0; t < std::max<std::uint32_t>(tries, 1); ++t) {
        std::iota(order.begin(), order.end(), 0u);
        rng.shuffle(std::span<Vertex>(order));
        std::fill(side.begin(), side.end(), -1);
        std::vector<Vertex> kept;
        if (t % 2 == 0) {
            // Greedy: join the side that keeps v's kept neighbors all opposite.
            for (Vertex v : order) {
                std::uint32_t count[2] = {0, 0};
                for (Vertex w : g.neighbors(v)) {
                    if (side[w] >= 0) ++count[side[w]];
                }
                if (count[0] == 0 && count[1] == 0) {
                    side[v] = static_cast<int>(rng.below(2));
                } else if (count[0] == 0) {
                    side[v] = 0;
                } else if (count[1] == 0) {
                    side[v] = 1;
                } else {
                    continue;
                }
                kept.push_back(v);
            }
        } else {
            // Random bipartition, then drop vertices with a kept same-side neighbor.
            std::vector<int> wanted(n);
            for (Vertex v = 0; v < n; ++v) wanted[v] = static_cast<int>(rng.below(2));
            for (Vertex v : order) {
                const bool clash = std::any_of(g.neighbors(v).begin(), g.neighbors(v).end(),
                                               [&](Vertex w) { return side[w] == wanted[v]; });
                if (clash) continue;
                side[v] = wanted[v];
                kept.push_back(v);
            }
        }
        BipartiteWitness core = best_core(g, kept);
        if (core.value > best.value) best = std::move(core);
    }
    return best;
}

std::string to_string(GndCase c) {
    return c == GndCase::smallD ? "smallD" : "largeD";
}

std::string to_string(GndMode m) {
    return m == GndMode::measured ? "measured" : "paper";
}

GndMode parse_gnd_mode(const std::string& text) {
    if (text == "paper") return GndMode::paper;
    if (text == "measured") return GndMode::measured;
    throw std::invalid_argument("unknown gnd mode '" + text + "' (expected paper or measured)");
}

GndConstants paper_gnd_constants() {
    GndConstants k;
    k.delta = 0.1;
    k.c = k.delta / 4.0;
    k.C_prime = 2.0 + k.delta;
    k.C_bip = 3.0 * 108.0 / (k.delta * k.delta);
    k.beta = 0.01;
    k.A = k.c * std::sqrt(k.beta) / 3.0;
    return k;
}

std::string GndWitness::failing_link() const {
    for (const ChainLink& link : links) {
        if (!link.holds) return link.name;
    }
    return {};
}

namespace {

struct GndPlan {
    GndCase gnd_case = GndCase::largeD;
    double A = 0.0;
    double alpha = 0.0;
    std::uint64_t n_prime = 0;
};

GndPlan plan_gnd(std::uint64_t n, std::uint64_t d, double c, double beta) {
    const double nd = static_cast<double>(n);
    const double dd = static_cast<double>(d);
    const double logn = std::log(nd);
    GndPlan p;
    p.A = c * std::sqrt(beta) / 3.0;
    p.gnd_case = dd <= p.A * std::sqrt(nd * logn) ? GndCase::smallD : GndCase::largeD;
    if (p.gnd_case == GndCase::smallD) {
        p.alpha = 2.0 / (c * c * beta);
        p.n_prime = static_cast<std::uint64_t>(std::min(1e18, std::ceil(p.alpha * dd * dd / logn)));
    } else {
        p.alpha = c * c * beta / 18.0;
        p.n_prime = static_cast<std::uint64_t>(std::min(1e18, std::floor(p.alpha * (nd / dd) * (nd / dd) * logn)));
    }
    return p;
}

double measured_c(const Graph& g, std::uint64_t n_prime, double beta) {
    if (g.n() == 0 || n_prime < 2) return 0.0;
    const double scale = std::sqrt(beta * static_cast<double>(n_prime) * std::log(static_cast<double>(n_prime)));
    return graph_stats(g).min_degree / scale;
}

}  // namespace

GndWitness build_gnd_witness(std::uint64_t n, std::uint64_t d, const GraphSource& source, const GndOptions& options) {
    const long double nl = static_cast<long double>(n);
    const long double dl = static_cast<long double>(d);
    if (n < 4 || dl * dl < nl || dl * dl * dl > nl * nl) {
        throw std::invalid_argument("build_gnd_witness: need sqrt(n) <= d <= n^(2/3), got n=" + std::to_string(n) +
                                    " d=" + std::to_string(d));
    }
    GndWitness w;
    w.n = n;
    w.d = d;
    w.mode = options.mode;
    GndConstants k = options.constants;
    const double beta = k.beta;

    auto fetch = [&](std::uint64_t n_prime, Graph& out) {
        try {
            out = source(static_cast<Vertex>(n_prime));
            return true;
        } catch (const std::exception&) {
            return false;
        }
    };

    GndPlan plan = plan_gnd(n, d, k.c, beta);
    Graph G;
    bool have_graph = false;
    bool source_ok = true;
    if (options.mode == GndMode::measured) {
        // Seed c from the source at full size; the default c gives n' < 2 at desk scale.
        Graph probe;
        if (fetch(n, probe)) {
            const double c = measured_c(probe, n, beta);
            if (c > 0.0) {
                k.c = c;
                plan = plan_gnd(n, d, c, beta);
            }
        }
        for (std::uint32_t it = 1; it <= options.max_iterations; ++it) {
            if (plan.n_prime < 2 || plan.n_prime > n) break;
            source_ok = fetch(plan.n_prime, G);
            if (!source_ok) break;
            have_graph = true;
            w.iterations = it;
            const double c = measured_c(G, plan.n_prime, beta);
            if (!(c > 0.0)) break;
            k.c = c;
            const GndPlan next = plan_gnd(n, d, c, beta);
            const bool stable = next.n_prime == plan.n_prime && next.gnd_case == plan.gnd_case;
            plan = next;
            if (stable) break;
            have_graph = false;
        }
    }
    k.A = plan.A;
    k.alpha = plan.alpha;
    w.constants = k;
    w.gnd_case = plan.gnd_case;
    w.n_prime = plan.n_prime;

    auto link = [&](std::string name, double lhs, double rhs, bool strict = false) {
        const bool holds = strict ? lhs > rhs : lhs >= rhs;
        w.links.push_back({std::move(name), lhs, rhs, holds});
        return holds;
    };

    const double np = static_cast<double>(plan.n_prime);
    const double nd = static_cast<double>(n);
    const double dd = static_cast<double>(d);
    const double c = k.c;
    bool buildable = link("n' >= 2", np, 2.0);
    link("n' <= n/2", nd / 2.0, np);
    buildable = buildable && plan.n_prime <= n;
    if (buildable && !have_graph) source_ok = fetch(plan.n_prime, G);
    if (!buildable || !source_ok) {
        if (buildable) link("G_{n'} available", 0.0, 1.0);
        return w;
    }

    const GraphStats gs = graph_stats(G);
    w.source_vertices = G.n();
    w.source_min_degree = G.n() ? gs.min_degree : 0;
    const double lower = c * std::sqrt(beta * np * std::log(np));
    link("v(G_{n'}) >= n'/3", G.n(), np / 3.0);
    link("delta(G_{n'}) >= c sqrt(beta n' log n')", w.source_min_degree, lower);

    Graph H;
    if (plan.gnd_case == GndCase::smallD) {
        w.multiplier = static_cast<std::uint32_t>(n / plan.n_prime);
        const double target = std::sqrt(c * c * beta * plan.alpha * dd * dd * 2.0 / 3.0);
        link("c sqrt(beta n' log n') >= sqrt(c^2 beta alpha d^2 2/3)", lower, target);
        link("sqrt(c^2 beta alpha d^2 2/3) > d", target, dd, true);
        if (G.n() > 0) H = disjoint_union(G, w.multiplier);
    } else {
        w.multiplier = static_cast<std::uint32_t>(n / plan.n_prime);
        const double step1 = nd / (2.0 * np) * lower;
        const double step2 = std::sqrt(c * c * beta * nd * nd * std::log(std::pow(nd, 2.0 / 3.0)) / (4.0 * np));
        const double step3 = std::sqrt(c * c * beta * dd * dd * (2.0 / 3.0) / (4.0 * plan.alpha));
        link("floor(n/n') delta(G_{n'}) >= n/(2n') c sqrt(beta n' log n')",
             static_cast<double>(w.multiplier) * w.source_min_degree, step1);
        link("n/(2n') c sqrt(beta n' log n') >= sqrt(c^2 beta n^2 log(n^(2/3)) / (4n'))", step1, step2);
        link("sqrt(c^2 beta n^2 log(n^(2/3)) / (4n')) >= sqrt(c^2 beta d^2 (2/3) / (4 alpha))", step2, step3);
        link("sqrt(c^2 beta d^2 (2/3) / (4 alpha)) > d", step3, dd, true);
        if (G.n() > 0) {
            std::vector<std::uint32_t> sizes(G.n(), w.multiplier);
            H = blow_up(G, sizes);
        }
    }
    const double vH = H.n();
    if (!link("v(H_n) >= n/6", vH, nd / 6.0) || H.n() == 0) return w;

    const std::uint64_t extra = n - H.n();
    std::vector<std::uint32_t> sizes(H.n());
    for (Vertex v = 0; v < H.n(); ++v) {
        sizes[v] = static_cast<std::uint32_t>(1 + extra / H.n() + (v < extra % H.n() ? 1 : 0));
    }
    w.graph = blow_up(H, sizes);
    w.built = true;

    const GraphStats fs = graph_stats(w.graph);
    w.triangle_free = fs.triangle_free;
    w.vertex_count_ok = w.graph.n() == n;
    w.min_degree = fs.min_degree;
    w.min_degree_ok = fs.min_degree >= d;
    link("delta(G_{n,d}) >= d", fs.min_degree, dd);

    w.heuristic_bipartite = heuristic_bipartite_min_degree(w.graph, options.heuristic_tries, options.seed).value;
    w.bipartite_bound = k.C_bip * std::max(std::log(dd), dd * dd / nd);
    w.bipartite_ratio = w.heuristic_bipartite / w.bipartite_bound;
    return w;
}

GraphSource trifree_source(double beta, std::uint64_t seed) {
    return [beta, seed](Vertex n_prime) {
        const TriFreeParams params = make_trifree_params(n_prime, beta, std::max(n_prime, kMaxTriFreeVertices));
        TriMonitorConfig cfg;
        cfg.check_triangles = false;
        cfg.event_samples = 0;
        const TriFreeRun run = run_trifree(params, seed, cfg);
        const double threshold = params.delta / 4.0 * params.n * params.rho;
        return prune_min_degree(run.H, threshold).graph;
    };
}

GraphSource cayley_source(double c0, double beta) {
    return [c0, beta](Vertex m) {
        if (m < 7) throw std::invalid_argument("cayley_source: need at least 7 vertices");
        const double target = c0 * std::sqrt(beta * m * std::log(static_cast<double>(m)));
        // Integers strictly between m/3 and m/2.
        const std::uint64_t lo = m / 3 + 1;
        const std::uint64_t hi = (m - 1) / 2;
        const std::uint64_t room = hi >= lo ? hi - lo + 1 : 0;
        if (room == 0) throw std::invalid_argument("cayley_source: no room for a connection set");
        const auto half = std::min<std::uint64_t>(room, std::max<std::uint64_t>(1, static_cast<std::uint64_t>(std::ceil(target / 2.0))));
        std::vector<std::uint64_t> S;
        for (std::uint64_t j = 0; j < half; ++j) {
            const std::uint64_t s = lo + j * room / half;
            S.push_back(s);
            S.push_back(m - s);
        }
        std::vector<std::vector<Vertex>> adj(m);
        for (Vertex x = 0; x < m; ++x) {
            for (std::uint64_t s : S) adj[x].push_back(static_cast<Vertex>((x + s) % m));
            std::sort(adj[x].begin(), adj[x].end());
        }
        return Graph::from_sorted_adjacency(std::move(adj));
    };
}

nlohmann::json to_json(const GndWitness& w) {
    nlohmann::json links = nlohmann::json::array();
    for (const ChainLink& l : w.links) links.push_back({{"name", l.name}, {"lhs", l.lhs}, {"rhs", l.rhs}, {"holds", l.holds}});
    const GndConstants& k = w.constants;
    return nlohmann::json{{"n", w.n},
                          {"d", w.d},
                          {"case", to_string(w.gnd_case)},
                          {"mode", to_string(w.mode)},
                          {"constants",
                           {{"delta", k.delta},
                            {"c", k.c},
                            {"Cprime", k.C_prime},
                            {"Cbip", k.C_bip},
                            {"beta", k.beta},
                            {"A", k.A},
                            {"alpha", k.alpha}}},
                          {"nPrime", w.n_prime},
                          {"sourceVertices", w.source_vertices},
                          {"sourceMinDegree", w.source_min_degree},
                          {"multiplier", w.multiplier},
                          {"iterations", w.iterations},
                          {"links", links},
                          {"failingLink", w.failing_link()},
                          {"built", w.built},
                          {"triangleFree", w.triangle_free},
                          {"vertexCountOk", w.vertex_count_ok},
                          {"minDegreeOk", w.min_degree_ok},
                          {"minDegree", w.min_degree},
                          {"verified", w.verified()},
                          {"heuristicBipartiteMinDegree", w.heuristic_bipartite},
                          {"bipartiteBound", w.bipartite_bound},
                          {"bipartiteRatio", w.bipartite_ratio}};
}

}  // namespace randgreedy
