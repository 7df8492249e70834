#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "randgreedy/graph.hpp"

namespace randgreedy {

struct PrunedGraph {
    Graph graph;
    std::vector<Vertex> kept;  // original ids, increasing; vertex j of graph is kept[j]
};

/// Repeatedly deletes vertices of degree <= threshold. The surviving set does
/// not depend on the deletion order.
PrunedGraph prune_min_degree(const Graph& g, double threshold);

/// Vertex v becomes an independent set of sizes[v] clones; adjacent vertices
/// become complete bipartite pairs. Clones of v are numbered consecutively.
Graph blow_up(const Graph& g, std::span<const std::uint32_t> sizes);
Graph disjoint_union(const Graph& g, std::uint32_t copies);

struct BipartiteWitness {
    std::uint32_t value = 0;
    std::vector<Vertex> vertices;  // sorted
};

inline constexpr Vertex kExactBipartiteLimit = 20;

/// Max over nonempty S with G[S] bipartite of δ(G[S]); the smallest-mask
/// maximizer is returned. Throws std::invalid_argument when n > 20.
BipartiteWitness exact_max_bipartite_min_degree(const Graph& g);

/// Randomized lower bound: greedy random 2-colorings of G, each reduced to
/// its densest core by min-degree peeling.
BipartiteWitness heuristic_bipartite_min_degree(const Graph& g, std::uint32_t tries, std::uint64_t seed);

enum class GndCase { smallD, largeD };
enum class GndMode { paper, measured };

std::string to_string(GndCase c);
std::string to_string(GndMode m);
GndMode parse_gnd_mode(const std::string& text);

struct GndConstants {
    double delta = 0.1;
    double c = 0.025;        // δ/4
    double C_prime = 2.1;    // 2 + δ
    double C_bip = 32400.0;  // 3 D_s
    double beta = 0.01;
    double A = 0.0;          // c √β / 3
    double alpha = 0.0;      // case dependent
};

GndConstants paper_gnd_constants();

/// One inequality of the construction's chain, evaluated on the instance.
struct ChainLink {
    std::string name;
    double lhs = 0.0;
    double rhs = 0.0;
    bool holds = false;
};

/// Supplies G_{n'}: a triangle-free graph on at most n' vertices.
using GraphSource = std::function<Graph(Vertex n_prime)>;

struct GndWitness {
    Graph graph;
    std::uint64_t n = 0;
    std::uint64_t d = 0;
    GndCase gnd_case = GndCase::largeD;
    GndMode mode = GndMode::paper;
    GndConstants constants;
    std::uint64_t n_prime = 0;
    std::uint32_t source_vertices = 0;
    std::uint32_t source_min_degree = 0;
    std::uint32_t multiplier = 0;  // copies (smallD) or blow-up factor (largeD)
    std::uint32_t iterations = 0;  // measured-mode refinements
    std::vector<ChainLink> links;
    bool built = false;
    bool triangle_free = false;
    bool vertex_count_ok = false;
    bool min_degree_ok = false;
    std::uint32_t min_degree = 0;
    std::uint32_t heuristic_bipartite = 0;
    double bipartite_bound = 0.0;  // C'' max(log d, d^2/n)
    double bipartite_ratio = 0.0;

    bool verified() const { return built && triangle_free && vertex_count_ok && min_degree_ok; }
    /// First link of the chain that fails, or empty when all hold.
    std::string failing_link() const;
};

struct GndOptions {
    GndMode mode = GndMode::paper;
    GndConstants constants = paper_gnd_constants();
    std::uint32_t heuristic_tries = 4;
    std::uint64_t seed = 1;
    std::uint32_t max_iterations = 16;
};

/// Requires √n <= d <= n^(2/3) (std::invalid_argument otherwise). Never throws
/// on a failed construction; the failure shows up in links and flags.
GndWitness build_gnd_witness(std::uint64_t n, std::uint64_t d, const GraphSource& source, const GndOptions& options);

/// G_{n'} from the semi-random triangle-free process with parameter β,
/// pruned at threshold δ/4 · n'ρ.
GraphSource trifree_source(double beta, std::uint64_t seed);

/// Cayley graph of Z/n' with a symmetric connection set inside (n'/3, n'/2):
/// sum-free, hence triangle-free, and regular of degree about
/// c0 √(β n' log n'). A deterministic stand-in for G_{n'}.
GraphSource cayley_source(double c0, double beta);

nlohmann::json to_json(const GndWitness& w);

}  // namespace randgreedy
