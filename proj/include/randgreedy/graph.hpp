#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "json.hpp"

namespace randgreedy {

using Vertex = std::uint32_t;
using Edge = std::pair<Vertex, Vertex>;

/// Simple undirected graph on {0, ..., n-1} with sorted adjacency lists.
class Graph {
public:
    Graph() = default;
    explicit Graph(Vertex n) : adj_(n) {}

    /// Throws std::invalid_argument on loops or out-of-range endpoints;
    /// duplicate edges are merged.
    static Graph from_edges(Vertex n, std::span<const Edge> edges);
    /// Adopts adjacency lists that are already sorted, symmetric and loop-free.
    static Graph from_sorted_adjacency(std::vector<std::vector<Vertex>> adj);

    Vertex n() const { return static_cast<Vertex>(adj_.size()); }
    std::uint64_t edge_count() const { return edges_; }
    std::span<const Vertex> neighbors(Vertex v) const { return adj_[v]; }
    std::uint32_t degree(Vertex v) const { return static_cast<std::uint32_t>(adj_[v].size()); }
    bool has_edge(Vertex u, Vertex v) const;

    /// Returns false if the edge was already present.
    bool add_edge(Vertex u, Vertex v);

    /// Edges as (u, v) with u < v, in increasing order.
    std::vector<Edge> edges() const;

    /// Subgraph induced by `vertices`; vertex j of the result is vertices[j].
    Graph induced(std::span<const Vertex> vertices) const;

    friend bool operator==(const Graph&, const Graph&) = default;

private:
    std::vector<std::vector<Vertex>> adj_;
    std::uint64_t edges_ = 0;
};

/// Number of common neighbors of u and v.
std::uint32_t common_neighbors(const Graph& g, Vertex u, Vertex v);

/// Some triangle (a < b < c) if one exists.
std::optional<std::array<Vertex, 3>> find_triangle(const Graph& g);
bool is_triangle_free(const Graph& g);

struct GraphStats {
    std::uint32_t min_degree = 0;
    std::uint32_t max_degree = 0;
    std::uint64_t edges = 0;
    bool triangle_free = true;
};

GraphStats graph_stats(const Graph& g);

/// True iff the subgraph induced by `vertices` has no odd cycle.
bool induces_bipartite(const Graph& g, std::span<const Vertex> vertices);

/// Minimum degree of the subgraph induced by `vertices` (0 when empty).
std::uint32_t induced_min_degree(const Graph& g, std::span<const Vertex> vertices);

/// Edge-list files: '#'-prefixed header lines (the first may carry a JSON
/// object with "n"), then one "u v" line per edge.
void write_edge_list(std::ostream& out, const Graph& g, const nlohmann::json& header);

struct EdgeListFile {
    Graph graph;
    nlohmann::json header;
};

/// Throws std::runtime_error naming the offending line.
EdgeListFile read_edge_list(std::istream& in);

}  // namespace randgreedy
