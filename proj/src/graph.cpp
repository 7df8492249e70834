#include "randgreedy/graph.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace randgreedy {

Graph Graph::from_edges(Vertex n, std::span<const Edge> edges) {
    Graph g(n);
    for (auto [u, v] : edges) {
        if (u >= n || v >= n) throw std::invalid_argument("Graph: edge endpoint out of range");
        if (u == v) throw std::invalid_argument("Graph: self-loop at " + std::to_string(u));
        g.adj_[u].push_back(v);
        g.adj_[v].push_back(u);
    }
    g.edges_ = 0;
    for (auto& list : g.adj_) {
        std::sort(list.begin(), list.end());
        list.erase(std::unique(list.begin(), list.end()), list.end());
        g.edges_ += list.size();
    }
    g.edges_ /= 2;
    return g;
}

Graph Graph::from_sorted_adjacency(std::vector<std::vector<Vertex>> adj) {
    Graph g;
    g.adj_ = std::move(adj);
    for (const auto& list : g.adj_) g.edges_ += list.size();
    g.edges_ /= 2;
    return g;
}

bool Graph::has_edge(Vertex u, Vertex v) const {
    if (u >= n() || v >= n()) return false;
    const auto& a = adj_[u].size() <= adj_[v].size() ? adj_[u] : adj_[v];
    return std::binary_search(a.begin(), a.end(), &a == &adj_[u] ? v : u);
}

bool Graph::add_edge(Vertex u, Vertex v) {
    if (u >= n() || v >= n()) throw std::invalid_argument("Graph: edge endpoint out of range");
    if (u == v) throw std::invalid_argument("Graph: self-loop at " + std::to_string(u));
    auto& au = adj_[u];
    auto it = std::lower_bound(au.begin(), au.end(), v);
    if (it != au.end() && *it == v) return false;
    au.insert(it, v);
    auto& av = adj_[v];
    av.insert(std::lower_bound(av.begin(), av.end(), u), u);
    ++edges_;
    return true;
}

std::vector<Edge> Graph::edges() const {
    std::vector<Edge> out;
    out.reserve(edges_);
    for (Vertex u = 0; u < n(); ++u) {
        for (Vertex v : adj_[u]) {
            if (u < v) out.emplace_back(u, v);
        }
    }
    return out;
}

Graph Graph::induced(std::span<const Vertex> vertices) const {
    std::vector<std::int64_t> index(n(), -1);
    for (std::size_t j = 0; j < vertices.size(); ++j) {
        if (vertices[j] >= n()) throw std::invalid_argument("Graph::induced: vertex out of range");
        if (index[vertices[j]] >= 0) throw std::invalid_argument("Graph::induced: repeated vertex");
        index[vertices[j]] = static_cast<std::int64_t>(j);
    }
    Graph h(static_cast<Vertex>(vertices.size()));
    for (std::size_t j = 0; j < vertices.size(); ++j) {
        for (Vertex w : adj_[vertices[j]]) {
            if (index[w] >= 0) h.adj_[j].push_back(static_cast<Vertex>(index[w]));
        }
        std::sort(h.adj_[j].begin(), h.adj_[j].end());
        h.edges_ += h.adj_[j].size();
    }
    h.edges_ /= 2;
    return h;
}

std::uint32_t common_neighbors(const Graph& g, Vertex u, Vertex v) {
    auto a = g.neighbors(u);
    auto b = g.neighbors(v);
    std::uint32_t count = 0;
    std::size_t i = 0;
    std::size_t j = 0;
    while (i < a.size() && j < b.size()) {
        if (a[i] < b[j]) {
            ++i;
        } else if (b[j] < a[i]) {
            ++j;
        } else {
            ++count;
            ++i;
            ++j;
        }
    }
    return count;
}

std::optional<std::array<Vertex, 3>> find_triangle(const Graph& g) {
    for (Vertex u = 0; u < g.n(); ++u) {
        for (Vertex v : g.neighbors(u)) {
            if (v <= u) continue;
            auto a = g.neighbors(u);
            auto b = g.neighbors(v);
            std::size_t i = 0;
            std::size_t j = 0;
            while (i < a.size() && j < b.size()) {
                if (a[i] < b[j]) {
                    ++i;
                } else if (b[j] < a[i]) {
                    ++j;
                } else {
                    std::array<Vertex, 3> t{u, v, a[i]};
                    std::sort(t.begin(), t.end());
                    return t;
                }
            }
        }
    }
    return std::nullopt;
}

bool is_triangle_free(const Graph& g) {
    return !find_triangle(g).has_value();
}

GraphStats graph_stats(const Graph& g) {
    GraphStats s;
    s.edges = g.edge_count();
    if (g.n() > 0) {
        s.min_degree = g.degree(0);
        for (Vertex v = 0; v < g.n(); ++v) {
            s.min_degree = std::min(s.min_degree, g.degree(v));
            s.max_degree = std::max(s.max_degree, g.degree(v));
        }
    }
    s.triangle_free = is_triangle_free(g);
    return s;
}

bool induces_bipartite(const Graph& g, std::span<const Vertex> vertices) {
    std::vector<int> side(g.n(), -2);
    for (Vertex v : vertices) side[v] = -1;
    std::vector<Vertex> stack;
    for (Vertex s : vertices) {
        if (side[s] != -1) continue;
        side[s] = 0;
        stack.push_back(s);
        while (!stack.empty()) {
            const Vertex u = stack.back();
            stack.pop_back();
            for (Vertex w : g.neighbors(u)) {
                if (side[w] == -2) continue;
                if (side[w] == -1) {
                    side[w] = 1 - side[u];
                    stack.push_back(w);
                } else if (side[w] == side[u]) {
                    return false;
                }
            }
        }
    }
    return true;
}

std::uint32_t induced_min_degree(const Graph& g, std::span<const Vertex> vertices) {
    if (vertices.empty()) return 0;
    std::vector<std::uint8_t> in(g.n(), 0);
    for (Vertex v : vertices) in[v] = 1;
    std::uint32_t best = UINT32_MAX;
    for (Vertex v : vertices) {
        std::uint32_t d = 0;
        for (Vertex w : g.neighbors(v)) d += in[w];
        best = std::min(best, d);
    }
    return best;
}

void write_edge_list(std::ostream& out, const Graph& g, const nlohmann::json& header) {
    nlohmann::json h = header.is_object() ? header : nlohmann::json::object();
    h["n"] = g.n();
    h["edges"] = g.edge_count();
    out << "# " << h.dump() << '\n';
    for (auto [u, v] : g.edges()) out << u << ' ' << v << '\n';
}

EdgeListFile read_edge_list(std::istream& in) {
    EdgeListFile file;
    std::vector<Edge> edges;
    std::optional<std::uint64_t> n;
    std::uint64_t max_vertex = 0;
    std::string line;
    std::uint64_t lineno = 0;
    auto fail = [&](const std::string& what) {
        throw std::runtime_error("edge list line " + std::to_string(lineno) + ": " + what);
    };
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.find_first_not_of(" \t") == std::string::npos) continue;
        if (line[0] == '#') {
            const auto brace = line.find('{');
            if (brace != std::string::npos && file.header.is_null()) {
                try {
                    file.header = nlohmann::json::parse(line.substr(brace));
                } catch (const nlohmann::json::exception& e) {
                    fail(std::string("bad JSON header: ") + e.what());
                }
                if (file.header.contains("n")) n = file.header["n"].get<std::uint64_t>();
            }
            continue;
        }
        std::istringstream tokens(line);
        long long u = -1;
        long long v = -1;
        std::string extra;
        if (!(tokens >> u >> v) || (tokens >> extra)) fail("expected \"u v\"");
        if (u < 0 || v < 0 || u > UINT32_MAX || v > UINT32_MAX) fail("vertex out of range");
        if (u == v) fail("self-loop");
        edges.emplace_back(static_cast<Vertex>(u), static_cast<Vertex>(v));
        max_vertex = std::max<std::uint64_t>(max_vertex, std::max(u, v));
    }
    const std::uint64_t vertices = n.value_or(edges.empty() ? 0 : max_vertex + 1);
    if (!edges.empty() && max_vertex >= vertices) {
        throw std::runtime_error("edge list: vertex " + std::to_string(max_vertex) + " exceeds header n=" + std::to_string(vertices));
    }
    file.graph = Graph::from_edges(static_cast<Vertex>(vertices), edges);
    if (file.header.is_null()) file.header = nlohmann::json::object();
    return file;
}

}  // namespace randgreedy
