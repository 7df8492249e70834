#pragma once

#include <cstdint>
#include <vector>

#include "json.hpp"
#include "randgreedy/graph.hpp"
#include "randgreedy/rng.hpp"

namespace randgreedy {

struct TriFreeParams {
    Vertex n = 0;
    double beta = 0.05;
    double sigma = 0.0;  // (log n)^-2
    double p = 0.0;      // σ / √n
    double rho = 0.0;    // √(β log n / n)
    std::uint64_t steps = 0;  // ceil(n^β)
    double delta = 0.1;
    double D_s = 0.0;         // 108 / δ^2
    std::uint64_t s = 0;      // ceil(D_s log n / ρ)
    /// s >= n: the T* event then only concerns sets larger than half the graph.
    bool s_exceeds_n = false;
};

inline constexpr Vertex kMaxTriFreeVertices = Vertex{1} << 16;

/// Throws std::invalid_argument unless 4 <= n <= max_n, 0 < β < 1/14 and p < 1.
TriFreeParams make_trifree_params(Vertex n, double beta, Vertex max_n = kMaxTriFreeVertices);

struct PiQSequences {
    std::vector<double> pi;  // π_0 .. π_I
    std::vector<double> q;   // q_0 .. q_I
};

/// π_0 = σ, π_{i+1} = π_i + σ q_i, q_0 = 1, q_{i+1} = q_i (1-p) exp(-2σ π_i q_i).
PiQSequences pi_q_sequences(const TriFreeParams& params);

struct TriStepReport {
    std::uint64_t i = 0;          // index of the step just taken (1-based)
    std::uint64_t sampled = 0;    // |Γ_i|
    std::uint64_t deleted = 0;    // |D_i|
    std::uint64_t closed = 0;     // |C'_i|
    std::uint64_t extra_removed = 0;  // |S_i|
    double s_rate = 0.0;          // s_{i-1}
    std::uint32_t max_gamma_degree = 0;
};

/// State (E_i, T_i, O_i) of the semi-random triangle-free process. O is a
/// packed bitset over unordered pairs.
class TriFreeProcess {
public:
    TriFreeProcess(TriFreeParams params, std::uint64_t seed);

    const TriFreeParams& params() const { return params_; }
    const PiQSequences& sequences() const { return seq_; }
    std::uint64_t step_index() const { return i_; }
    const Graph& E() const { return E_; }
    const Graph& T() const { return T_; }
    bool is_open(Vertex u, Vertex v) const;
    std::uint64_t open_count() const { return open_count_; }
    std::uint64_t pair_count() const { return pairs_; }

    /// Throws std::logic_error once all steps are taken.
    TriStepReport step();

private:
    std::uint64_t pair_index(Vertex u, Vertex v) const;
    Edge pair_at(std::uint64_t index) const;
    bool test(std::uint64_t index) const { return (open_[index >> 6] >> (index & 63)) & 1u; }
    void clear(std::uint64_t index);

    TriFreeParams params_;
    PiQSequences seq_;
    Rng rng_;
    std::uint64_t i_ = 0;
    std::uint64_t pairs_ = 0;
    std::vector<std::uint64_t> row_start_;
    std::vector<std::uint64_t> open_;
    std::uint64_t open_count_ = 0;
    Graph E_;
    Graph T_;
};

struct TriMonitorConfig {
    /// Exact triangle scan of T after every step.
    bool check_triangles = true;
    std::uint64_t event_samples = 10'000;
};

struct TriStepRecord {
    TriStepReport report;
    std::uint64_t E_edges = 0;
    std::uint64_t T_edges = 0;
    std::uint64_t open = 0;
    double predicted_open = 0.0;  // q_i C(n,2)
    double pi = 0.0;              // π_i
    double n_threshold = 0.0;     // 2 σ q_{i-1} √n
    bool n_event = true;          // max Γ_i-degree <= n_threshold
    bool triangle_checked = false;
    bool triangle_free = true;
};

struct EventReport {
    bool tstar_vacuous = false;
    std::uint64_t tstar_samples = 0;
    std::uint64_t tstar_violations = 0;
    std::uint64_t tplus_samples = 0;
    std::uint64_t tplus_violations = 0;
    double tplus_max_ratio = 0.0;  // max |T(A,B)| / bound over samples
    bool n_event_all_steps = true;
    std::uint64_t n_event_failed_steps = 0;
    /// Σ_i max_v |N_Γi(v)|, an upper bound on Δ(H).
    std::uint64_t gamma_degree_sum = 0;
};

/// Number of T edges with one end in A and the other in B (A, B disjoint),
/// via adjacency lists of A and a membership table of B.
std::uint64_t cross_edges(const Graph& T, std::span<const Vertex> A, std::span<const Vertex> B);
/// Same count by scanning every edge of T.
std::uint64_t cross_edges_by_scan(const Graph& T, std::span<const Vertex> A, std::span<const Vertex> B);

/// Sampled T*_I and T+_I checks on a finished graph. T* samples need
/// |A| = |B| = s and are skipped (vacuous) when 2s > n. T+ samples draw a size
/// uniformly from [1, min(2s, n/2)] and disjoint A, B of that size.
EventReport event_checks(const Graph& T, const TriFreeParams& params, std::uint64_t samples, Rng& rng);

struct TriFreeRun {
    Graph H;
    std::vector<TriStepRecord> trajectory;
    EventReport events;
    bool always_triangle_free = true;
};

TriFreeRun run_trifree(const TriFreeParams& params, std::uint64_t seed, const TriMonitorConfig& cfg);

nlohmann::json to_json(const TriFreeParams& params);
nlohmann::json to_json(const TriStepRecord& rec);
nlohmann::json to_json(const EventReport& report);

}  // namespace randgreedy
