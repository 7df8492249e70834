#include "randgreedy/trifree.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace randgreedy {

using nlohmann::json;

TriFreeParams make_trifree_params(Vertex n, double beta, Vertex max_n) {
    if (n < 4) throw std::invalid_argument("trifree: n must be at least 4");
    if (n > max_n) throw std::invalid_argument("trifree: n=" + std::to_string(n) + " exceeds the cap " + std::to_string(max_n));
    if (!(beta > 0.0 && beta < 1.0 / 14.0)) throw std::invalid_argument("trifree: beta must lie in (0, 1/14)");
    TriFreeParams p;
    const double nd = n;
    const double logn = std::log(nd);
    p.n = n;
    p.beta = beta;
    p.sigma = 1.0 / (logn * logn);
    p.p = p.sigma / std::sqrt(nd);
    if (!(p.p < 1.0)) throw std::invalid_argument("trifree: edge probability p must be below 1");
    p.rho = std::sqrt(beta * logn / nd);
    p.steps = static_cast<std::uint64_t>(std::ceil(std::pow(nd, beta)));
    p.delta = 0.1;
    p.D_s = 108.0 / (p.delta * p.delta);
    p.s = static_cast<std::uint64_t>(std::ceil(p.D_s * logn / p.rho));
    p.s_exceeds_n = p.s >= n;
    return p;
}

PiQSequences pi_q_sequences(const TriFreeParams& params) {
    PiQSequences seq;
    seq.pi.resize(params.steps + 1);
    seq.q.resize(params.steps + 1);
    const double sigma = params.sigma;
    seq.pi[0] = sigma;
    seq.q[0] = 1.0;
    for (std::uint64_t i = 0; i < params.steps; ++i) {
        seq.pi[i + 1] = seq.pi[i] + sigma * seq.q[i];
        seq.q[i + 1] = seq.q[i] * (1.0 - params.p) * std::exp(-2.0 * sigma * seq.pi[i] * seq.q[i]);
        if (!(seq.q[i + 1] > 0.0 && seq.q[i + 1] <= 1.0) || !(seq.pi[i + 1] > seq.pi[i]) || !std::isfinite(seq.pi[i + 1])) {
            throw std::logic_error("pi_q_sequences: sequence left its valid range at i=" + std::to_string(i + 1));
        }
    }
    return seq;
}

TriFreeProcess::TriFreeProcess(TriFreeParams params, std::uint64_t seed)
    : params_(params), seq_(pi_q_sequences(params)), rng_(seed), E_(params.n), T_(params.n) {
    const std::uint64_t n = params_.n;
    pairs_ = n * (n - 1) / 2;
    row_start_.resize(n);
    std::uint64_t acc = 0;
    for (std::uint64_t u = 0; u < n; ++u) {
        row_start_[u] = acc;
        acc += n - 1 - u;
    }
    open_.assign((pairs_ + 63) / 64, ~std::uint64_t{0});
    if (pairs_ % 64 != 0) open_.back() = (std::uint64_t{1} << (pairs_ % 64)) - 1;
    open_count_ = pairs_;
}

std::uint64_t TriFreeProcess::pair_index(Vertex u, Vertex v) const {
    if (u > v) std::swap(u, v);
    return row_start_[u] + (v - u - 1);
}

Edge TriFreeProcess::pair_at(std::uint64_t index) const {
    const auto it = std::upper_bound(row_start_.begin(), row_start_.end(), index);
    const auto u = static_cast<Vertex>(it - row_start_.begin() - 1);
    return {u, static_cast<Vertex>(index - row_start_[u] + u + 1)};
}

void TriFreeProcess::clear(std::uint64_t index) {
    std::uint64_t& word = open_[index >> 6];
    const std::uint64_t bit = std::uint64_t{1} << (index & 63);
    if (word & bit) {
        word &= ~bit;
        --open_count_;
    }
}

bool TriFreeProcess::is_open(Vertex u, Vertex v) const {
    if (u == v || u >= params_.n || v >= params_.n) return false;
    return test(pair_index(u, v));
}

TriStepReport TriFreeProcess::step() {
    if (i_ >= params_.steps) throw std::logic_error("trifree: all " + std::to_string(params_.steps) + " steps taken");
    TriStepReport report;
    report.i = i_ + 1;
    const std::uint64_t open_before = open_count_;

    // Visit every pair with probability q and act on the open ones; for open
    // pairs this is exactly independent Bernoulli(q) selection.
    auto bernoulli_pairs = [&](double q, auto&& on_open) {
        std::uint64_t pos = 0;
        while (pos < pairs_) {
            const std::uint64_t gap = rng_.geometric(q);
            if (gap >= pairs_ - pos) break;
            pos += gap;
            if (test(pos)) on_open(pos);
            ++pos;
        }
    };

    std::vector<Edge> gamma;
    bernoulli_pairs(params_.p, [&](std::uint64_t idx) { gamma.push_back(pair_at(idx)); });
    report.sampled = gamma.size();

    std::vector<std::uint32_t> gamma_degree(params_.n, 0);
    for (auto [u, v] : gamma) {
        clear(pair_index(u, v));
        E_.add_edge(u, v);
        report.max_gamma_degree = std::max({report.max_gamma_degree, ++gamma_degree[u], ++gamma_degree[v]});
    }

    rng_.shuffle(std::span<Edge>(gamma));
    for (auto [u, v] : gamma) {
        if (common_neighbors(T_, u, v) == 0) {
            T_.add_edge(u, v);
        } else {
            ++report.deleted;
        }
    }

    // Newly closed pairs: open pairs that now span a path of length two in E.
    // Such a path uses at least one edge of Γ.
    const std::uint64_t before_closing = open_count_;
    for (auto [u, v] : gamma) {
        for (Vertex w : E_.neighbors(u)) {
            if (w != v) clear(pair_index(v, w));
        }
        for (Vertex w : E_.neighbors(v)) {
            if (w != u) clear(pair_index(u, w));
        }
    }
    report.closed = before_closing - open_count_;

    const double q_now = seq_.q[i_];
    const double q_next = seq_.q[i_ + 1];
    const std::uint64_t surviving = open_count_;
    if (surviving > 0) {
        report.s_rate = std::clamp(1.0 - q_next * static_cast<double>(open_before) / (q_now * static_cast<double>(surviving)),
                                   0.0, 1.0);
    }
    if (report.s_rate > 0.0) {
        bernoulli_pairs(report.s_rate, [&](std::uint64_t idx) { clear(idx); });
        report.extra_removed = surviving - open_count_;
    }
    ++i_;
    return report;
}

namespace {

class CrossCounter {
public:
    explicit CrossCounter(Vertex n) : stamp_(n, 0) {}

    std::uint64_t count(const Graph& T, std::span<const Vertex> A, std::span<const Vertex> B) {
        ++epoch_;
        for (Vertex b : B) stamp_[b] = epoch_;
        std::uint64_t total = 0;
        for (Vertex a : A) {
            for (Vertex w : T.neighbors(a)) total += stamp_[w] == epoch_;
        }
        return total;
    }

private:
    std::vector<std::uint32_t> stamp_;
    std::uint32_t epoch_ = 0;
};

}  // namespace

std::uint64_t cross_edges(const Graph& T, std::span<const Vertex> A, std::span<const Vertex> B) {
    CrossCounter counter(T.n());
    return counter.count(T, A, B);
}

std::uint64_t cross_edges_by_scan(const Graph& T, std::span<const Vertex> A, std::span<const Vertex> B) {
    std::vector<std::uint8_t> side(T.n(), 0);
    for (Vertex a : A) side[a] |= 1;
    for (Vertex b : B) side[b] |= 2;
    std::uint64_t total = 0;
    for (auto [u, v] : T.edges()) {
        if ((side[u] & 1 && side[v] & 2) || (side[u] & 2 && side[v] & 1)) ++total;
    }
    return total;
}

EventReport event_checks(const Graph& T, const TriFreeParams& params, std::uint64_t samples, Rng& rng) {
    EventReport report;
    const Vertex n = T.n();
    std::vector<Vertex> perm(n);
    std::iota(perm.begin(), perm.end(), 0u);
    CrossCounter counter(n);

    // First 2m entries of a partial Fisher-Yates pass: A = [0, m), B = [m, 2m).
    auto draw = [&](std::uint64_t m) {
        for (std::uint64_t j = 0; j < 2 * m; ++j) {
            std::swap(perm[j], perm[j + rng.below(n - j)]);
        }
    };

    const std::uint64_t s = params.s;
    report.tstar_vacuous = 2 * s > n;
    if (!report.tstar_vacuous) {
        const double bound = (1.0 - params.delta) * static_cast<double>(s) * static_cast<double>(s) * params.rho;
        for (std::uint64_t j = 0; j < samples; ++j) {
            draw(s);
            const std::span<const Vertex> all(perm);
            const auto got = counter.count(T, all.subspan(0, s), all.subspan(s, s));
            ++report.tstar_samples;
            if (static_cast<double>(got) < bound) ++report.tstar_violations;
        }
    }

    const std::uint64_t cap = std::min<std::uint64_t>(2 * s, n / 2);
    if (cap >= 1) {
        for (std::uint64_t j = 0; j < samples; ++j) {
            const std::uint64_t m = 1 + rng.below(cap);
            draw(m);
            const std::span<const Vertex> all(perm);
            const auto got = counter.count(T, all.subspan(0, m), all.subspan(m, m));
            const double bound = (1.0 + params.delta) * 2.0 * static_cast<double>(s) * static_cast<double>(m) * params.rho;
            ++report.tplus_samples;
            report.tplus_max_ratio = std::max(report.tplus_max_ratio, static_cast<double>(got) / bound);
            if (static_cast<double>(got) > bound) ++report.tplus_violations;
        }
    }
    return report;
}

TriFreeRun run_trifree(const TriFreeParams& params, std::uint64_t seed, const TriMonitorConfig& cfg) {
    TriFreeProcess process(params, seed);
    TriFreeRun out;
    const auto& seq = process.sequences();
    const double sqrt_n = std::sqrt(static_cast<double>(params.n));
    std::uint64_t gamma_sum = 0;
    for (std::uint64_t i = 0; i < params.steps; ++i) {
        TriStepRecord rec;
        rec.report = process.step();
        rec.E_edges = process.E().edge_count();
        rec.T_edges = process.T().edge_count();
        rec.open = process.open_count();
        rec.predicted_open = seq.q[i + 1] * static_cast<double>(process.pair_count());
        rec.pi = seq.pi[i + 1];
        rec.n_threshold = 2.0 * params.sigma * seq.q[i] * sqrt_n;
        rec.n_event = rec.report.max_gamma_degree <= rec.n_threshold;
        if (cfg.check_triangles) {
            rec.triangle_checked = true;
            rec.triangle_free = is_triangle_free(process.T());
            out.always_triangle_free = out.always_triangle_free && rec.triangle_free;
        }
        gamma_sum += rec.report.max_gamma_degree;
        out.trajectory.push_back(rec);
    }
    out.H = process.T();
    Rng event_rng(derive_seed(seed, streams::kEvents));
    out.events = event_checks(out.H, params, cfg.event_samples, event_rng);
    out.events.gamma_degree_sum = gamma_sum;
    for (const auto& rec : out.trajectory) {
        if (!rec.n_event) {
            out.events.n_event_all_steps = false;
            ++out.events.n_event_failed_steps;
        }
    }
    if (!cfg.check_triangles) out.always_triangle_free = is_triangle_free(out.H);
    return out;
}

json to_json(const TriFreeParams& p) {
    return json{{"n", p.n},         {"beta", p.beta},   {"sigma", p.sigma}, {"p", p.p},
                {"rho", p.rho},     {"steps", p.steps}, {"delta", p.delta}, {"D_s", p.D_s},
                {"s", p.s},         {"sExceedsN", p.s_exceeds_n}};
}

json to_json(const TriStepRecord& rec) {
    return json{{"type", "step"},
                {"i", rec.report.i},
                {"sampled", rec.report.sampled},
                {"deleted", rec.report.deleted},
                {"closed", rec.report.closed},
                {"extraRemoved", rec.report.extra_removed},
                {"sRate", rec.report.s_rate},
                {"maxGammaDegree", rec.report.max_gamma_degree},
                {"edgesE", rec.E_edges},
                {"edgesT", rec.T_edges},
                {"open", rec.open},
                {"predictedOpen", rec.predicted_open},
                {"pi", rec.pi},
                {"nThreshold", rec.n_threshold},
                {"nEvent", rec.n_event},
                {"triangleChecked", rec.triangle_checked},
                {"triangleFree", rec.triangle_free}};
}

json to_json(const EventReport& r) {
    return json{{"tstarVacuous", r.tstar_vacuous},
                {"tstarSamples", r.tstar_samples},
                {"tstarViolations", r.tstar_violations},
                {"tplusSamples", r.tplus_samples},
                {"tplusViolations", r.tplus_violations},
                {"tplusMaxRatio", r.tplus_max_ratio},
                {"nEventAllSteps", r.n_event_all_steps},
                {"nEventFailedSteps", r.n_event_failed_steps},
                {"gammaDegreeSum", r.gamma_degree_sum}};
}

}  // namespace randgreedy
