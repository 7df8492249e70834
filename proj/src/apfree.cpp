#include "randgreedy/apfree.hpp"

#include <algorithm>
#include <cmath>

#include "randgreedy/dem.hpp"

namespace randgreedy {

std::string to_string(ParamMode mode) {
    return mode == ParamMode::paper ? "paper" : "desk";
}

ParamMode parse_param_mode(const std::string& text) {
    if (text == "desk") return ParamMode::desk;
    if (text == "paper") return ParamMode::paper;
    throw std::invalid_argument("unknown parameter mode '" + text + "' (expected desk or paper)");
}

double default_hitting_constant(unsigned r, double xi) {
    return 9.0 / xi * std::pow(r / 2.0, 1.0 / (r - 1));
}

APParams make_ap_params(const RingContext& ctx, double xi, double delta, ParamMode mode) {
    const unsigned r = ctx.r();
    if (!(xi > 0.0 && xi < 1.0)) throw std::invalid_argument("xi must lie in (0, 1)");
    if (!(delta > 0.0 && delta <= 1.0 / (2.0 * r))) {
        throw std::invalid_argument("delta must lie in (0, 1/(2r)] = (0, " + std::to_string(1.0 / (2.0 * r)) + "]");
    }
    const double N = ctx.N();
    const double D = static_cast<double>(ctx.degree());
    const double logN = std::log(N);
    const double root = 1.0 / (r - 1);

    APParams p;
    p.xi = xi;
    p.delta = delta;
    p.mode = mode;
    p.M = N * std::pow(D, -root);
    p.m = static_cast<std::uint64_t>(std::llround(xi * p.M * std::pow(logN, root)));
    p.k = static_cast<std::uint64_t>(std::llround(9.0 / xi * std::pow(D / logN, root) * logN));
    p.k_eff = static_cast<std::uint32_t>(std::min<std::uint64_t>(p.k, ctx.N()));
    p.k_clamped = p.k > ctx.N();
    p.C_k = default_hitting_constant(r, xi);
    p.xi_in_asymptotic_range = xi < 1.0 / (2.0 * r);
    return p;
}

APParams desk_params(const RingContext& ctx) {
    return make_ap_params(ctx, 0.2, 0.1, ParamMode::desk);
}

APParams paper_params(const RingContext& ctx) {
    const double r = ctx.r();
    const double delta = 1.0 / (40.0 * r * r);
    return make_ap_params(ctx, delta / 500.0, delta, ParamMode::paper);
}

APProcess::APProcess(RingContext ctx, APParams params, std::uint64_t seed)
    : ctx_(std::move(ctx)), params_(params), seed_(seed), rng_(seed) {
    const std::uint32_t N = ctx_.N();
    in_set_.assign(N, 0);
    pool_.resize(N);
    pos_.resize(N);
    for (std::uint32_t x = 0; x < N; ++x) {
        pool_[x] = x;
        pos_[x] = x;
    }
    bound_.assign(N, 0);
}

std::vector<Residue> APProcess::unavailable_neighbors(Residue v) const {
    if (v >= ctx_.N() || !available(v)) {
        throw std::invalid_argument("unavailable_neighbors: " + std::to_string(v) + " is not available");
    }
    std::vector<Residue> out;
    if (ctx_.r() == 3) {
        for (Residue y : chosen_) {
            for (Residue u : three_ap_completions(ctx_, y, v)) {
                if (available(u)) out.push_back(u);
            }
        }
    } else {
        const std::uint32_t N = ctx_.N();
        const unsigned r = ctx_.r();
        for (std::uint32_t d = 1; d < N; ++d) {
            for (unsigned j = 0; j < r; ++j) {
                const Residue a = ctx_.sub(v, ctx_.mul(j, d));
                Residue outside = 0;
                unsigned outside_count = 0;
                for (unsigned t = 0; t < r && outside_count < 2; ++t) {
                    if (t == j) continue;
                    const Residue u = ctx_.add(a, ctx_.mul(t, d));
                    if (!in_set(u)) {
                        outside = u;
                        ++outside_count;
                    }
                }
                if (outside_count == 1 && available(outside)) out.push_back(outside);
            }
        }
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

void APProcess::remove_available(Residue x) {
    const std::uint32_t at = pos_[x];
    const Residue last = pool_.back();
    pool_[at] = last;
    pos_[last] = at;
    pool_.pop_back();
    pos_[x] = kNotAvailable;
    bound_[x] = 0;
}

// ñ_u = Σ_{y ∈ I} |completions(y, u) ∩ V|. Elements of Z = {x} ∪ removed stop
// counting for every u, and x starts contributing its own completions.
void APProcess::update_bounds_r3(Residue x, std::span<const Residue> removed, std::span<const Residue> old_set) {
    auto drop = [&](Residue z) {
        for (Residue y : old_set) {
            for (Residue u : three_ap_completions(ctx_, y, z)) {
                if (available(u)) --bound_[u];
            }
        }
    };
    drop(x);
    for (Residue z : removed) drop(z);
    for (Residue u : pool_) {
        for (Residue w : three_ap_completions(ctx_, x, u)) {
            if (available(w)) ++bound_[u];
        }
    }
}

void APProcess::add_contribution(const APSet& ap, int sign) {
    Residue outside[2] = {0, 0};
    unsigned count = 0;
    for (Residue e : ap.elements) {
        if (in_set(e)) continue;
        if (count == 2) return;
        outside[count++] = e;
    }
    if (count != 2 || !available(outside[0]) || !available(outside[1])) return;
    for (Residue u : outside) bound_[u] = static_cast<std::uint32_t>(static_cast<std::int64_t>(bound_[u]) + sign);
}

void APProcess::update_bounds_generic(Residue x, std::span<const Residue> removed) {
    std::vector<APSet> touched;
    auto collect = [&](Residue z) {
        auto aps = aps_through(ctx_, z);
        touched.insert(touched.end(), std::make_move_iterator(aps.begin()), std::make_move_iterator(aps.end()));
    };
    collect(x);
    for (Residue z : removed) collect(z);
    std::sort(touched.begin(), touched.end());
    touched.erase(std::unique(touched.begin(), touched.end()), touched.end());

    for (const APSet& ap : touched) add_contribution(ap, -1);
    remove_available(x);
    for (Residue z : removed) remove_available(z);
    chosen_.push_back(x);
    in_set_[x] = 1;
    for (const APSet& ap : touched) add_contribution(ap, +1);
}

StepReport APProcess::step() {
    if (pool_.empty()) throw ProcessTerminated("no available residue at step " + std::to_string(step_index()));
    const Residue x = pool_[static_cast<std::size_t>(rng_.below(pool_.size()))];
    StepReport report;
    report.chosen = x;
    report.removed = unavailable_neighbors(x);
    if (ctx_.r() == 3) {
        remove_available(x);
        for (Residue z : report.removed) remove_available(z);
        update_bounds_r3(x, report.removed, chosen_);
        chosen_.push_back(x);
        in_set_[x] = 1;
    } else {
        update_bounds_generic(x, report.removed);
    }
    return report;
}

MonitorConfig default_monitor_config(const APParams& params) {
    MonitorConfig cfg;
    cfg.delta = params.delta;
    cfg.xi = params.xi;
    return cfg;
}

RunResult run(APProcess& process, const MonitorConfig& cfg) {
    if (process.step_index() != 0) throw std::invalid_argument("run: process has already taken steps");
    if (cfg.enabled && cfg.checkpoint_every == 0) throw std::invalid_argument("run: checkpoint_every must be positive");

    RunResult result;
    const RingContext& ctx = process.context();
    const APParams& params = process.params();
    Rng monitor_rng(derive_seed(process.seed(), streams::kMonitor));

    if (cfg.enabled) {
        result.tracked.reserve(cfg.tracked_k);
        for (std::uint32_t j = 0; j < cfg.tracked_k; ++j) {
            const auto a = static_cast<Residue>(monitor_rng.below(ctx.N()));
            const auto d = static_cast<Residue>(1 + monitor_rng.below(ctx.N() - 1));
            result.tracked.push_back(k_ap(ctx, a, d, params.k_eff));
        }
    }

    auto checkpoint = [&] {
        TrajectoryRecord rec = record_checkpoint(process, result.tracked, cfg, monitor_rng);
        const BandFlags& f = rec.flags;
        result.violations.k_band += f.k_band;
        result.violations.s_avail += f.s_avail;
        result.violations.s_nv += f.s_nv;
        result.violations.n_event += f.n_event;
        const bool x_positive = std::any_of(rec.tracked.begin(), rec.tracked.end(),
                                            [](const TrackedQK& q) { return q.x_plus > 0.0 || q.x_minus > 0.0; });
        result.violations.x_positive += x_positive;
        if (f.any() && !result.stopping_time) result.stopping_time = rec.i;
        result.trajectory.push_back(std::move(rec));
    };

    if (cfg.enabled) checkpoint();
    for (std::uint64_t i = 1; i <= params.m; ++i) {
        try {
            process.step();
        } catch (const ProcessTerminated&) {
            result.terminated_early = true;
            break;
        }
        if (cfg.enabled && (i % cfg.checkpoint_every == 0 || i == params.m)) checkpoint();
    }
    if (cfg.enabled && result.terminated_early && result.trajectory.back().i != process.step_index()) checkpoint();

    result.I.assign(process.chosen().begin(), process.chosen().end());
    result.final_available = process.available_count();
    return result;
}

bool is_ap_free(const RingContext& ctx, std::span<const Residue> S) {
    const std::uint32_t N = ctx.N();
    std::vector<Residue> set(S.begin(), S.end());
    std::sort(set.begin(), set.end());
    set.erase(std::unique(set.begin(), set.end()), set.end());
    if (!set.empty() && set.back() >= N) throw std::invalid_argument("is_ap_free: residue out of range");
    if (set.size() < ctx.r()) return true;

    std::vector<std::uint8_t> member(N, 0);
    for (Residue x : set) member[x] = 1;

    if (ctx.r() == 3) {
        for (std::size_t a = 0; a < set.size(); ++a) {
            for (std::size_t b = a + 1; b < set.size(); ++b) {
                for (Residue u : three_ap_completions(ctx, set[a], set[b])) {
                    if (member[u]) return false;
                }
            }
        }
        return true;
    }
    const unsigned r = ctx.r();
    for (Residue x : set) {
        // Every AP containing x has x as its first term for some difference.
        for (std::uint32_t d = 1; d < N; ++d) {
            unsigned t = 1;
            for (; t < r; ++t) {
                if (!member[ctx.add(x, ctx.mul(t, d))]) break;
            }
            if (t == r) return false;
        }
    }
    return true;
}

namespace {

HittingReport finish_report(HittingReport report) {
    report.hit_fraction = report.family_size == 0
                              ? 1.0
                              : 1.0 - static_cast<double>(report.missed.size()) / static_cast<double>(report.family_size);
    return report;
}

std::vector<std::uint8_t> membership(const RingContext& ctx, std::span<const Residue> I) {
    std::vector<std::uint8_t> member(ctx.N(), 0);
    for (Residue x : I) {
        if (x >= ctx.N()) throw std::invalid_argument("hitting_report: residue out of range");
        member[x] = 1;
    }
    return member;
}

}  // namespace

HittingReport hitting_report(const RingContext& ctx, std::span<const Residue> I, std::span<const APSet> family) {
    const auto member = membership(ctx, I);
    HittingReport report;
    report.family_size = family.size();
    for (const APSet& K : family) {
        const bool hit = std::any_of(K.elements.begin(), K.elements.end(), [&](Residue x) { return x < ctx.N() && member[x]; });
        if (!hit) report.missed.push_back(K);
    }
    return finish_report(std::move(report));
}

HittingReport hitting_report(const RingContext& ctx, std::span<const Residue> I, std::span<const Progression> family) {
    const auto member = membership(ctx, I);
    const std::uint32_t N = ctx.N();
    HittingReport report;
    report.family_size = family.size();
    for (const Progression& K : family) {
        std::uint64_t x = K.a % N;
        const std::uint64_t d = K.d % N;
        bool hit = false;
        for (std::uint32_t j = 0; j < K.length && !hit; ++j) {
            hit = member[x] != 0;
            x += d;
            if (x >= N) x -= N;
        }
        if (!hit) report.missed.push_back(k_ap(ctx, K.a, K.d, K.length));
    }
    return finish_report(std::move(report));
}

KAPFamily k_ap_family(std::uint32_t N, std::uint32_t k, std::uint64_t samples, Rng& rng) {
    if (!is_prime(N)) throw std::invalid_argument("k_ap_family: N must be prime");
    if (k < 1 || k > N) throw std::invalid_argument("k_ap_family: need 1 <= k <= N");
    KAPFamily family;
    if (std::uint64_t{N} * N > 10'000'000) {
        family.members.reserve(samples);
        for (std::uint64_t s = 0; s < samples; ++s) {
            const auto a = static_cast<Residue>(rng.below(N));
            const auto d = static_cast<Residue>(1 + rng.below(N - 1));
            family.members.push_back({a, d, k});
        }
        return family;
    }

    family.enumerated = true;
    if (k == N) {
        family.members.push_back({0, 1, N});
    } else if (k == 1) {
        for (Residue a = 0; a < N; ++a) family.members.push_back({a, 1, 1});
    } else if (k == N - 1) {
        for (Residue a = 0; a < N; ++a) family.members.push_back({static_cast<Residue>((a + 1) % N), 1, k});
    } else if (ap_representation_count(N, k) == 2) {
        // The two representations of a set have differences d and -d.
        for (Residue d = 1; d <= (N - 1) / 2; ++d) {
            for (Residue a = 0; a < N; ++a) family.members.push_back({a, d, k});
        }
    } else {
        std::vector<std::pair<APSet, Progression>> all;
        for (Residue d = 1; d < N; ++d) {
            for (Residue a = 0; a < N; ++a) all.push_back({k_ap(N, a, d, k), Progression{a, d, k}});
        }
        std::sort(all.begin(), all.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
        for (std::size_t j = 0; j < all.size(); ++j) {
            if (j == 0 || all[j].first != all[j - 1].first) family.members.push_back(all[j].second);
        }
    }
    return family;
}

}  // namespace randgreedy
