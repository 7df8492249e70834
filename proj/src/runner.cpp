#include "randgreedy/runner.hpp"

#include <cmath>
#include <sstream>

#include "randgreedy/io.hpp"

namespace randgreedy {

using nlohmann::json;

ApfreeOutcome run_apfree(const RunConfig& cfg, std::uint64_t seed) {
    const std::int64_t r = cfg.get_int("r");
    if (r < 3) throw std::invalid_argument("r must be at least 3");
    const std::int64_t N = cfg.get_int("N");
    if (N < 2) throw std::invalid_argument("N must be a prime");
    RingContext ctx = make_context(static_cast<std::uint64_t>(N), static_cast<unsigned>(r));
    const ParamMode mode = parse_param_mode(cfg.get_string("mode"));
    const APParams params =
        mode == ParamMode::paper ? paper_params(ctx) : make_ap_params(ctx, cfg.get_double("xi"), cfg.get_double("delta"));

    MonitorConfig mon = default_monitor_config(params);
    mon.checkpoint_every = cfg.get_uint("checkpoint_every");
    mon.tracked_k = static_cast<std::uint32_t>(cfg.get_uint("tracked_k"));
    mon.sampled_v = static_cast<std::uint32_t>(cfg.get_uint("sampled_v"));
    mon.enabled = cfg.get_bool("monitor");
    if (mon.enabled && mon.checkpoint_every == 0) throw std::invalid_argument("checkpoint_every must be positive");

    const std::uint64_t k_requested = cfg.get_uint("k");
    const auto k_hit = static_cast<std::uint32_t>(
        k_requested == 0 ? params.k_eff : std::min<std::uint64_t>(k_requested, ctx.N()));

    ApfreeOutcome out;
    out.params = params;
    const json ring{{"N", ctx.N()},
                    {"r", ctx.r()},
                    {"totalAPs", ctx.total_aps()},
                    {"D", ctx.degree()},
                    {"representations", ctx.representations()}};

    APProcess process(ctx, params, seed);
    out.bands = band_context(process, mon);
    out.result = run(process, mon);

    Rng hit_rng(derive_seed(seed, streams::kHitting));
    const KAPFamily family = k_ap_family(ctx.N(), k_hit, cfg.get_uint("hitting_samples"), hit_rng);
    out.hitting = hitting_report(ctx, out.result.I, std::span<const Progression>(family.members));
    out.summary = summary_row(out.result, seed, out.hitting.hit_fraction);

    const json modes{{"paramMode", to_string(params.mode)},
                     {"xiInAsymptoticRange", params.xi_in_asymptotic_range},
                     {"kClamped", params.k_clamped},
                     {"nvMonitoring", "sampled"},
                     {"hittingFamily", family.enumerated ? "enumerated" : "sampled"}};
    json header = output_header("apfree-transcript", cfg, seed, modes);
    header["ring"] = ring;
    header["params"] = {{"xi", params.xi},     {"delta", params.delta}, {"m", params.m},
                        {"k", params.k},       {"kEff", params.k_eff},  {"M", params.M},
                        {"C_k", params.C_k},   {"kHit", k_hit}};
    header["bands"] = to_json(out.bands);

    std::ostringstream transcript;
    transcript << header.dump() << '\n';
    for (const TrajectoryRecord& rec : out.result.trajectory) transcript << to_json(rec).dump() << '\n';
    json summary = to_json(out.summary);
    summary["familySize"] = out.hitting.family_size;
    summary["missed"] = out.hitting.missed.size();
    transcript << summary.dump() << '\n';
    out.transcript = transcript.str();

    json iheader = output_header("apfree-set", cfg, seed, modes);
    iheader["ring"] = ring;
    std::ostringstream residues;
    write_residues(residues, out.result.I, iheader);
    out.residues = residues.str();
    return out;
}

TrifreeOutcome run_trifree(const RunConfig& cfg, std::uint64_t seed) {
    const std::int64_t n = cfg.get_int("n");
    if (n < 4 || n > static_cast<std::int64_t>(kMaxTriFreeVertices)) {
        throw std::invalid_argument("n must lie in [4, " + std::to_string(kMaxTriFreeVertices) + "]");
    }
    TrifreeOutcome out;
    out.params = make_trifree_params(static_cast<Vertex>(n), cfg.get_double("beta"));
    TriMonitorConfig mon;
    mon.check_triangles = cfg.get_bool("check_triangles");
    mon.event_samples = cfg.get_uint("event_samples");
    out.run = run_trifree(out.params, seed, mon);
    out.stats = graph_stats(out.run.H);

    const TriFreeParams& p = out.params;
    const double nd = p.n;
    const double pairs = nd * (nd - 1) / 2.0;
    const double edge_target = (1.0 - 2.0 * p.delta) * pairs * p.rho;
    const double degree_cap = (2.0 + p.delta) * nd * p.rho;
    const json modes{{"deletionRule", "greedy-shuffled"},
                     {"extraRemoval", "calibrated-independent"},
                     {"qRecursion", "heuristic"},
                     {"tstarVacuous", out.run.events.tstar_vacuous},
                     {"sExceedsN", p.s_exceeds_n}};
    json header = output_header("trifree", cfg, seed, modes);
    header["params"] = to_json(p);

    out.summary = {{"type", "summary"},
                   {"seed", seed},
                   {"n", p.n},
                   {"steps", p.steps},
                   {"edges", out.stats.edges},
                   {"minDegree", out.stats.min_degree},
                   {"maxDegree", out.stats.max_degree},
                   {"triangleFree", out.stats.triangle_free},
                   {"alwaysTriangleFree", out.run.always_triangle_free},
                   {"edgeTarget", edge_target},
                   {"edgeRatio", static_cast<double>(out.stats.edges) / edge_target},
                   {"degreeCap", degree_cap},
                   {"degreeRatio", out.stats.max_degree / degree_cap},
                   {"events", to_json(out.run.events)}};

    std::ostringstream trajectory;
    trajectory << header.dump() << '\n';
    for (const TriStepRecord& rec : out.run.trajectory) trajectory << to_json(rec).dump() << '\n';
    trajectory << out.summary.dump() << '\n';
    out.trajectory = trajectory.str();

    json gheader = header;
    gheader["events"] = to_json(out.run.events);
    gheader["stepCount"] = p.steps;
    std::ostringstream graph;
    write_edge_list(graph, out.run.H, gheader);
    out.graph = graph.str();
    return out;
}

}  // namespace randgreedy
