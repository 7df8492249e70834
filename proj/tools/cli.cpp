#include "cli.hpp"

#include <atomic>
#include <cmath>
#include <exception>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <optional>
#include <ostream>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "randgreedy/apfree.hpp"
#include "randgreedy/bipartite.hpp"
#include "randgreedy/config.hpp"
#include "randgreedy/dem.hpp"
#include "randgreedy/io.hpp"
#include "randgreedy/runner.hpp"
#include "randgreedy/trifree.hpp"
#include "randgreedy/vdw.hpp"

namespace randgreedy::cli {
namespace {

using nlohmann::json;
namespace fs = std::filesystem;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Overrides {
    std::map<std::string, std::string> values;
    std::string config_path;
};

const std::string& key_help(const std::string& key) {
    for (const auto& k : RunConfig::keys()) {
        if (k.name == key) return k.help;
    }
    throw std::logic_error("unknown config key " + key);
}

void bind(CLI::App* app, Overrides& o, std::initializer_list<const char*> keys) {
    for (const char* raw : keys) {
        const std::string key = raw;
        std::string names = "--" + key;
        std::string dashed = key;
        std::replace(dashed.begin(), dashed.end(), '_', '-');
        if (dashed != key) names += ",--" + dashed;
        app->add_option_function<std::string>(
            names, [&o, key](const std::string& v) { o.values[key] = v; }, key_help(key));
    }
    app->add_option("--config", o.config_path, "key=value configuration file");
}

RunConfig effective(const Overrides& o) {
    try {
        RunConfig cfg = o.config_path.empty() ? RunConfig{} : load_config(o.config_path);
        for (const auto& [k, v] : o.values) cfg.set(k, v);
        return cfg;
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
}

std::vector<std::uint64_t> seeds_of(const RunConfig& cfg) {
    const std::uint64_t repeat = cfg.get_uint("repeat");
    if (repeat == 0) throw UsageError("repeat must be at least 1");
    const std::uint64_t seed = cfg.get_uint("seed");
    std::vector<std::uint64_t> seeds(repeat);
    for (std::uint64_t j = 0; j < repeat; ++j) seeds[j] = seed + j;
    return seeds;
}

// Runs fn(seed) for every seed on `jobs` workers; results keep seed order.
template <class Fn>
auto for_seeds(const std::vector<std::uint64_t>& seeds, std::uint64_t jobs, Fn fn) {
    using Result = decltype(fn(seeds.front()));
    std::vector<std::optional<Result>> results(seeds.size());
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
        for (std::size_t j = next++; j < seeds.size(); j = next++) {
            try {
                results[j] = fn(seeds[j]);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
            }
        }
    };
    const std::size_t workers = std::max<std::uint64_t>(1, std::min<std::uint64_t>(jobs, seeds.size()));
    if (workers == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    if (failure) std::rethrow_exception(failure);
    std::vector<Result> out;
    out.reserve(results.size());
    for (auto& r : results) out.push_back(std::move(*r));
    return out;
}

fs::path output_dir(const RunConfig& cfg) {
    fs::path dir = cfg.get_string("output_dir");
    fs::create_directories(dir);
    return dir;
}

std::string format_of(const RunConfig& cfg) {
    const std::string& f = cfg.get_string("format");
    if (f != "json" && f != "csv") throw UsageError("format must be json or csv");
    return f;
}

std::string csv_of(const json& rows, const std::vector<std::string>& columns) {
    std::ostringstream out;
    for (std::size_t c = 0; c < columns.size(); ++c) out << (c ? "," : "") << columns[c];
    out << '\n';
    for (const auto& row : rows) {
        for (std::size_t c = 0; c < columns.size(); ++c) {
            if (c) out << ',';
            const json& v = row.contains(columns[c]) ? row[columns[c]] : json(nullptr);
            if (v.is_null()) continue;
            if (v.is_boolean()) {
                out << (v.get<bool>() ? 1 : 0);
            } else if (v.is_string()) {
                out << v.get<std::string>();
            } else {
                out << v.dump();
            }
        }
        out << '\n';
    }
    return out.str();
}

int apfree_run(const Overrides& o, std::ostream& out) {
    const RunConfig cfg = effective(o);
    const std::string format = format_of(cfg);
    const fs::path dir = output_dir(cfg);
    struct Row {
        RunSummaryRow summary;
        bool ap_free;
    };
    const auto rows = for_seeds(seeds_of(cfg), cfg.get_uint("jobs"), [&](std::uint64_t seed) {
        ApfreeOutcome run = run_apfree(cfg, seed);
        const std::string stem = "apfree_N" + std::to_string(cfg.get_int("N")) + "_seed" + std::to_string(seed);
        write_file((dir / (stem + ".jsonl")).string(), run.transcript);
        write_file((dir / (stem + ".I.txt")).string(), run.residues);
        const RingContext ctx = make_context(static_cast<std::uint64_t>(cfg.get_int("N")), static_cast<unsigned>(cfg.get_int("r")));
        return Row{run.summary, is_ap_free(ctx, run.result.I)};
    });
    std::vector<RunSummaryRow> summaries;
    bool all_free = true;
    for (const Row& r : rows) {
        summaries.push_back(r.summary);
        all_free = all_free && r.ap_free;
    }
    const std::string text = format == "csv" ? summary_csv(summaries) : summary_json(summaries).dump(2) + "\n";
    write_file((dir / ("apfree_summary." + format)).string(), text);
    out << text;
    return all_free ? kExitOk : kExitVerifyFailed;
}

int apfree_verify(const Overrides& o, const std::string& input, std::ostream& out) {
    RunConfig cfg = effective(o);
    std::ifstream in(input);
    if (!in) throw UsageError("cannot open '" + input + "'");
    const ResidueFile file = read_residues(in);
    // N and r default to the ring recorded in the file header.
    if (file.header.contains("ring")) {
        if (!o.values.count("N")) cfg.set("N", std::to_string(file.header["ring"].value("N", 0)));
        if (!o.values.count("r")) cfg.set("r", std::to_string(file.header["ring"].value("r", 3)));
    }
    const RingContext ctx = make_context(cfg.get_uint("N"), static_cast<unsigned>(cfg.get_uint("r")));
    for (Residue x : file.residues) {
        if (x >= ctx.N()) {
            out << json{{"apFree", false}, {"error", "residue " + std::to_string(x) + " outside Z/NZ"}}.dump(2) << '\n';
            return kExitVerifyFailed;
        }
    }
    const bool free = is_ap_free(ctx, file.residues);
    const APParams params = make_ap_params(ctx, cfg.get_double("xi"), cfg.get_double("delta"));
    const std::uint64_t k_requested = cfg.get_uint("k");
    const auto k = static_cast<std::uint32_t>(k_requested == 0 ? params.k_eff : std::min<std::uint64_t>(k_requested, ctx.N()));
    Rng rng(derive_seed(cfg.get_uint("seed"), streams::kHitting));
    const KAPFamily family = k_ap_family(ctx.N(), k, cfg.get_uint("hitting_samples"), rng);
    const HittingReport hit = hitting_report(ctx, file.residues, std::span<const Progression>(family.members));
    out << json{{"N", ctx.N()},
                {"r", ctx.r()},
                {"size", file.residues.size()},
                {"apFree", free},
                {"k", k},
                {"familySize", hit.family_size},
                {"familyEnumerated", family.enumerated},
                {"missed", hit.missed.size()},
                {"hitFraction", hit.hit_fraction}}
               .dump(2)
        << '\n';
    return free && hit.missed.empty() ? kExitOk : kExitVerifyFailed;
}

json ap_json(const std::optional<IntegerAP>& ap) {
    if (!ap) return nullptr;
    return json{{"a", ap->a}, {"d", ap->d}, {"length", ap->length}, {"terms", ap->terms()}};
}

json verdict_json(const VdwVerdict& v) {
    return json{{"redAP", ap_json(v.red_ap)}, {"blueAP", ap_json(v.blue_ap)}, {"longestBlueAP", v.longest_blue}};
}

int vdw_witness(const Overrides& o, std::ostream& out) {
    const RunConfig cfg = effective(o);
    const std::string format = format_of(cfg);
    const fs::path dir = output_dir(cfg);
    const auto r = static_cast<unsigned>(cfg.get_uint("r"));
    WitnessOptions opts;
    opts.xi = cfg.get_double("xi");
    opts.delta = cfg.get_double("delta");
    opts.mode = parse_param_mode(cfg.get_string("mode"));
    if (cfg.get_double("C") > 0) opts.C = cfg.get_double("C");
    opts.N0 = cfg.get_uint("N0");
    std::uint64_t k = cfg.get_uint("k");
    if (k == 0) {
        const RingContext ctx = make_context(cfg.get_uint("N"), r);
        k = make_ap_params(ctx, opts.xi, opts.delta).k;
    }
    const auto rows = for_seeds(seeds_of(cfg), cfg.get_uint("jobs"), [&](std::uint64_t seed) {
        const WitnessResult w = lower_bound_witness(r, k, opts, seed);
        const double logk = std::log(static_cast<double>(k));
        const double ratio = static_cast<double>(w.n) * std::pow(logk, r - 2.0) / std::pow(static_cast<double>(k), r - 1.0);
        json row{{"seed", seed},
                 {"r", r},
                 {"k", k},
                 {"C", w.C},
                 {"N", w.N},
                 {"n", w.n},
                 {"redCount", w.coloring.red.size()},
                 {"success", w.success},
                 {"terminatedEarly", w.terminated_early},
                 {"longestBlueAP", w.verdict.longest_blue},
                 {"hasRedAP", w.verdict.red_ap.has_value()},
                 {"ratio", ratio}};
        json header = output_header("vdw-coloring", cfg, seed, json{{"paramMode", to_string(opts.mode)}});
        header["witness"] = row;
        header["verdict"] = verdict_json(w.verdict);
        std::ostringstream file;
        file << "# " << header.dump() << '\n';
        write_coloring(file, w.coloring);
        write_file((dir / ("vdw_r" + std::to_string(r) + "_k" + std::to_string(k) + "_seed" + std::to_string(seed) +
                           ".coloring.txt"))
                       .string(),
                   file.str());
        return row;
    });
    json all = json::array();
    bool ok = true;
    for (const json& row : rows) {
        all.push_back(row);
        ok = ok && row["success"].get<bool>();
    }
    out << (format == "csv" ? csv_of(all, {"seed", "r", "k", "C", "N", "n", "redCount", "success", "terminatedEarly",
                                           "longestBlueAP", "hasRedAP", "ratio"})
                            : all.dump(2) + "\n");
    return ok ? kExitOk : kExitVerifyFailed;
}

int vdw_exact(const Overrides& o, std::ostream& out) {
    const RunConfig cfg = effective(o);
    const fs::path dir = output_dir(cfg);
    const std::uint64_t r = cfg.get_uint("r");
    const std::uint64_t k = cfg.get_uint("k");
    if (k < 2) throw UsageError("vdw exact needs --k >= 2");
    const ExactVdwResult res = exact_vdw(r, k, cfg.get_uint("nmax"));
    const VdwVerdict check = check_coloring(res.certificate, r, k);
    const bool clean = !check.red_ap && !check.blue_ap;
    json header = output_header("vdw-certificate", cfg, cfg.get_uint("seed"), json::object());
    header["value"] = res.value ? json(*res.value) : json(nullptr);
    std::ostringstream file;
    file << "# " << header.dump() << '\n';
    write_coloring(file, res.certificate);
    const fs::path path = dir / ("vdw_exact_r" + std::to_string(r) + "_k" + std::to_string(k) + ".coloring.txt");
    write_file(path.string(), file.str());
    out << json{{"r", r},
                {"k", k},
                {"value", res.value ? json(*res.value) : json(nullptr)},
                {"exceedsBound", res.exceeds_bound},
                {"nodes", res.nodes},
                {"certificate", {{"n", res.certificate.n}, {"red", res.certificate.red}}},
                {"certificateClean", clean},
                {"certificateFile", path.string()}}
               .dump(2)
        << '\n';
    return res.value && clean ? kExitOk : kExitVerifyFailed;
}

int vdw_check(const Overrides& o, const std::string& input, std::ostream& out) {
    const RunConfig cfg = effective(o);
    std::ifstream in(input);
    if (!in) throw UsageError("cannot open '" + input + "'");
    const Coloring c = read_coloring(in);
    const std::uint64_t r = cfg.get_uint("r");
    const std::uint64_t k = cfg.get_uint("k");
    if (k < 2) throw UsageError("vdw check needs --k >= 2");
    const VdwVerdict v = check_coloring(c, r, k);
    json report = verdict_json(v);
    report["n"] = c.n;
    report["r"] = r;
    report["k"] = k;
    report["clean"] = !v.red_ap && !v.blue_ap;
    out << report.dump(2) << '\n';
    return !v.red_ap && !v.blue_ap ? kExitOk : kExitVerifyFailed;
}

int trifree_run(const Overrides& o, std::ostream& out) {
    const RunConfig cfg = effective(o);
    const std::string format = format_of(cfg);
    const fs::path dir = output_dir(cfg);
    const auto rows = for_seeds(seeds_of(cfg), cfg.get_uint("jobs"), [&](std::uint64_t seed) {
        TrifreeOutcome run = run_trifree(cfg, seed);
        const std::string stem = "trifree_n" + std::to_string(cfg.get_int("n")) + "_seed" + std::to_string(seed);
        write_file((dir / (stem + ".jsonl")).string(), run.trajectory);
        write_file((dir / (stem + ".edges.txt")).string(), run.graph);
        return run.summary;
    });
    json all = json::array();
    bool ok = true;
    for (const json& row : rows) {
        json flat = row;
        flat.erase("type");
        const json events = flat["events"];
        flat.erase("events");
        flat["tplusViolations"] = events["tplusViolations"];
        flat["nEventAllSteps"] = events["nEventAllSteps"];
        all.push_back(flat);
        ok = ok && row["alwaysTriangleFree"].get<bool>();
    }
    const std::string text =
        format == "csv" ? csv_of(all, {"seed", "n", "steps", "edges", "minDegree", "maxDegree", "triangleFree",
                                       "alwaysTriangleFree", "edgeRatio", "degreeRatio", "tplusViolations",
                                       "nEventAllSteps"})
                        : all.dump(2) + "\n";
    write_file((dir / ("trifree_summary." + format)).string(), text);
    out << text;
    return ok ? kExitOk : kExitVerifyFailed;
}

int trifree_analyze(const Overrides& o, const std::string& input, std::ostream& out) {
    RunConfig cfg = effective(o);
    std::ifstream in(input);
    if (!in) throw UsageError("cannot open '" + input + "'");
    const EdgeListFile file = read_edge_list(in);
    if (!o.values.count("beta") && file.header.contains("params") && file.header["params"].contains("beta")) {
        cfg.set("beta", file.header["params"]["beta"].dump());
    }
    const TriFreeParams params = make_trifree_params(file.graph.n(), cfg.get_double("beta"));
    Rng rng(derive_seed(cfg.get_uint("seed"), streams::kEvents));
    const EventReport events = event_checks(file.graph, params, cfg.get_uint("event_samples"), rng);
    const GraphStats stats = graph_stats(file.graph);
    const double nd = params.n;
    out << json{{"n", params.n},
                {"edges", stats.edges},
                {"minDegree", stats.min_degree},
                {"maxDegree", stats.max_degree},
                {"triangleFree", stats.triangle_free},
                {"edgeRatio", stats.edges / ((1.0 - 2.0 * params.delta) * nd * (nd - 1) / 2.0 * params.rho)},
                {"degreeRatio", stats.max_degree / ((2.0 + params.delta) * nd * params.rho)},
                {"params", to_json(params)},
                {"events", to_json(events)}}
               .dump(2)
        << '\n';
    return stats.triangle_free ? kExitOk : kExitVerifyFailed;
}

int gnd_witness(const Overrides& o, std::ostream& out) {
    const RunConfig cfg = effective(o);
    const fs::path dir = output_dir(cfg);
    const std::uint64_t n = cfg.get_uint("n");
    const std::uint64_t d = cfg.get_uint("d");
    if (d == 0) throw UsageError("gnd witness needs --d");
    GndOptions opts;
    opts.mode = parse_gnd_mode(cfg.get_string("gnd_mode"));
    opts.heuristic_tries = static_cast<std::uint32_t>(cfg.get_uint("heuristic_tries"));
    opts.seed = cfg.get_uint("seed");
    const std::string& source_name = cfg.get_string("gnd_source");
    GraphSource source;
    if (source_name == "trifree") {
        source = trifree_source(opts.constants.beta, derive_seed(opts.seed, streams::kProcess));
    } else if (source_name == "cayley") {
        source = cayley_source(cfg.get_double("cayley_c0"), opts.constants.beta);
    } else {
        throw UsageError("gnd_source must be trifree or cayley");
    }
    const GndWitness w = build_gnd_witness(n, d, source, opts);
    json meta = to_json(w);
    meta["source"] = source_name;
    if (w.built) {
        json header = output_header("gnd-witness", cfg, opts.seed, json{{"gndMode", to_string(opts.mode)}, {"source", source_name}});
        header["witness"] = meta;
        std::ostringstream file;
        write_edge_list(file, w.graph, header);
        const fs::path path = dir / ("gnd_n" + std::to_string(n) + "_d" + std::to_string(d) + ".edges.txt");
        write_file(path.string(), file.str());
        meta["graphFile"] = path.string();
    }
    out << meta.dump(2) << '\n';
    return w.verified() ? kExitOk : kExitVerifyFailed;
}

int dem_summary(const Overrides& o, const std::vector<std::string>& inputs, std::ostream& out) {
    const RunConfig cfg = effective(o);
    const std::string format = format_of(cfg);
    std::vector<RunSummaryRow> rows;
    std::uint64_t mismatches = 0;
    for (const std::string& path : inputs) {
        const std::string text = read_file(path);
        std::istringstream a(text);
        std::istringstream b(text);
        try {
            rows.push_back(summarize_transcript(a));
            mismatches += count_flag_mismatches(b);
        } catch (const std::runtime_error& e) {
            throw std::runtime_error(path + ": " + e.what());
        }
    }
    if (format == "csv") {
        out << summary_csv(rows);
    } else {
        json doc{{"runs", summary_json(rows)}, {"flagMismatches", mismatches}};
        out << doc.dump(2) << '\n';
    }
    return mismatches == 0 ? kExitOk : kExitVerifyFailed;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Random greedy processes: AP-free sets, van der Waerden witnesses, triangle-free graphs"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(kVersion));

    Overrides o;
    std::string input;
    std::vector<std::string> inputs;
    int code = kExitOk;
    std::function<int()> action;

    auto* apfree = app.add_subcommand("apfree", "random greedy r-AP-free process");
    apfree->require_subcommand(1);
    auto* apfree_run_cmd = apfree->add_subcommand("run", "run the process and write transcripts and I-files");
    bind(apfree_run_cmd, o,
         {"seed", "repeat", "jobs", "output_dir", "format", "N", "r", "xi", "delta", "mode", "checkpoint_every", "tracked_k",
          "sampled_v", "monitor", "hitting_samples", "k"});
    apfree_run_cmd->callback([&] { action = [&] { return apfree_run(o, out); }; });
    auto* apfree_verify_cmd = apfree->add_subcommand("verify", "re-check a stored I for AP-freeness and hitting");
    bind(apfree_verify_cmd, o, {"seed", "N", "r", "xi", "delta", "k", "hitting_samples"});
    apfree_verify_cmd->add_option("--input,-i", input, "I-file")->required();
    apfree_verify_cmd->callback([&] { action = [&] { return apfree_verify(o, input, out); }; });

    auto* vdw = app.add_subcommand("vdw", "van der Waerden witnesses and exact values");
    vdw->require_subcommand(1);
    auto* vdw_witness_cmd = vdw->add_subcommand("witness", "coloring of [N-1] from an AP-free run");
    bind(vdw_witness_cmd, o,
         {"seed", "repeat", "jobs", "output_dir", "format", "r", "k", "N", "xi", "delta", "mode", "C", "N0"});
    vdw_witness_cmd->callback([&] { action = [&] { return vdw_witness(o, out); }; });
    auto* vdw_exact_cmd = vdw->add_subcommand("exact", "exact W(r,k) by backtracking");
    bind(vdw_exact_cmd, o, {"r", "k", "nmax", "output_dir"});
    vdw_exact_cmd->callback([&] { action = [&] { return vdw_exact(o, out); }; });
    auto* vdw_check_cmd = vdw->add_subcommand("check", "scan a coloring file for monochromatic APs");
    bind(vdw_check_cmd, o, {"r", "k"});
    vdw_check_cmd->add_option("--input,-i", input, "coloring file")->required();
    vdw_check_cmd->callback([&] { action = [&] { return vdw_check(o, input, out); }; });

    auto* tri = app.add_subcommand("trifree", "semi-random triangle-free process");
    tri->require_subcommand(1);
    auto* tri_run_cmd = tri->add_subcommand("run", "run the process and write graphs and trajectories");
    bind(tri_run_cmd, o, {"seed", "repeat", "jobs", "output_dir", "format", "n", "beta", "check_triangles", "event_samples"});
    tri_run_cmd->callback([&] { action = [&] { return trifree_run(o, out); }; });
    auto* tri_analyze_cmd = tri->add_subcommand("analyze", "event checks on a stored graph");
    bind(tri_analyze_cmd, o, {"seed", "beta", "event_samples"});
    tri_analyze_cmd->add_option("--input,-i", input, "edge-list file")->required();
    tri_analyze_cmd->callback([&] { action = [&] { return trifree_analyze(o, input, out); }; });

    auto* gnd = app.add_subcommand("gnd", "g(n,d) upper-bound constructions");
    gnd->require_subcommand(1);
    auto* gnd_witness_cmd = gnd->add_subcommand("witness", "build and verify a triangle-free witness graph");
    bind(gnd_witness_cmd, o, {"seed", "output_dir", "n", "d", "gnd_mode", "gnd_source", "cayley_c0", "heuristic_tries"});
    gnd_witness_cmd->callback([&] { action = [&] { return gnd_witness(o, out); }; });

    auto* dem = app.add_subcommand("dem", "trajectory transcripts");
    dem->require_subcommand(1);
    auto* dem_summary_cmd = dem->add_subcommand("summary", "summarize transcripts and replay band flags");
    bind(dem_summary_cmd, o, {"format"});
    dem_summary_cmd->add_option("--input,-i", inputs, "transcript files")->required();
    dem_summary_cmd->callback([&] { action = [&] { return dem_summary(o, inputs, out); }; });

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return kExitUsage;
    }

    try {
        code = action ? action() : kExitUsage;
    } catch (const UsageError& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    }
    return code;
}

}  // namespace randgreedy::cli
