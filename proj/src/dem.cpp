#include "randgreedy/dem.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace randgreedy {

using nlohmann::json;

double pow_int(double base, unsigned exp) {
    double result = 1.0;
    while (exp > 0) {
        if (exp & 1u) result *= base;
        base *= base;
        exp >>= 1;
    }
    return result;
}

double q_t(unsigned r, double t) {
    return std::exp(-pow_int(t, r - 1));
}

double q_prime(unsigned r, double t) {
    return -static_cast<double>(r - 1) * pow_int(t, r - 2) * q_t(r, t);
}

double s2_t(unsigned r, double D, double t) {
    return static_cast<double>(r - 1) * std::pow(D, 1.0 / (r - 1)) * pow_int(t, r - 2) * q_t(r, t);
}

double s2_t(const RingContext& ctx, double t) {
    return s2_t(ctx.r(), static_cast<double>(ctx.degree()), t);
}

double err_t(unsigned r, double D, double delta, double t) {
    return std::exp(5.0 * (t + pow_int(t, r - 1))) * std::pow(D, -delta);
}

double err_t(const RingContext& ctx, double delta, double t) {
    return err_t(ctx.r(), static_cast<double>(ctx.degree()), delta, t);
}

BandContext band_context(const APProcess& process, const MonitorConfig& cfg) {
    const RingContext& ctx = process.context();
    return BandContext{ctx.N(), ctx.r(), ctx.degree(), cfg.delta, process.params().k_eff};
}

BandFlags evaluate_flags(const TrajectoryRecord& rec, const BandContext& bands) {
    const double D = static_cast<double>(bands.D);
    const double q = q_t(bands.r, rec.t);
    const double e = err_t(bands.r, D, bands.delta, rec.t);
    const double s2 = s2_t(bands.r, D, rec.t);
    const double root = 1.0 / (bands.r - 1);
    const double kq = bands.k * q;
    const double Nq = bands.N * q;

    BandFlags f;
    f.k_band = std::any_of(rec.tracked.begin(), rec.tracked.end(), [&](const TrackedQK& K) {
        return std::abs(static_cast<double>(K.available) - kq) > kq * e;
    });
    f.s_avail = std::abs(static_cast<double>(rec.avail_count) - Nq) > Nq * std::pow(D, -bands.delta);
    const double nv_width = std::pow(D, root - bands.delta);
    f.s_nv = std::any_of(rec.sampled_nv.begin(), rec.sampled_nv.end(),
                         [&](std::uint32_t nv) { return std::abs(static_cast<double>(nv) - s2) > nv_width; });
    const double n_cap = std::pow(D, root - 3.0 * bands.delta);
    f.n_event = std::any_of(rec.tracked.begin(), rec.tracked.end(),
                            [&](const TrackedQK& K) { return static_cast<double>(K.max_nv_in_k) > n_cap; });
    return f;
}

namespace {

std::vector<Residue> sample_available(const APProcess& process, std::uint32_t count, Rng& rng) {
    auto pool = process.available_residues();
    std::vector<Residue> picked(pool.begin(), pool.end());
    if (picked.size() > count) {
        for (std::size_t j = 0; j < count; ++j) {
            const auto at = j + static_cast<std::size_t>(rng.below(picked.size() - j));
            std::swap(picked[j], picked[at]);
        }
        picked.resize(count);
    }
    std::sort(picked.begin(), picked.end());
    return picked;
}

}  // namespace

TrajectoryRecord record_checkpoint(const APProcess& process, std::span<const APSet> tracked, const MonitorConfig& cfg,
                                   Rng& rng) {
    const RingContext& ctx = process.context();
    const APParams& params = process.params();
    const BandContext bands = band_context(process, cfg);

    TrajectoryRecord rec;
    rec.i = process.step_index();
    rec.t = static_cast<double>(rec.i) / params.M;
    rec.avail_count = process.available_count();
    rec.q = q_t(ctx.r(), rec.t);
    rec.predicted_avail = ctx.N() * rec.q;
    rec.err = err_t(ctx, cfg.delta, rec.t);
    rec.s2 = s2_t(ctx, rec.t);

    rec.sampled_v = sample_available(process, cfg.sampled_v, rng);
    std::vector<std::vector<Residue>> neighborhoods;
    neighborhoods.reserve(rec.sampled_v.size());
    for (Residue v : rec.sampled_v) {
        neighborhoods.push_back(process.unavailable_neighbors(v));
        const auto nv = static_cast<std::uint32_t>(neighborhoods.back().size());
        rec.sampled_nv.push_back(nv);
        const double dev = static_cast<double>(nv) - rec.s2;
        rec.nv_deviations.push_back(dev);
        rec.max_nv_deviation = std::max(rec.max_nv_deviation, std::abs(dev));
    }
    for (Residue u : process.available_residues()) {
        rec.multiset_bound_max = std::max(rec.multiset_bound_max, process.multiset_bound(u));
    }

    const double kq = bands.k * rec.q;
    for (const APSet& K : tracked) {
        TrackedQK entry;
        entry.available = static_cast<std::uint64_t>(
            std::count_if(K.elements.begin(), K.elements.end(), [&](Residue x) { return process.available(x); }));
        entry.predicted = kq;
        entry.x_plus = (static_cast<double>(entry.available) - kq) - kq * rec.err;
        entry.x_minus = (kq - static_cast<double>(entry.available)) - kq * rec.err;
        for (const auto& nv : neighborhoods) {
            const auto inside = static_cast<std::uint32_t>(
                std::count_if(nv.begin(), nv.end(), [&](Residue u) { return K.contains(u); }));
            entry.max_nv_in_k = std::max(entry.max_nv_in_k, inside);
        }
        rec.tracked.push_back(entry);
    }
    rec.flags = evaluate_flags(rec, bands);
    return rec;
}

ChangeAudit expected_change_audit(const APProcess& process, const APSet& K, std::uint32_t sample_limit, Rng& rng) {
    const RingContext& ctx = process.context();
    const APParams& params = process.params();
    const unsigned r = ctx.r();
    const double t = static_cast<double>(process.step_index()) / params.M;
    const double D = static_cast<double>(ctx.degree());
    const double k = static_cast<double>(K.size());

    ChangeAudit audit;
    audit.predicted = k * q_prime(r, t) / params.M;
    audit.error_term = (4.0 * (r - 1) * pow_int(t, r - 2) * q_t(r, t) * err_t(r, D, params.delta, t) +
                        4.0 * std::pow(D, -params.delta)) *
                       k / params.M;

    std::vector<Residue> Q;
    for (Residue x : K.elements) {
        if (process.available(x)) Q.push_back(x);
    }
    if (Q.empty() || process.available_count() == 0) return audit;

    double total = 0.0;
    if (Q.size() <= sample_limit) {
        for (Residue v : Q) total += static_cast<double>(process.unavailable_neighbors(v).size() + 1);
    } else {
        audit.exact = false;
        double sampled = 0.0;
        for (std::uint32_t s = 0; s < sample_limit; ++s) {
            const Residue v = Q[static_cast<std::size_t>(rng.below(Q.size()))];
            sampled += static_cast<double>(process.unavailable_neighbors(v).size() + 1);
        }
        total = sampled * static_cast<double>(Q.size()) / sample_limit;
    }
    audit.empirical = -total / static_cast<double>(process.available_count());
    return audit;
}

json to_json(const TrajectoryRecord& rec) {
    json tracked = json::array();
    for (const TrackedQK& K : rec.tracked) {
        tracked.push_back({{"available", K.available},
                           {"predicted", K.predicted},
                           {"xPlus", K.x_plus},
                           {"xMinus", K.x_minus},
                           {"maxNvInK", K.max_nv_in_k}});
    }
    return json{{"type", "checkpoint"},
                {"i", rec.i},
                {"t", rec.t},
                {"availCount", rec.avail_count},
                {"predictedAvail", rec.predicted_avail},
                {"q", rec.q},
                {"err", rec.err},
                {"s2", rec.s2},
                {"sampledV", rec.sampled_v},
                {"sampledNv", rec.sampled_nv},
                {"sampledNvDeviations", rec.nv_deviations},
                {"sampledMaxNvDeviation", rec.max_nv_deviation},
                {"multisetBoundMax", rec.multiset_bound_max},
                {"trackedQK", tracked},
                {"bandFlags",
                 {{"kBand", rec.flags.k_band},
                  {"sAvail", rec.flags.s_avail},
                  {"sNv", rec.flags.s_nv},
                  {"nEvent", rec.flags.n_event}}}};
}

TrajectoryRecord record_from_json(const json& j) {
    TrajectoryRecord rec;
    rec.i = j.at("i").get<std::uint64_t>();
    rec.t = j.at("t").get<double>();
    rec.avail_count = j.at("availCount").get<std::uint64_t>();
    rec.predicted_avail = j.at("predictedAvail").get<double>();
    rec.q = j.at("q").get<double>();
    rec.err = j.at("err").get<double>();
    rec.s2 = j.at("s2").get<double>();
    rec.sampled_v = j.at("sampledV").get<std::vector<Residue>>();
    rec.sampled_nv = j.at("sampledNv").get<std::vector<std::uint32_t>>();
    rec.nv_deviations = j.at("sampledNvDeviations").get<std::vector<double>>();
    rec.max_nv_deviation = j.at("sampledMaxNvDeviation").get<double>();
    rec.multiset_bound_max = j.at("multisetBoundMax").get<std::uint32_t>();
    for (const auto& K : j.at("trackedQK")) {
        TrackedQK entry;
        entry.available = K.at("available").get<std::uint64_t>();
        entry.predicted = K.at("predicted").get<double>();
        entry.x_plus = K.at("xPlus").get<double>();
        entry.x_minus = K.at("xMinus").get<double>();
        entry.max_nv_in_k = K.at("maxNvInK").get<std::uint32_t>();
        rec.tracked.push_back(entry);
    }
    const auto& f = j.at("bandFlags");
    rec.flags.k_band = f.at("kBand").get<bool>();
    rec.flags.s_avail = f.at("sAvail").get<bool>();
    rec.flags.s_nv = f.at("sNv").get<bool>();
    rec.flags.n_event = f.at("nEvent").get<bool>();
    return rec;
}

json to_json(const BandContext& bands) {
    return json{{"N", bands.N}, {"r", bands.r}, {"D", bands.D}, {"delta", bands.delta}, {"k", bands.k}};
}

BandContext band_context_from_json(const json& j) {
    BandContext b;
    b.N = j.at("N").get<std::uint32_t>();
    b.r = j.at("r").get<unsigned>();
    b.D = j.at("D").get<std::uint64_t>();
    b.delta = j.at("delta").get<double>();
    b.k = j.at("k").get<std::uint32_t>();
    return b;
}

RunSummaryRow summary_row(const RunResult& result, std::uint64_t seed, std::optional<double> hit_fraction) {
    RunSummaryRow row;
    row.seed = seed;
    row.terminated_early = result.terminated_early;
    row.violations = result.violations;
    row.final_size = result.I.size();
    row.final_available = result.final_available;
    row.hit_fraction = hit_fraction;
    row.stopping_time = result.stopping_time;
    return row;
}

json to_json(const RunSummaryRow& row) {
    json j{{"type", "summary"},
           {"seed", row.seed},
           {"terminatedEarly", row.terminated_early},
           {"violations",
            {{"kBand", row.violations.k_band},
             {"sAvail", row.violations.s_avail},
             {"sNv", row.violations.s_nv},
             {"nEvent", row.violations.n_event},
             {"xPositive", row.violations.x_positive}}},
           {"finalSize", row.final_size},
           {"finalAvailable", row.final_available}};
    j["hitFraction"] = row.hit_fraction ? json(*row.hit_fraction) : json(nullptr);
    j["stoppingTime"] = row.stopping_time ? json(*row.stopping_time) : json(nullptr);
    return j;
}

RunSummaryRow summary_row_from_json(const json& j) {
    RunSummaryRow row;
    row.seed = j.at("seed").get<std::uint64_t>();
    row.terminated_early = j.at("terminatedEarly").get<bool>();
    const auto& v = j.at("violations");
    row.violations.k_band = v.at("kBand").get<std::uint64_t>();
    row.violations.s_avail = v.at("sAvail").get<std::uint64_t>();
    row.violations.s_nv = v.at("sNv").get<std::uint64_t>();
    row.violations.n_event = v.at("nEvent").get<std::uint64_t>();
    row.violations.x_positive = v.at("xPositive").get<std::uint64_t>();
    row.final_size = j.at("finalSize").get<std::uint64_t>();
    row.final_available = j.value("finalAvailable", std::uint64_t{0});
    if (j.contains("hitFraction") && !j["hitFraction"].is_null()) row.hit_fraction = j["hitFraction"].get<double>();
    if (j.contains("stoppingTime") && !j["stoppingTime"].is_null()) {
        row.stopping_time = j["stoppingTime"].get<std::uint64_t>();
    }
    return row;
}

std::string summary_csv(std::span<const RunSummaryRow> rows) {
    std::ostringstream out;
    out << "seed,terminated_early,k_band,s_avail,s_nv,n_event,x_positive,final_size,final_available,hit_fraction,"
           "stopping_time\n";
    for (const RunSummaryRow& row : rows) {
        out << row.seed << ',' << (row.terminated_early ? 1 : 0) << ',' << row.violations.k_band << ','
            << row.violations.s_avail << ',' << row.violations.s_nv << ',' << row.violations.n_event << ','
            << row.violations.x_positive << ',' << row.final_size << ',' << row.final_available << ',';
        if (row.hit_fraction) out << json(*row.hit_fraction).dump();
        out << ',';
        if (row.stopping_time) out << *row.stopping_time;
        out << '\n';
    }
    return out.str();
}

json summary_json(std::span<const RunSummaryRow> rows) {
    json out = json::array();
    for (const RunSummaryRow& row : rows) out.push_back(to_json(row));
    return out;
}

namespace {

template <class Fn>
void for_each_record(std::istream& in, Fn&& fn) {
    std::string line;
    std::uint64_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        json j;
        try {
            j = json::parse(line);
        } catch (const json::exception& e) {
            throw std::runtime_error("transcript line " + std::to_string(lineno) + ": " + e.what());
        }
        try {
            fn(j, lineno);
        } catch (const json::exception& e) {
            throw std::runtime_error("transcript line " + std::to_string(lineno) + ": " + e.what());
        }
    }
}

}  // namespace

RunSummaryRow summarize_transcript(std::istream& in) {
    std::optional<RunSummaryRow> summary;
    RunSummaryRow rebuilt;
    bool have_header = false;
    for_each_record(in, [&](const json& j, std::uint64_t lineno) {
        const std::string type = j.at("type").get<std::string>();
        if (type == "header") {
            have_header = true;
            rebuilt.seed = j.at("seed").get<std::uint64_t>();
        } else if (type == "checkpoint") {
            const TrajectoryRecord rec = record_from_json(j);
            rebuilt.violations.k_band += rec.flags.k_band;
            rebuilt.violations.s_avail += rec.flags.s_avail;
            rebuilt.violations.s_nv += rec.flags.s_nv;
            rebuilt.violations.n_event += rec.flags.n_event;
            rebuilt.violations.x_positive +=
                std::any_of(rec.tracked.begin(), rec.tracked.end(),
                            [](const TrackedQK& q) { return q.x_plus > 0.0 || q.x_minus > 0.0; });
            if (rec.flags.any() && !rebuilt.stopping_time) rebuilt.stopping_time = rec.i;
            rebuilt.final_size = rec.i;
            rebuilt.final_available = rec.avail_count;
        } else if (type == "summary") {
            summary = summary_row_from_json(j);
        } else {
            throw std::runtime_error("transcript line " + std::to_string(lineno) + ": unknown record type '" + type + "'");
        }
    });
    if (!have_header) throw std::runtime_error("transcript has no header line");
    return summary ? *summary : rebuilt;
}

std::uint64_t count_flag_mismatches(std::istream& in) {
    std::optional<BandContext> bands;
    std::uint64_t mismatches = 0;
    for_each_record(in, [&](const json& j, std::uint64_t lineno) {
        const std::string type = j.at("type").get<std::string>();
        if (type == "header") {
            bands = band_context_from_json(j.at("bands"));
        } else if (type == "checkpoint") {
            if (!bands) throw std::runtime_error("transcript line " + std::to_string(lineno) + ": checkpoint before header");
            const TrajectoryRecord rec = record_from_json(j);
            if (!(evaluate_flags(rec, *bands) == rec.flags)) ++mismatches;
        }
    });
    return mismatches;
}

}  // namespace randgreedy
