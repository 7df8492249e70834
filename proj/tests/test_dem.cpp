#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "randgreedy/config.hpp"
#include "randgreedy/dem.hpp"
#include "randgreedy/runner.hpp"

using namespace randgreedy;
using nlohmann::json;

TEST_CASE("trajectory functions") {
    CHECK(q_t(3, 0.0) == 1.0);
    CHECK(q_t(3, 1.0) == doctest::Approx(std::exp(-1.0)));
    CHECK(q_t(4, 0.7) == doctest::Approx(std::exp(-0.343)));
    CHECK(q_prime(3, 0.5) == doctest::Approx(-2 * 0.5 * std::exp(-0.25)));
    for (unsigned e = 0; e < 10; ++e) CHECK(pow_int(1.3, e) == doctest::Approx(std::pow(1.3, e)));
    CHECK(s2_t(3, 100.0, 0.5) == doctest::Approx(2 * 10 * 0.5 * std::exp(-0.25)));
    CHECK(err_t(3, 100.0, 0.1, 0.5) == doctest::Approx(std::exp(5 * 0.75) * std::pow(100.0, -0.1)));
}

TEST_CASE("s2 equals -D^(1/(r-1)) q' by central differences") {
    for (unsigned r : {3u, 4u, 5u}) {
        const double D = 1500.0;
        for (int j = 1; j <= 32; ++j) {
            const double t = 0.05 * j;
            const double h = 1e-5;
            const double qp = (q_t(r, t + h) - q_t(r, t - h)) / (2 * h);
            const double expected = -std::pow(D, 1.0 / (r - 1)) * qp;
            CHECK(std::abs(s2_t(r, D, t) - expected) <= 1e-6 * std::abs(expected));
        }
    }
}

TEST_CASE("checkpoints measure the process exactly") {
    const RingContext ctx = make_context(101, 3);
    const APParams params = desk_params(ctx);
    APProcess p(ctx, params, 11);
    for (int j = 0; j < 4; ++j) p.step();
    MonitorConfig cfg = default_monitor_config(params);
    cfg.sampled_v = 1000;  // more than |V|: every available v
    const std::vector<APSet> tracked{k_ap(ctx, 0, 1, 20), k_ap(ctx, 5, 7, 30)};
    Rng rng(1);
    const TrajectoryRecord rec = record_checkpoint(p, tracked, cfg, rng);
    CHECK(rec.i == 4);
    CHECK(rec.avail_count == p.available_count());
    REQUIRE(rec.sampled_v.size() == p.available_count());
    for (std::size_t j = 0; j < rec.sampled_v.size(); ++j) {
        CHECK(rec.sampled_nv[j] == p.unavailable_neighbors(rec.sampled_v[j]).size());
    }
    REQUIRE(rec.tracked.size() == 2);
    for (std::size_t j = 0; j < 2; ++j) {
        std::uint64_t avail = 0;
        std::uint32_t max_in = 0;
        for (Residue x : tracked[j].elements) avail += p.available(x);
        for (Residue v : rec.sampled_v) {
            std::uint32_t in = 0;
            for (Residue u : p.unavailable_neighbors(v)) in += tracked[j].contains(u);
            max_in = std::max(max_in, in);
        }
        CHECK(rec.tracked[j].available == avail);
        CHECK(rec.tracked[j].max_nv_in_k == max_in);
        // X^± use the process's k, not |K|.
        const double kq = band_context(p, cfg).k * rec.q;
        CHECK(rec.tracked[j].predicted == doctest::Approx(kq));
        CHECK(rec.tracked[j].x_plus == doctest::Approx(avail - kq - kq * rec.err));
        CHECK(rec.tracked[j].x_minus == doctest::Approx(kq - avail - kq * rec.err));
    }
}

TEST_CASE("band flags follow their inequalities") {
    BandContext bands{1009, 3, 1512, 0.1, 100};
    TrajectoryRecord rec;
    rec.t = 0.0;
    rec.avail_count = 1009;
    CHECK_FALSE(evaluate_flags(rec, bands).any());
    const double width = 1009 * std::pow(1512.0, -0.1);
    rec.avail_count = static_cast<std::uint64_t>(1009 - width) - 1;
    CHECK(evaluate_flags(rec, bands).s_avail);
    rec.avail_count = 1009;
    rec.sampled_nv = {static_cast<std::uint32_t>(std::ceil(std::pow(1512.0, 0.4))) + 1};
    CHECK(evaluate_flags(rec, bands).s_nv);
    rec.sampled_nv.clear();
    TrackedQK K;
    K.available = 100;
    rec.tracked = {K};
    CHECK_FALSE(evaluate_flags(rec, bands).k_band);
    rec.tracked[0].available = 50;
    CHECK(evaluate_flags(rec, bands).k_band);
    rec.tracked[0].available = 100;
    rec.tracked[0].max_nv_in_k = 100;
    CHECK(evaluate_flags(rec, bands).n_event);
}

TEST_CASE("expected change equals the average removal over all choices") {
    const RingContext ctx = make_context(101, 3);
    APProcess p(ctx, desk_params(ctx), 4);
    for (int j = 0; j < 6; ++j) p.step();
    const APSet K = k_ap(ctx, 3, 9, 40);
    Rng rng(2);
    const ChangeAudit audit = expected_change_audit(p, K, 1000, rng);
    CHECK(audit.exact);
    // Choosing x removes x and N_x; average |removed ∩ K| over available x.
    double total = 0;
    for (Residue x : p.available_residues()) {
        total += K.contains(x);
        for (Residue u : p.unavailable_neighbors(x)) total += K.contains(u);
    }
    CHECK(audit.empirical == doctest::Approx(-total / p.available_count()));
    CHECK(audit.predicted < 0);
    CHECK(audit.error_term > 0);
    const ChangeAudit sampled = expected_change_audit(p, K, 5, rng);
    CHECK_FALSE(sampled.exact);
}

TEST_CASE("record and summary JSON round trips") {
    const RingContext ctx = make_context(211, 3);
    const APParams params = desk_params(ctx);
    APProcess p(ctx, params, 9);
    const RunResult res = run(p, default_monitor_config(params));
    for (const TrajectoryRecord& rec : res.trajectory) {
        const json j = to_json(rec);
        CHECK(j["type"] == "checkpoint");
        const TrajectoryRecord back = record_from_json(j);
        CHECK(to_json(back) == j);
    }
    const RunSummaryRow row = summary_row(res, 9, 0.75);
    const RunSummaryRow back = summary_row_from_json(to_json(row));
    CHECK(to_json(back) == to_json(row));
    const BandContext bands = band_context(p, default_monitor_config(params));
    CHECK(to_json(band_context_from_json(to_json(bands))) == to_json(bands));
}

TEST_CASE("summary table formats") {
    RunSummaryRow a;
    a.seed = 3;
    a.final_size = 10;
    a.final_available = 20;
    a.violations.n_event = 2;
    a.hit_fraction = 1.0;
    RunSummaryRow b = a;
    b.seed = 4;
    b.terminated_early = true;
    b.hit_fraction.reset();
    b.stopping_time = 7;
    const std::vector<RunSummaryRow> rows{a, b};
    const std::string csv = summary_csv(rows);
    std::istringstream in(csv);
    std::string line;
    std::getline(in, line);
    CHECK(line == "seed,terminated_early,k_band,s_avail,s_nv,n_event,x_positive,final_size,final_available,hit_fraction,"
                  "stopping_time");
    std::getline(in, line);
    CHECK(line.rfind("3,0,0,0,0,2,0,10,20,", 0) == 0);
    std::getline(in, line);
    CHECK(line == "4,1,0,0,0,2,0,10,20,,7");
    CHECK(summary_json(rows).size() == 2);
}

TEST_CASE("transcripts summarize and replay their flags") {
    RunConfig cfg;
    cfg.set("N", "1009");
    const ApfreeOutcome out = run_apfree(cfg, 5);
    std::istringstream a(out.transcript);
    const RunSummaryRow row = summarize_transcript(a);
    CHECK(to_json(row) == to_json(out.summary));
    std::istringstream b(out.transcript);
    CHECK(count_flag_mismatches(b) == 0);

    // Without the summary line the row is rebuilt from checkpoints.
    std::string body = out.transcript;
    body.erase(body.rfind('\n', body.size() - 2) + 1);
    std::istringstream c(body);
    const RunSummaryRow rebuilt = summarize_transcript(c);
    CHECK(rebuilt.final_available == out.summary.final_available);
    CHECK(rebuilt.violations.k_band == out.summary.violations.k_band);

    // Flip one stored flag.
    std::istringstream d(out.transcript);
    std::ostringstream tampered;
    std::string line;
    bool flipped = false;
    while (std::getline(d, line)) {
        json j = json::parse(line);
        if (!flipped && j["type"] == "checkpoint") {
            j["bandFlags"]["sAvail"] = !j["bandFlags"]["sAvail"].get<bool>();
            flipped = true;
        }
        tampered << j.dump() << '\n';
    }
    std::istringstream e(tampered.str());
    CHECK(count_flag_mismatches(e) == 1);
}

TEST_CASE("malformed transcripts are rejected with a line number") {
    std::istringstream empty("");
    CHECK_THROWS_AS(summarize_transcript(empty), std::runtime_error);
    RunConfig cfg;
    cfg.set("N", "101");
    const std::string transcript = run_apfree(cfg, 1).transcript;
    std::istringstream bad(transcript.substr(0, transcript.find('\n') + 1) + "not json\n");
    try {
        summarize_transcript(bad);
        FAIL("expected an exception");
    } catch (const std::runtime_error& e) {
        CHECK(std::string(e.what()).find("line 2") != std::string::npos);
    }
}

TEST_CASE("expected one-step change stays within three error terms") {
    const RingContext ctx = make_context(1009, 3);
    const APParams params = desk_params(ctx);
    Rng rng(5);
    int audited = 0, within = 0;
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        APProcess p(ctx, params, seed);
        const APSet K = k_ap(ctx, static_cast<Residue>(rng.below(1009)), 1 + static_cast<Residue>(rng.below(1008)),
                             params.k_eff);
        while (p.step_index() < params.m && p.available_count() > 0) {
            const ChangeAudit a = expected_change_audit(p, K, 2000, rng);
            ++audited;
            within += std::abs(a.empirical - a.predicted) <= 3 * a.error_term;
            p.step();
        }
    }
    MESSAGE("audited " << audited << " steps, " << within << " within 3 error terms");
    CHECK(within >= 0.95 * audited);
}
