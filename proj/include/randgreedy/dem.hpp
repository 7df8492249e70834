#pragma once

// Deterministic trajectories, error envelopes and band monitors for the
// r-AP-free process.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "randgreedy/apfree.hpp"
#include "randgreedy/rng.hpp"
#include "randgreedy/trajectory.hpp"

namespace randgreedy {

/// base^exp by repeated squaring; keeps t^(r-1) identical across libms.
double pow_int(double base, unsigned exp);

/// q(t) = exp(-t^(r-1)).
double q_t(unsigned r, double t);
/// q'(t) = -(r-1) t^(r-2) q(t).
double q_prime(unsigned r, double t);
/// s2(t) = (r-1) D^(1/(r-1)) t^(r-2) q(t), the predicted |N_v(i)|.
double s2_t(unsigned r, double D, double t);
double s2_t(const RingContext& ctx, double t);
/// e(t) = exp(5(t + t^(r-1))) D^(-δ).
double err_t(unsigned r, double D, double delta, double t);
double err_t(const RingContext& ctx, double delta, double t);

BandContext band_context(const APProcess& process, const MonitorConfig& cfg);

/// Band predicates recomputed from the record's own fields.
BandFlags evaluate_flags(const TrajectoryRecord& rec, const BandContext& bands);

/// Snapshot of the monitored quantities at the process's current step.
/// `rng` drives the choice of sampled v and must not be the process stream.
TrajectoryRecord record_checkpoint(const APProcess& process, std::span<const APSet> tracked, const MonitorConfig& cfg,
                                   Rng& rng);

struct ChangeAudit {
    double empirical = 0.0;   // -Σ_{v ∈ Q_K(i)} (|N_v(i)| + 1) / |V(i)|
    double predicted = 0.0;   // k q'(t_i) / M
    double error_term = 0.0;  // (4(r-1) t^(r-2) q e + 4 D^-δ) k / M
    bool exact = true;        // false when v ∈ Q_K was sampled
};

/// Expected one-step change of |Q_K| against its leading-order prediction.
/// Exact when |Q_K(i)| <= sample_limit, otherwise estimated from sample_limit
/// uniformly drawn v ∈ Q_K(i).
ChangeAudit expected_change_audit(const APProcess& process, const APSet& K, std::uint32_t sample_limit, Rng& rng);

nlohmann::json to_json(const TrajectoryRecord& rec);
TrajectoryRecord record_from_json(const nlohmann::json& j);

nlohmann::json to_json(const BandContext& bands);
BandContext band_context_from_json(const nlohmann::json& j);

/// One row of the per-run summary table.
struct RunSummaryRow {
    std::uint64_t seed = 0;
    bool terminated_early = false;
    ViolationCounts violations;
    std::uint64_t final_size = 0;
    std::uint64_t final_available = 0;
    std::optional<double> hit_fraction;
    std::optional<std::uint64_t> stopping_time;
};

RunSummaryRow summary_row(const RunResult& result, std::uint64_t seed, std::optional<double> hit_fraction);
nlohmann::json to_json(const RunSummaryRow& row);
RunSummaryRow summary_row_from_json(const nlohmann::json& j);

std::string summary_csv(std::span<const RunSummaryRow> rows);
nlohmann::json summary_json(std::span<const RunSummaryRow> rows);

/// Reads a JSON-lines transcript (header, checkpoints, summary) and returns
/// its summary row; throws std::runtime_error naming the offending line.
RunSummaryRow summarize_transcript(std::istream& in);

/// Number of checkpoints whose stored flags differ from flags recomputed
/// from the record fields and the header's band constants.
std::uint64_t count_flag_mismatches(std::istream& in);

}  // namespace randgreedy
