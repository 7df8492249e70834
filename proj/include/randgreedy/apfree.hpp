#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "randgreedy/rng.hpp"
#include "randgreedy/trajectory.hpp"
#include "randgreedy/zring.hpp"

namespace randgreedy {

enum class ParamMode { desk, paper };

std::string to_string(ParamMode mode);
ParamMode parse_param_mode(const std::string& text);

/// Parameters of the random greedy r-AP-free process on a given ring.
struct APParams {
    double xi = 0.2;
    double delta = 0.1;
    /// Step budget m = round(ξ M (log N)^(1/(r-1))).
    std::uint64_t m = 0;
    /// Hitting length k = round(9 ξ^-1 (D / log N)^(1/(r-1)) log N).
    std::uint64_t k = 0;
    /// Length actually used for k-APs: min(k, N). Any longer progression covers Z/NZ.
    std::uint32_t k_eff = 0;
    /// Time scale M = N D^(-1/(r-1)).
    double M = 0.0;
    /// Constant C of k_N = ceil(C (N / log N)^(1/(r-1)) log N).
    double C_k = 0.0;
    ParamMode mode = ParamMode::desk;
    bool xi_in_asymptotic_range = false;  // 0 < ξ < 1/(2r)
    bool k_clamped = false;
};

/// C making k_N dominate the process's k when D = r(N-1)/2.
double default_hitting_constant(unsigned r, double xi);

/// Throws std::invalid_argument unless 0 < xi < 1 and 0 < delta <= 1/(2r).
APParams make_ap_params(const RingContext& ctx, double xi, double delta, ParamMode mode = ParamMode::desk);
/// δ = 0.1, ξ = 0.2.
APParams desk_params(const RingContext& ctx);
/// δ = 1/(40 r^2), ξ = δ/500.
APParams paper_params(const RingContext& ctx);

struct StepReport {
    Residue chosen = 0;
    std::vector<Residue> removed;  // N_chosen(i), sorted
};

class ProcessTerminated : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// State of the random greedy r-AP-free process: the chosen set I(i), the
/// available set V(i) and, for every available u, the counter ñ_u that counts
/// (A, w) pairs witnessing w ∈ N_u(i) with multiplicity.
class APProcess {
public:
    APProcess(RingContext ctx, APParams params, std::uint64_t seed);

    const RingContext& context() const { return ctx_; }
    const APParams& params() const { return params_; }
    std::uint64_t seed() const { return seed_; }

    std::uint64_t step_index() const { return chosen_.size(); }
    std::span<const Residue> chosen() const { return chosen_; }
    bool in_set(Residue x) const { return in_set_[x] != 0; }
    bool available(Residue x) const { return pos_[x] != kNotAvailable; }
    std::size_t available_count() const { return pool_.size(); }
    /// Available residues in internal (unspecified but deterministic) order.
    std::span<const Residue> available_residues() const { return pool_; }
    std::uint32_t multiset_bound(Residue u) const { return bound_[u]; }

    /// N_v(i): available u != v that some r-AP through v and u would complete
    /// using only elements of I(i). Throws if v is not available.
    std::vector<Residue> unavailable_neighbors(Residue v) const;

    /// One step of the process. Throws ProcessTerminated when V(i) is empty.
    StepReport step();

private:
    static constexpr std::uint32_t kNotAvailable = 0xffffffffu;

    void remove_available(Residue x);
    void update_bounds_r3(Residue x, std::span<const Residue> removed, std::span<const Residue> old_set);
    void update_bounds_generic(Residue x, std::span<const Residue> removed);
    void add_contribution(const APSet& ap, int sign);

    RingContext ctx_;
    APParams params_;
    std::uint64_t seed_;
    Rng rng_;
    std::vector<Residue> chosen_;
    std::vector<std::uint8_t> in_set_;
    std::vector<Residue> pool_;
    std::vector<std::uint32_t> pos_;
    std::vector<std::uint32_t> bound_;
};

struct ViolationCounts {
    std::uint64_t k_band = 0;
    std::uint64_t s_avail = 0;
    std::uint64_t s_nv = 0;
    std::uint64_t n_event = 0;
    std::uint64_t x_positive = 0;  // checkpoints with some X^± > 0
};

struct RunResult {
    std::vector<Residue> I;
    std::vector<TrajectoryRecord> trajectory;
    bool terminated_early = false;
    std::uint64_t final_available = 0;
    /// First checkpoint step at which some band failed.
    std::optional<std::uint64_t> stopping_time;
    ViolationCounts violations;
    std::vector<APSet> tracked;
};

/// Runs a fresh process for min(m, termination) steps, recording checkpoints
/// at i = 0, every cfg.checkpoint_every steps, and at the last step.
RunResult run(APProcess& process, const MonitorConfig& cfg);

MonitorConfig default_monitor_config(const APParams& params);

/// True iff no r-subset of S is an r-AP.
bool is_ap_free(const RingContext& ctx, std::span<const Residue> S);

struct HittingReport {
    std::vector<APSet> missed;
    double hit_fraction = 1.0;
    std::uint64_t family_size = 0;
};

/// Members of `family` disjoint from I, and the fraction that I hits. Works
/// for arbitrary k-element families, not only APs.
HittingReport hitting_report(const RingContext& ctx, std::span<const Residue> I, std::span<const APSet> family);
HittingReport hitting_report(const RingContext& ctx, std::span<const Residue> I, std::span<const Progression> family);

/// Family of k-APs used for hitting checks: every k-AP of Z/NZ (one
/// representative per set) when N^2 <= 10^7, otherwise `samples` uniformly
/// drawn (a, d) progressions.
struct KAPFamily {
    std::vector<Progression> members;
    bool enumerated = false;
};
KAPFamily k_ap_family(std::uint32_t N, std::uint32_t k, std::uint64_t samples, Rng& rng);

}  // namespace randgreedy
