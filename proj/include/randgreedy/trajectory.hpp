#pragma once

#include <cstdint>
#include <vector>

#include "randgreedy/zring.hpp"

namespace randgreedy {

struct MonitorConfig {
    std::uint64_t checkpoint_every = 1;
    std::uint32_t tracked_k = 32;
    std::uint32_t sampled_v = 64;
    double delta = 0.1;
    double xi = 0.2;
    bool enabled = true;
};

/// One tracked k-AP K at a checkpoint: |Q_K(i)| = |V(i) ∩ K| against k*q(t).
struct TrackedQK {
    std::uint64_t available = 0;
    double predicted = 0.0;
    double x_plus = 0.0;
    double x_minus = 0.0;
    /// max over sampled available v of |N_v(i) ∩ K|.
    std::uint32_t max_nv_in_k = 0;
};

struct BandFlags {
    bool k_band = false;   // some tracked |Q_K| outside (1 ± e(t)) k q(t)
    bool s_avail = false;  // |V(i)| outside (1 ± D^-δ) N q(t)
    bool s_nv = false;     // some sampled |N_v(i)| farther than D^(1/(r-1)-δ) from s2(t)
    bool n_event = false;  // some max |N_v(i) ∩ K| above D^(1/(r-1)-3δ)

    bool any() const { return k_band || s_avail || s_nv || n_event; }
    friend bool operator==(const BandFlags&, const BandFlags&) = default;
};

struct TrajectoryRecord {
    std::uint64_t i = 0;
    double t = 0.0;
    std::uint64_t avail_count = 0;
    double predicted_avail = 0.0;
    double q = 1.0;
    double err = 0.0;
    double s2 = 0.0;
    std::vector<Residue> sampled_v;
    std::vector<std::uint32_t> sampled_nv;
    std::vector<double> nv_deviations;
    double max_nv_deviation = 0.0;
    std::uint32_t multiset_bound_max = 0;
    std::vector<TrackedQK> tracked;
    BandFlags flags;
};

/// Constants the band predicates depend on; all of them appear in a
/// transcript header.
struct BandContext {
    std::uint32_t N = 0;
    unsigned r = 3;
    std::uint64_t D = 0;
    double delta = 0.1;
    std::uint32_t k = 0;
};

}  // namespace randgreedy
