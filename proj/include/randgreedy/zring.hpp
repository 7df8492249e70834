#pragma once

#include <compare>
#include <cstdint>
#include <span>
#include <vector>

namespace randgreedy {

/// Element of Z/NZ, always stored in [0, N).
using Residue = std::uint32_t;

/// An arithmetic progression viewed as a set: its distinct residues in
/// increasing order. How many (start, difference) pairs produce it is not
/// part of the value.
struct APSet {
    std::vector<Residue> elements;

    std::size_t size() const { return elements.size(); }
    bool contains(Residue x) const;

    friend auto operator<=>(const APSet&, const APSet&) = default;
    friend bool operator==(const APSet&, const APSet&) = default;
};

/// A progression a, a+d, ..., a+(length-1)d in Z/NZ, kept in (start,
/// difference) form so long k-APs need not be materialized.
struct Progression {
    Residue a = 0;
    Residue d = 1;
    std::uint32_t length = 0;

    friend bool operator==(const Progression&, const Progression&) = default;
};

/// Deterministic Miller-Rabin, exact for all 64-bit inputs.
bool is_prime(std::uint64_t n);

/// Z/NZ for a prime N together with the r-AP counts the processes need.
/// Immutable once built.
class RingContext {
public:
    std::uint32_t N() const { return n_; }
    unsigned r() const { return r_; }
    /// |A_{N,r}|, the number of r-APs counted as sets.
    std::uint64_t total_aps() const { return total_; }
    /// Number of r-APs through any fixed residue.
    std::uint64_t degree() const { return degree_; }
    /// Number of (start, difference) pairs that produce one r-AP set.
    std::uint64_t representations() const { return reps_; }
    /// True when the counts came from enumerating and deduplicating every AP.
    bool enumerated() const { return enumerated_; }

    Residue add(Residue a, Residue b) const { return static_cast<Residue>((std::uint64_t{a} + b) % n_); }
    Residue sub(Residue a, Residue b) const { return static_cast<Residue>((std::uint64_t{a} + n_ - b) % n_); }
    Residue mul(std::uint64_t a, std::uint64_t b) const { return static_cast<Residue>((a % n_) * (b % n_) % n_); }
    Residue half(Residue a) const { return mul(a, inv2_); }

private:
    friend RingContext make_context(std::uint64_t N, unsigned r);
    RingContext() = default;

    std::uint32_t n_ = 0;
    unsigned r_ = 0;
    std::uint64_t total_ = 0;
    std::uint64_t degree_ = 0;
    std::uint64_t reps_ = 0;
    std::uint64_t inv2_ = 0;
    bool enumerated_ = false;
};

/// Largest modulus accepted by make_context; residues must fit in 32 bits and
/// the per-step scans are O(N).
inline constexpr std::uint64_t kMaxModulus = 1u << 30;

/// Throws std::invalid_argument for composite N, r < 3 or r >= N.
RingContext make_context(std::uint64_t N, unsigned r);

/// How many (a, d) pairs with d != 0 generate the same length-`len` AP in Z/NZ.
/// Every AP is an affine image of {0, ..., len-1}, so the count is the same for
/// all of them and is measured on that base set.
std::uint64_t ap_representation_count(std::uint32_t N, std::uint32_t len);

/// Number of distinct length-`len` APs in Z/NZ (as sets).
std::uint64_t count_aps(std::uint32_t N, std::uint32_t len);

/// True iff S is an r-AP of the context's ring.
bool is_ap(const RingContext& ctx, std::span<const Residue> S);

/// Length-agnostic variant: S (any size >= 2) is an AP of distinct residues mod N.
bool is_progression(std::uint32_t N, std::span<const Residue> S);

/// All r-APs containing x, deduplicated, in lexicographic order.
std::vector<APSet> aps_through(const RingContext& ctx, Residue x);

/// For r = 3: every u such that {x, w, u} is a 3-AP, sorted.
std::vector<Residue> three_ap_completions(const RingContext& ctx, Residue x, Residue w);

/// {a + j*d : 0 <= j < k} as a set. Requires d != 0 and 1 <= k <= N.
APSet k_ap(const RingContext& ctx, Residue a, Residue d, std::uint32_t k);
APSet k_ap(std::uint32_t N, Residue a, Residue d, std::uint32_t k);

}  // namespace randgreedy
