#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "randgreedy/apfree.hpp"
#include "randgreedy/zring.hpp"

namespace randgreedy {

/// Red/blue coloring of [n] = {1, ..., n}; blue is the complement of red.
struct Coloring {
    std::uint64_t n = 0;
    std::vector<std::uint64_t> red;  // sorted, within [1, n]

    bool is_red(std::uint64_t x) const;
    friend bool operator==(const Coloring&, const Coloring&) = default;
};

/// a, a+d, ..., a+(length-1)d inside [n]; no wraparound.
struct IntegerAP {
    std::uint64_t a = 0;
    std::uint64_t d = 0;
    std::uint64_t length = 0;

    std::vector<std::uint64_t> terms() const;
    friend bool operator==(const IntegerAP&, const IntegerAP&) = default;
};

struct VdwVerdict {
    /// Red r-AP with the smallest (a, d), if any.
    std::optional<IntegerAP> red_ap;
    /// Blue k-AP with the smallest (a, d), if any.
    std::optional<IntegerAP> blue_ap;
    /// Length of the longest blue AP in [n] (0 when everything is red).
    std::uint64_t longest_blue = 0;
};

/// k_N = ceil(C (N / log N)^(1/(r-1)) log N).
std::uint64_t k_of_modulus(unsigned r, double C, std::uint64_t N);

/// Largest prime N >= max(2, N0) with k_of_modulus(r, C, N) <= k.
/// Throws std::invalid_argument when no prime qualifies.
std::uint64_t select_modulus(unsigned r, std::uint64_t k, double C, std::uint64_t N0 = 2);

/// n = N - 1 and red = I ∩ [n].
Coloring build_coloring(std::span<const Residue> I, std::uint64_t N);

/// Exhaustive scan over integer APs of [n]. Requires r, k >= 2.
VdwVerdict check_coloring(const Coloring& c, std::uint64_t r, std::uint64_t k);

struct ExactVdwResult {
    /// W(r, k) when it is at most nMax.
    std::optional<std::uint64_t> value;
    /// Coloring of [value - 1] with no red r-AP and no blue k-AP; when the
    /// bound is exceeded, the valid coloring of [nMax] that was found.
    Coloring certificate;
    bool exceeds_bound = false;
    std::uint64_t nodes = 0;
};

inline constexpr std::uint64_t kExactVdwGuard = 40;

/// Least n <= nMax such that every coloring of [n] has a red r-AP or a blue
/// k-AP. Throws std::invalid_argument if r or k < 2, or nMax > guard.
ExactVdwResult exact_vdw(std::uint64_t r, std::uint64_t k, std::uint64_t nMax, std::uint64_t guard = kExactVdwGuard);

struct WitnessOptions {
    double xi = 0.2;
    double delta = 0.1;
    ParamMode mode = ParamMode::desk;
    /// Constant of k_N; defaults to default_hitting_constant(r, xi).
    std::optional<double> C;
    std::uint64_t N0 = 2;
    bool monitor = false;
};

struct WitnessResult {
    std::uint64_t N = 0;
    std::uint64_t n = 0;
    std::uint64_t k = 0;
    double C = 0.0;
    APParams params;
    std::vector<Residue> I;
    Coloring coloring;
    VdwVerdict verdict;
    bool terminated_early = false;
    /// No red r-AP and longest blue AP < k, i.e. W(r, k) > n.
    bool success = false;
};

WitnessResult lower_bound_witness(unsigned r, std::uint64_t k, const WitnessOptions& options, std::uint64_t seed);

/// Coloring files: optional '#' header lines, then "n=<n>", then the red
/// elements separated by spaces. Throws std::runtime_error with a line number.
void write_coloring(std::ostream& out, const Coloring& c);
Coloring read_coloring(std::istream& in);

}  // namespace randgreedy
