#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <utility>

namespace randgreedy {

/// Seeded 64-bit generator used for every random decision in the library.
///
/// The engine is std::mt19937_64, whose output sequence is fixed by the C++
/// standard (the 10000th draw of a default-seeded engine is
/// 9981545732273789042). Distributions are implemented here rather than taken
/// from <random>, because the standard leaves their algorithms unspecified and
/// transcripts must be identical across toolchains.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }

    /// Uniform integer in [0, bound). bound must be positive.
    std::uint64_t below(std::uint64_t bound);

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform01();

    /// Uniform double in (0, 1].
    double uniform_open_closed() { return 1.0 - uniform01(); }

    bool bernoulli(double p) { return uniform01() < p; }

    /// Number of failures before the first success of a Bernoulli(p) sequence.
    /// Returns UINT64_MAX when p <= 0.
    std::uint64_t geometric(double p);

    template <class T>
    void shuffle(std::span<T> items) {
        for (std::size_t i = items.size(); i > 1; --i) {
            const auto j = static_cast<std::size_t>(below(i));
            std::swap(items[i - 1], items[j]);
        }
    }

private:
    std::mt19937_64 engine_;
};

/// SplitMix64 finalizer; used to derive independent stream seeds from a run seed.
std::uint64_t splitmix64(std::uint64_t x);

/// Seed for a named sub-stream of a run (process, monitors, sampling, ...).
std::uint64_t derive_seed(std::uint64_t run_seed, std::uint64_t stream);

namespace streams {
inline constexpr std::uint64_t kProcess = 0;
inline constexpr std::uint64_t kMonitor = 1;
inline constexpr std::uint64_t kHitting = 2;
inline constexpr std::uint64_t kEvents = 3;
inline constexpr std::uint64_t kHeuristic = 4;
}  // namespace streams

}  // namespace randgreedy
