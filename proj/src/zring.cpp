#include "randgreedy/zring.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <string>

namespace randgreedy {
namespace {

__extension__ using u128 = unsigned __int128;

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
    return static_cast<std::uint64_t>(static_cast<u128>(a) * b % m);
}

std::uint64_t powmod(std::uint64_t base, std::uint64_t exp, std::uint64_t m) {
    std::uint64_t result = 1 % m;
    base %= m;
    while (exp > 0) {
        if (exp & 1) result = mulmod(result, base, m);
        base = mulmod(base, base, m);
        exp >>= 1;
    }
    return result;
}

// Full enumeration is only attempted when the flattened (a, d) table stays small.
constexpr std::uint64_t kEnumerationLimit = 30'000'000;

std::uint64_t count_by_enumeration(std::uint32_t N, unsigned r) {
    std::vector<Residue> flat;
    flat.reserve(std::size_t{N} * (N - 1) * r);
    std::vector<Residue> ap(r);
    for (std::uint32_t a = 0; a < N; ++a) {
        for (std::uint32_t d = 1; d < N; ++d) {
            for (unsigned j = 0; j < r; ++j) ap[j] = static_cast<Residue>((a + std::uint64_t{j} * d) % N);
            std::sort(ap.begin(), ap.end());
            flat.insert(flat.end(), ap.begin(), ap.end());
        }
    }
    const std::size_t rows = flat.size() / r;
    std::vector<std::uint32_t> order(rows);
    std::iota(order.begin(), order.end(), 0u);
    auto row_less = [&](std::uint32_t x, std::uint32_t y) {
        return std::lexicographical_compare(flat.begin() + std::ptrdiff_t(x) * r, flat.begin() + std::ptrdiff_t(x + 1) * r,
                                            flat.begin() + std::ptrdiff_t(y) * r, flat.begin() + std::ptrdiff_t(y + 1) * r);
    };
    std::sort(order.begin(), order.end(), row_less);
    std::uint64_t distinct = rows > 0 ? 1 : 0;
    for (std::size_t i = 1; i < rows; ++i) {
        if (row_less(order[i - 1], order[i])) ++distinct;
    }
    return distinct;
}

// Representations of the base set {0, ..., len-1} for 1 <= len <= N/2.
std::uint64_t count_base_representations(std::uint32_t N, std::uint32_t len) {
    std::uint64_t count = 0;
    for (std::uint32_t d = 1; d < N; ++d) {
        for (std::uint32_t a = 0; a < len; ++a) {
            std::uint64_t x = a;
            std::uint32_t j = 1;
            for (; j < len; ++j) {
                x += d;
                if (x >= N) x -= N;
                if (x >= len) break;
            }
            if (j == len) ++count;
        }
    }
    return count;
}

}  // namespace

bool APSet::contains(Residue x) const {
    return std::binary_search(elements.begin(), elements.end(), x);
}

bool is_prime(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t p : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
        if (n % p == 0) return n == p;
    }
    std::uint64_t d = n - 1;
    int s = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++s;
    }
    for (std::uint64_t a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
        std::uint64_t x = powmod(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool composite = true;
        for (int i = 1; i < s; ++i) {
            x = mulmod(x, x, n);
            if (x == n - 1) {
                composite = false;
                break;
            }
        }
        if (composite) return false;
    }
    return true;
}

std::uint64_t ap_representation_count(std::uint32_t N, std::uint32_t len) {
    if (len == 0 || len > N) throw std::invalid_argument("ap_representation_count: need 1 <= len <= N");
    if (len == N) return std::uint64_t{N} * (N - 1);
    // A length-len AP with difference d is the complement of a length-(N-len)
    // AP with the same difference, so both lengths have the same count.
    return count_base_representations(N, std::min(len, N - len));
}

std::uint64_t count_aps(std::uint32_t N, std::uint32_t len) {
    return std::uint64_t{N} * (N - 1) / ap_representation_count(N, len);
}

RingContext make_context(std::uint64_t N, unsigned r) {
    if (N > kMaxModulus) throw std::invalid_argument("make_context: N=" + std::to_string(N) + " exceeds supported modulus");
    if (!is_prime(N)) throw std::invalid_argument("make_context: N=" + std::to_string(N) + " is not prime");
    if (r < 3) throw std::invalid_argument("make_context: r must be at least 3");
    if (r >= N) throw std::invalid_argument("make_context: r=" + std::to_string(r) + " must be smaller than N=" + std::to_string(N));

    RingContext ctx;
    ctx.n_ = static_cast<std::uint32_t>(N);
    ctx.r_ = r;
    ctx.inv2_ = (N + 1) / 2;
    ctx.reps_ = ap_representation_count(ctx.n_, r);
    const std::uint64_t pairs = N * (N - 1);
    if (N <= 1000 && pairs * r <= kEnumerationLimit) {
        ctx.total_ = count_by_enumeration(ctx.n_, r);
        ctx.enumerated_ = true;
        if (ctx.total_ * ctx.reps_ != pairs) {
            throw std::logic_error("make_context: enumeration disagrees with representation count");
        }
    } else {
        if (pairs % ctx.reps_ != 0) throw std::logic_error("make_context: representation count does not divide N(N-1)");
        ctx.total_ = pairs / ctx.reps_;
    }
    if ((std::uint64_t{r} * ctx.total_) % N != 0) throw std::logic_error("make_context: r*|A| not divisible by N");
    ctx.degree_ = std::uint64_t{r} * ctx.total_ / N;
    return ctx;
}

bool is_progression(std::uint32_t N, std::span<const Residue> S) {
    const std::size_t len = S.size();
    if (len < 2 || len > N) return false;
    std::vector<Residue> sorted(S.begin(), S.end());
    std::sort(sorted.begin(), sorted.end());
    if (sorted.back() >= N) return false;
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) return false;
    if (len == 2 || len == N) return true;

    auto member = [&](std::uint64_t x) { return std::binary_search(sorted.begin(), sorted.end(), static_cast<Residue>(x)); };
    // S[0] and S[1] sit m positions apart in any representation, so
    // d = (S[1] - S[0]) / m for some 1 <= m < len (up to sign).
    const std::uint64_t gap = (std::uint64_t{sorted[1]} + N - sorted[0]) % N;
    for (std::uint64_t m = 1; m < len; ++m) {
        const std::uint64_t d = mulmod(gap, powmod(m, N - 2, N), N);
        std::uint64_t start = sorted[0];
        std::size_t back = 0;
        while (back < len && member((start + N - d) % N)) {
            start = (start + N - d) % N;
            ++back;
        }
        if (back >= len) continue;
        std::size_t j = 1;
        std::uint64_t x = start;
        for (; j < len; ++j) {
            x = (x + d) % N;
            if (!member(x)) break;
        }
        if (j == len) return true;
    }
    return false;
}

bool is_ap(const RingContext& ctx, std::span<const Residue> S) {
    return S.size() == ctx.r() && is_progression(ctx.N(), S);
}

std::vector<APSet> aps_through(const RingContext& ctx, Residue x) {
    const std::uint32_t N = ctx.N();
    const unsigned r = ctx.r();
    std::vector<APSet> out;
    out.reserve(std::size_t{N - 1} * r);
    for (std::uint32_t d = 1; d < N; ++d) {
        for (unsigned j = 0; j < r; ++j) {
            const Residue a = ctx.sub(x, ctx.mul(j, d));
            APSet ap;
            ap.elements.resize(r);
            for (unsigned t = 0; t < r; ++t) ap.elements[t] = ctx.add(a, ctx.mul(t, d));
            std::sort(ap.elements.begin(), ap.elements.end());
            out.push_back(std::move(ap));
        }
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

std::vector<Residue> three_ap_completions(const RingContext& ctx, Residue x, Residue w) {
    if (ctx.r() != 3) throw std::invalid_argument("three_ap_completions: requires r = 3");
    if (x >= ctx.N() || w >= ctx.N()) throw std::invalid_argument("three_ap_completions: residue out of range");
    if (x == w) throw std::invalid_argument("three_ap_completions: x and w must differ");
    std::vector<Residue> out{ctx.sub(ctx.add(w, w), x), ctx.sub(ctx.add(x, x), w), ctx.half(ctx.add(x, w))};
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    std::erase_if(out, [&](Residue u) { return u == x || u == w; });
    return out;
}

APSet k_ap(std::uint32_t N, Residue a, Residue d, std::uint32_t k) {
    if (d % N == 0) throw std::invalid_argument("k_ap: difference must be nonzero mod N");
    if (k < 1 || k > N) throw std::invalid_argument("k_ap: need 1 <= k <= N");
    APSet ap;
    ap.elements.resize(k);
    std::uint64_t x = a % N;
    const std::uint64_t step = d % N;
    for (std::uint32_t j = 0; j < k; ++j) {
        ap.elements[j] = static_cast<Residue>(x);
        x += step;
        if (x >= N) x -= N;
    }
    std::sort(ap.elements.begin(), ap.elements.end());
    return ap;
}

APSet k_ap(const RingContext& ctx, Residue a, Residue d, std::uint32_t k) {
    return k_ap(ctx.N(), a, d, k);
}

}  // namespace randgreedy
