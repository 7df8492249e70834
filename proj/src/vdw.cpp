#include "randgreedy/vdw.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace randgreedy {

bool Coloring::is_red(std::uint64_t x) const {
    return std::binary_search(red.begin(), red.end(), x);
}

std::vector<std::uint64_t> IntegerAP::terms() const {
    std::vector<std::uint64_t> out(length);
    for (std::uint64_t j = 0; j < length; ++j) out[j] = a + j * d;
    return out;
}

std::uint64_t k_of_modulus(unsigned r, double C, std::uint64_t N) {
    if (N < 2) throw std::invalid_argument("k_of_modulus: N must be at least 2");
    const double logN = std::log(static_cast<double>(N));
    return static_cast<std::uint64_t>(std::ceil(C * std::pow(static_cast<double>(N) / logN, 1.0 / (r - 1)) * logN));
}

std::uint64_t select_modulus(unsigned r, std::uint64_t k, double C, std::uint64_t N0) {
    if (r < 3) throw std::invalid_argument("select_modulus: r must be at least 3");
    if (!(C > 0.0)) throw std::invalid_argument("select_modulus: C must be positive");
    const std::uint64_t lo = std::max<std::uint64_t>(2, N0);
    if (k_of_modulus(r, C, lo) > k) {
        throw std::invalid_argument("select_modulus: no prime N >= " + std::to_string(lo) + " has k_N <= " + std::to_string(k));
    }
    constexpr std::uint64_t kCeiling = std::uint64_t{1} << 62;
    std::uint64_t good = lo;
    std::uint64_t bad = lo;
    while (k_of_modulus(r, C, bad) <= k) {
        good = bad;
        if (bad >= kCeiling) throw std::invalid_argument("select_modulus: k too large");
        bad = std::min(kCeiling, bad * 2);
    }
    // k_N is nondecreasing in N, so bisect for the largest N with k_N <= k.
    while (bad - good > 1) {
        const std::uint64_t mid = good + (bad - good) / 2;
        (k_of_modulus(r, C, mid) <= k ? good : bad) = mid;
    }
    for (std::uint64_t N = good; N >= lo; --N) {
        if (is_prime(N)) return N;
    }
    throw std::invalid_argument("select_modulus: no prime in [" + std::to_string(lo) + ", " + std::to_string(good) + "]");
}

Coloring build_coloring(std::span<const Residue> I, std::uint64_t N) {
    if (N < 1) throw std::invalid_argument("build_coloring: N must be positive");
    Coloring c;
    c.n = N - 1;
    for (Residue x : I) {
        if (x >= 1 && x <= c.n) c.red.push_back(x);
    }
    std::sort(c.red.begin(), c.red.end());
    c.red.erase(std::unique(c.red.begin(), c.red.end()), c.red.end());
    return c;
}

namespace {

std::vector<std::uint8_t> red_mask(const Coloring& c) {
    std::vector<std::uint8_t> mask(c.n + 1, 0);
    for (std::uint64_t x : c.red) {
        if (x < 1 || x > c.n) throw std::invalid_argument("coloring: red element " + std::to_string(x) + " outside [1, n]");
        mask[x] = 1;
    }
    return mask;
}

// First (a, d) in lexicographic order whose length-`len` AP lies entirely in
// the color `want` (1 = red, 0 = blue).
std::optional<IntegerAP> first_mono_ap(const std::vector<std::uint8_t>& mask, std::uint64_t n, std::uint64_t len,
                                       std::uint8_t want) {
    if (len > n) return std::nullopt;
    for (std::uint64_t a = 1; a + (len - 1) <= n; ++a) {
        if (mask[a] != want) continue;
        for (std::uint64_t d = 1; a + (len - 1) * d <= n; ++d) {
            std::uint64_t j = 1;
            while (j < len && mask[a + j * d] == want) ++j;
            if (j == len) return IntegerAP{a, d, len};
        }
    }
    return std::nullopt;
}

std::uint64_t longest_blue_ap(const std::vector<std::uint8_t>& mask, std::uint64_t n) {
    std::uint64_t best = 0;
    for (std::uint64_t x = 1; x <= n; ++x) {
        if (!mask[x]) {
            best = 1;
            break;
        }
    }
    if (best == 0) return 0;
    for (std::uint64_t d = 1; d < n; ++d) {
        // Any AP with difference d has at most floor((n-1)/d) + 1 terms.
        if ((n - 1) / d + 1 <= best) break;
        for (std::uint64_t start = 1; start <= d && start <= n; ++start) {
            std::uint64_t run = 0;
            for (std::uint64_t x = start; x <= n; x += d) {
                run = mask[x] ? 0 : run + 1;
                best = std::max(best, run);
            }
        }
    }
    return best;
}

}  // namespace

VdwVerdict check_coloring(const Coloring& c, std::uint64_t r, std::uint64_t k) {
    if (r < 2 || k < 2) throw std::invalid_argument("check_coloring: r and k must be at least 2");
    const auto mask = red_mask(c);
    VdwVerdict v;
    v.red_ap = first_mono_ap(mask, c.n, r, 1);
    v.blue_ap = first_mono_ap(mask, c.n, k, 0);
    v.longest_blue = longest_blue_ap(mask, c.n);
    return v;
}

namespace {

// Backtracking over colorings of [n] with unit propagation. Each AP forbids
// one color on all of its members; an AP is live while no member carries the
// other color.
class VdwSearch {
public:
    VdwSearch(std::uint64_t n, std::uint64_t r, std::uint64_t k) : n_(n), color_(n + 1, kUnset), incident_(n + 1) {
        add_aps(r, kRed);
        add_aps(k, kBlue);
    }

    bool solve() { return search(); }
    std::uint64_t nodes() const { return nodes_; }

    Coloring coloring() const {
        Coloring c;
        c.n = n_;
        for (std::uint64_t x = 1; x <= n_; ++x) {
            if (color_[x] == kRed) c.red.push_back(x);
        }
        return c;
    }

private:
    static constexpr int kUnset = -1;
    static constexpr int kBlue = 0;
    static constexpr int kRed = 1;

    struct Ap {
        std::vector<std::uint32_t> members;
        int forbidden;
        std::uint32_t same = 0;   // members colored `forbidden`
        std::uint32_t other = 0;  // members colored the other way
    };

    void add_aps(std::uint64_t len, int forbidden) {
        if (len > n_) return;
        for (std::uint64_t d = 1; 1 + (len - 1) * d <= n_; ++d) {
            for (std::uint64_t a = 1; a + (len - 1) * d <= n_; ++a) {
                Ap ap{{}, forbidden};
                for (std::uint64_t j = 0; j < len; ++j) ap.members.push_back(static_cast<std::uint32_t>(a + j * d));
                const auto id = static_cast<std::uint32_t>(aps_.size());
                for (auto x : ap.members) incident_[x].push_back(id);
                aps_.push_back(std::move(ap));
            }
        }
    }

    // Colors x and queues forced colors; returns false on a monochromatic AP.
    bool assign(std::uint32_t x, int c) {
        color_[x] = c;
        trail_.push_back(x);
        bool ok = true;
        for (auto id : incident_[x]) {
            Ap& ap = aps_[id];
            (ap.forbidden == c ? ap.same : ap.other) += 1;
            if (ap.other == 0 && ap.same == ap.members.size()) ok = false;
            if (ok && ap.other == 0 && ap.same + 1 == ap.members.size()) {
                for (auto y : ap.members) {
                    if (color_[y] == kUnset) queue_.push_back({y, 1 - ap.forbidden});
                }
            }
        }
        return ok;
    }

    void undo_to(std::size_t mark) {
        while (trail_.size() > mark) {
            const auto x = trail_.back();
            trail_.pop_back();
            const int c = color_[x];
            for (auto id : incident_[x]) {
                Ap& ap = aps_[id];
                (ap.forbidden == c ? ap.same : ap.other) -= 1;
            }
            color_[x] = kUnset;
        }
    }

    bool propagate() {
        while (!queue_.empty()) {
            const auto [x, c] = queue_.back();
            queue_.pop_back();
            if (color_[x] == c) continue;
            if (color_[x] != kUnset || !assign(x, c)) {
                queue_.clear();
                return false;
            }
        }
        return true;
    }

    // First fail: the uncolored number whose live APs are closest to complete.
    std::uint32_t pick() const {
        std::uint32_t best = 0;
        std::uint64_t best_score = 0;
        for (std::uint32_t x = 1; x <= n_; ++x) {
            if (color_[x] != kUnset) continue;
            std::uint64_t score = 1;
            for (auto id : incident_[x]) {
                const Ap& ap = aps_[id];
                if (ap.other == 0) score += std::uint64_t{1} << std::min<std::uint32_t>(ap.same, 40);
            }
            if (best == 0 || score > best_score) {
                best = x;
                best_score = score;
            }
        }
        return best;
    }

    bool search() {
        ++nodes_;
        const std::uint32_t x = pick();
        if (x == 0) return true;
        for (int c : {kBlue, kRed}) {
            const std::size_t mark = trail_.size();
            if (assign(x, c) && propagate() && search()) return true;
            queue_.clear();
            undo_to(mark);
        }
        return false;
    }

    std::uint64_t n_;
    std::vector<int> color_;
    std::vector<std::vector<std::uint32_t>> incident_;
    std::vector<Ap> aps_;
    std::vector<std::uint32_t> trail_;
    std::vector<std::pair<std::uint32_t, int>> queue_;
    std::uint64_t nodes_ = 0;
};

}  // namespace

ExactVdwResult exact_vdw(std::uint64_t r, std::uint64_t k, std::uint64_t nMax, std::uint64_t guard) {
    if (r < 2 || k < 2) throw std::invalid_argument("exact_vdw: r and k must be at least 2");
    if (nMax > guard) {
        throw std::invalid_argument("exact_vdw: nMax=" + std::to_string(nMax) + " exceeds the search guard " +
                                    std::to_string(guard));
    }
    ExactVdwResult result;
    result.certificate.n = 0;
    for (std::uint64_t n = 1; n <= nMax; ++n) {
        VdwSearch search(n, r, k);
        const bool found = search.solve();
        result.nodes += search.nodes();
        if (!found) {
            result.value = n;
            return result;
        }
        result.certificate = search.coloring();
    }
    result.exceeds_bound = true;
    return result;
}

WitnessResult lower_bound_witness(unsigned r, std::uint64_t k, const WitnessOptions& options, std::uint64_t seed) {
    if (r < 3) throw std::invalid_argument("lower_bound_witness: r must be at least 3");
    WitnessResult w;
    w.k = k;
    w.C = options.C.value_or(default_hitting_constant(r, options.xi));
    w.N = select_modulus(r, k, w.C, std::max<std::uint64_t>(options.N0, r + 1));
    w.n = w.N - 1;
    RingContext ctx = make_context(w.N, r);
    w.params = make_ap_params(ctx, options.xi, options.delta, options.mode);
    APProcess process(std::move(ctx), w.params, seed);
    MonitorConfig cfg = default_monitor_config(w.params);
    cfg.enabled = options.monitor;
    RunResult run_result = run(process, cfg);
    w.terminated_early = run_result.terminated_early;
    w.I = std::move(run_result.I);
    w.coloring = build_coloring(w.I, w.N);
    w.verdict = check_coloring(w.coloring, r, std::max<std::uint64_t>(k, 2));
    w.success = !w.verdict.red_ap && w.verdict.longest_blue < k;
    return w;
}

void write_coloring(std::ostream& out, const Coloring& c) {
    out << "n=" << c.n << '\n';
    for (std::size_t j = 0; j < c.red.size(); ++j) out << (j ? " " : "") << c.red[j];
    out << '\n';
}

Coloring read_coloring(std::istream& in) {
    std::string line;
    std::uint64_t lineno = 0;
    auto fail = [&](const std::string& what) {
        throw std::runtime_error("coloring line " + std::to_string(lineno) + ": " + what);
    };
    auto next_content = [&]() -> bool {
        while (std::getline(in, line)) {
            ++lineno;
            if (!line.empty() && line.back() == '\r') line.pop_back();
            if (!line.empty() && line[0] == '#') continue;
            return true;
        }
        return false;
    };

    if (!next_content()) throw std::runtime_error("coloring: missing \"n=<n>\" line");
    Coloring c;
    if (line.rfind("n=", 0) != 0) fail("expected \"n=<n>\"");
    try {
        std::size_t used = 0;
        c.n = std::stoull(line.substr(2), &used);
        if (used != line.size() - 2) fail("trailing characters after n");
    } catch (const std::logic_error&) {
        fail("malformed n");
    }
    if (next_content()) {
        std::istringstream tokens(line);
        std::string tok;
        while (tokens >> tok) {
            std::uint64_t x = 0;
            try {
                std::size_t used = 0;
                x = std::stoull(tok, &used);
                if (used != tok.size()) fail("malformed element '" + tok + "'");
            } catch (const std::logic_error&) {
                fail("malformed element '" + tok + "'");
            }
            if (x < 1 || x > c.n) fail("element " + tok + " outside [1, n]");
            c.red.push_back(x);
        }
        if (next_content() && line.find_first_not_of(" \t") != std::string::npos) fail("unexpected extra content");
    }
    std::sort(c.red.begin(), c.red.end());
    if (std::adjacent_find(c.red.begin(), c.red.end()) != c.red.end()) fail("duplicate red element");
    return c;
}

}  // namespace randgreedy
