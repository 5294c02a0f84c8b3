#pragma once
// Independent test-side oracles. These deliberately avoid the library's
// hull and power-cell code paths.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

namespace oracle {

// Largest f_k + y (x - x_k) minorant with slope y in [lo, hi], brute force:
// the optimum over y of a concave piecewise linear function sits at a
// pairwise slope or at an end of the interval.
inline std::vector<double> envelope_1d(const std::vector<double>& xs, const std::vector<double>& fs, double lo,
                                       double hi) {
    std::vector<double> cand{lo, hi};
    for (size_t a = 0; a < xs.size(); ++a)
        for (size_t b = a + 1; b < xs.size(); ++b) {
            const double s = (fs[b] - fs[a]) / (xs[b] - xs[a]);
            if (s > lo && s < hi) cand.push_back(s);
        }
    std::vector<double> conj(cand.size());
    for (size_t c = 0; c < cand.size(); ++c) {
        double m = -std::numeric_limits<double>::infinity();
        for (size_t k = 0; k < xs.size(); ++k) m = std::max(m, xs[k] * cand[c] - fs[k]);
        conj[c] = m;
    }
    std::vector<double> out(xs.size());
    for (size_t i = 0; i < xs.size(); ++i) {
        double m = -std::numeric_limits<double>::infinity();
        for (size_t c = 0; c < cand.size(); ++c) m = std::max(m, xs[i] * cand[c] - conj[c]);
        out[i] = m;
    }
    return out;
}

// Slope-jump Alexandrov masses for a convex 1-D grid function with cells
// clipped to [lo, hi]; boundary nodes take the outward slopes.
inline std::vector<double> slope_jumps(const std::vector<double>& f, double h, double lo, double hi) {
    const size_t n = f.size();
    std::vector<double> out(n);
    for (size_t i = 0; i < n; ++i) {
        const double left = i == 0 ? lo : std::max(lo, (f[i] - f[i - 1]) / h);
        const double right = i + 1 == n ? hi : std::min(hi, (f[i + 1] - f[i]) / h);
        out[i] = std::max(0.0, right - left);
    }
    return out;
}

// Small deterministic generator for test inputs.
struct Rng {
    uint64_t s;
    explicit Rng(uint64_t seed) : s(seed * 0x9E3779B97F4A7C15ull + 1) {}
    uint64_t next() {
        s ^= s << 13;
        s ^= s >> 7;
        s ^= s << 17;
        return s;
    }
    double uniform(double a = 0, double b = 1) { return a + (b - a) * ((next() >> 11) * 0x1.0p-53); }
};

}  // namespace oracle
