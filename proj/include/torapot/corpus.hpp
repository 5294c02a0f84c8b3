#pragma once

#include <array>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "torapot/context.hpp"
#include "torapot/grid.hpp"

namespace torapot {

// mt19937_64 with a fixed mapping to doubles, so streams match across
// standard libraries.
struct Rng {
    std::mt19937_64 gen;
    explicit Rng(uint64_t seed) : gen(seed) {}
    double uniform(double a = 0, double b = 1) { return a + (b - a) * ((gen() >> 11) * 0x1.0p-53); }
    int integer(int lo, int hi) { return lo + static_cast<int>(gen() % static_cast<uint64_t>(hi - lo + 1)); }
};

std::array<double, 2> sample_slope(const Body& body, Rng& rng);

// max of k affine functions with slopes in the body and offsets in [-1, 0];
// smoothing > 0 replaces the max by smoothing * log sum exp(./smoothing).
ScalarField max_affine(const ModelContext& ctx, const std::vector<std::array<double, 3>>& pieces, double smoothing);
ScalarField random_admissible(const ModelContext& ctx, Rng& rng, int max_pieces = 12, double smoothing = 0);

struct CorpusItem {
    std::string name;
    ScalarField u;
};

// Half plain max-affine, half soft-max smoothed.
std::vector<CorpusItem> fuzz_corpus(const ModelContext& ctx, uint64_t seed, int count);

// u shifted so that sup(u - phi) = -1.
ScalarField normalize_sup(const ScalarField& u, const ScalarField& phi);

/*
 * Measured stand-in for the uniform Skoda constants: c0 is the largest
 * dyadic c in [2^-6, 2^6] with max over probes of int e^{-c h} rho <= 1e3,
 * C0 the larger of that maximum and the cone bound, which dominates every
 * normalized admissible h.
 */
struct SkodaSurrogate {
    double c0 = 0, C0 = 0;
    double probe_max = 0, cone_bound = 0;
    int probes = 0;
    double C() const;             // C0 (e^{c0} + 1)
    double log_C() const;
    double S(int n) const;        // (2 log C / c0)^n
};

SkodaSurrogate skoda_surrogate(const ModelContext& ctx, uint64_t seed, int probes);

}  // namespace torapot
