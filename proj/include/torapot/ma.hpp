#pragma once

#include <vector>

#include "torapot/context.hpp"
#include "torapot/grid.hpp"

namespace torapot {

struct MaResult {
    DiscreteMeasure measure;
    bool clamped = false;  // some interior subgradient left the body
};

// Alexandrov measure of u with cells clipped to `body`; masked cells dropped.
MaResult ma_in_body(const GridDomain& d, const Body& body, const ScalarField& u);

DiscreteMeasure ma_measure(const ModelContext& ctx, const ScalarField& u);
MaResult ma_measure_ex(const ModelContext& ctx, const ScalarField& u);
double mass(const ModelContext& ctx, const ScalarField& u);

constexpr double kAtomFactor = 50.0;

// Absolutely continuous part w.r.t. reference_density plus singular_mass.
// Only interior nodes can be atoms: boundary nodes absorb the slopes that
// leave the domain and are large by construction.
DiscreteMeasure ma_density(const ModelContext& ctx, const ScalarField& u);
DiscreteMeasure density_split(const ModelContext& ctx, const DiscreteMeasure& m);

// Polarized mixed measure with j copies of u and n - j copies of v. Raw node
// values (rounding may leave tiny negatives).
std::vector<double> mixed_ma_raw(const ModelContext& ctx, const ScalarField& u, const ScalarField& v, int j);
DiscreteMeasure mixed_ma(const ModelContext& ctx, const ScalarField& u, const ScalarField& v, int j);

struct PerturbedMa {
    double t = 0;
    std::vector<double> direct;     // MA(u + t r) on body + tQ
    std::vector<double> expansion;  // sum_j binom(n, j) t^{n-j} mu_j
    std::vector<double> s_direct;   // densities w.r.t. reference_density
    std::vector<double> s_expansion;
    bool clamped = false;
};

// Terms of the binomial expansion: h[j] is binom(n, j) times the mixed
// measure with j copies of u and n - j copies of r, so that
// MA(u + t r) = sum_j t^{n-j} h[j].
struct PerturbationBasis {
    std::vector<std::vector<double>> h;
};

PerturbationBasis perturbation_basis(const ModelContext& ctx, const ScalarField& u);
PerturbedMa perturbed_ma(const ModelContext& ctx, const ScalarField& u, double t);
PerturbedMa perturbed_ma(const ModelContext& ctx, const ScalarField& u, double t, const PerturbationBasis& basis);

}  // namespace torapot
