#pragma once

#include <functional>
#include <vector>

#include "torapot/context.hpp"
#include "torapot/corpus.hpp"
#include "torapot/grid.hpp"
#include "torapot/report.hpp"
#include "torapot/weight.hpp"

namespace torapot {

// chi rescaled so that chi(1) = 1.
Weight normalize_weight(const Weight& chi);

// Exact largest minorant with slopes in [lo, hi] by enumerating all pairwise slopes.
std::vector<double> brute_force_envelope_1d(const std::vector<double>& xs, const std::vector<double>& fs, double lo,
                                            double hi);

CertificateReport envelope_oracle_check(const ModelContext& ctx, const ScalarField& f);
// dim 1: node masses equal the clipped slope jumps exactly.
CertificateReport ma_exactness_check(const ModelContext& ctx, const ScalarField& u);
// MA(|x|^2 / 2) on the body [-1,1]^2 has total mass 4.
CertificateReport ma_quadratic_mass_check(int resolution);

// MA(max(u, phi - j)) equals MA(u) on the interior of {u > phi - j}.
CertificateReport plurifine_check(const ModelContext& ctx, const ScalarField& u, const ScalarField& phi, double j);
// E_chi(max(u, phi - j), phi) is nondecreasing in j and reaches E_chi(u, phi).
CertificateReport energy_increase_check(const ModelContext& ctx, const ScalarField& u, const ScalarField& phi,
                                        const Weight& chi, int steps = 24);
// One report per weight, sharing the Monge-Ampere measures of the cutoffs.
std::vector<CertificateReport> energy_increase_check(const ModelContext& ctx, const ScalarField& u,
                                                     const ScalarField& phi, const std::vector<Weight>& chis,
                                                     int steps = 24);
// Gap law of u (normalized, gaps clamped below at 1, mass 0.9) plus a synthetic
// tail of mass 0.1 at gaps t* + k, k = 1..200, weighted by k^{-3}.
struct GapLaw {
    std::vector<double> gaps, masses;
};
GapLaw gap_law_with_tail(const ModelContext& ctx, const ScalarField& u, const ScalarField& phi);
// construct_weight on gap_law_with_tail.
CertificateReport weight_construct_check(const ModelContext& ctx, const ScalarField& u, const ScalarField& phi);

CertificateReport mt_certificate(const ModelContext& ctx, const ScalarField& u, const ScalarField& phi,
                                 const Weight& chi1, double beta, const SkodaSurrogate& skoda);
CertificateReport mass_profile_bound(const ModelContext& ctx, const ScalarField& u, const ScalarField& phi,
                                     const Weight& chi1, const SkodaSurrogate& skoda);

// dim 2: E_p finite with p = n/(n-1) and the conjugate-pair chain.
CertificateReport inclusion_check(const ModelContext& ctx, const ScalarField& u, const ScalarField& phi,
                                  const SkodaSurrogate& skoda);
// dim 1: sup |u - phi| stays put (variation < 5%) as the grid is refined.
CertificateReport inclusion_refinement_1d(const Body& body, Interval bounds, const std::function<double(double)>& u,
                                          const std::vector<int>& resolutions);

CertificateReport perturbation_scan(const ModelContext& ctx, const ScalarField& u, const std::vector<double>& ts);

CertificateReport subentropy_check(const std::vector<double>& mu1, const std::vector<double>& mu2,
                                   const std::vector<double>& mu3, uint64_t seed);
// three random probability vectors with mu2 = f2 mu3, f2 in [1/4, 4]
std::array<std::vector<double>, 3> random_measure_triple(Rng& rng, size_t n);

// 1-D: max(x, 0) has an atom, hence infinite entropy, and the same singularity type as 0.
CertificateReport atomic_entropy_demo(const ModelContext& ctx);

// 1-D convex potential (values on the grid, a(x_0) = 0) whose Alexandrov
// masses are the given node masses; they must sum to the body length.
std::vector<double> potential_from_masses_1d(const GridDomain& d, double lo, double hi, const std::vector<double>& m);

struct FamilySample {
    std::string name;
    ScalarField u;
    double entropy = 0;
};

// Separable 2-D potentials a(x) + a(y) on a square box context whose density
// piles up on a shrinking central square; samples with entropy above B are dropped.
std::vector<FamilySample> entropy_family_2d(const ModelContext& ctx, double B);
// sup over samples with entropy <= B of E_p; nondecreasing in B by construction.
double budget_sup_energy(const ModelContext& ctx, const std::vector<FamilySample>& family, double B);

// Exploratory: does finite entropy survive the perturbation theta + eps omega?
CertificateReport stability_experiment(const ModelContext& ctx, uint64_t seed, int count);

}  // namespace torapot
