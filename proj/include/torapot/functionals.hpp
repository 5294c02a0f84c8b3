#pragma once

#include <string>
#include <vector>

#include "torapot/context.hpp"
#include "torapot/grid.hpp"
#include "torapot/weight.hpp"

namespace torapot {

// A real number or +inf, with +inf kept as a tag rather than an overflow.
struct ExtReal {
    double value = 0;
    bool infinite = false;

    static ExtReal finite(double v) { return {v, false}; }
    static ExtReal inf() { return {0, true}; }
    bool is_finite() const { return !infinite; }
    double as_double() const;  // +inf for the infinite tag
    std::string str() const;   // "INF" or the shortest round-trip decimal
};

// int chi(|u - phi|) MA(u). Requires mass(u) = mass(phi) within 1e-8.
ExtReal energy_chi(const ModelContext& ctx, const ScalarField& u, const ScalarField& phi, const Weight& chi);
// Same with MA(u) and mass(phi) already computed.
ExtReal energy_chi(const DiscreteMeasure& mu, double mass_phi, const ScalarField& u, const ScalarField& phi,
                   const Weight& chi);

// m^{-1} sum f log f rho - log m, or +inf when MA(u) has singular mass.
ExtReal entropy(const ModelContext& ctx, const ScalarField& u);
ExtReal entropy_of(const DiscreteMeasure& split);  // from a density_split measure

// sum mu_i log(mu_i / nu_i). Inputs must be probabilities unless normalize is set.
ExtReal rel_entropy(const DiscreteMeasure& mu, const DiscreteMeasure& nu, bool normalize = false);
ExtReal rel_entropy(const std::vector<double>& mu, const std::vector<double>& nu);

struct ConstructedWeight {
    Weight chi;
    // distinct values of t_1 = 1 <= t_2 <= ... <= t_K = t*; t[r] first
    // appears as t_{k[r]}
    std::vector<double> t;
    std::vector<double> k;
    std::vector<double> h;  // h between t[r] and t[r + 1]
    double K = 0;
    double series = 0;  // sum_{k < K} k^{-2}
    double bound = 0;   // chi(1) + series
    double integral = 0;  // int chi(gap) dmu
    bool truncated = false;  // gaps bounded: sequence stops at t*
};

// Weight with int chi(gap) dmu <= chi(1) + sum k^{-2}, built from a gap
// distribution with every gap >= 1 and total mass 1.
ConstructedWeight construct_weight_from_gaps(const std::vector<double>& gaps, const std::vector<double>& masses);
// Normalizes sup(u - phi) = -1 and mu to a probability first.
ConstructedWeight construct_weight(const ModelContext& ctx, const ScalarField& u, const ScalarField& phi,
                                   const DiscreteMeasure& mu);

// chi*(t) = e^t - t - 1 and chi(s) = (s + 1) log(s + 1) - s, with st <= chi(s) + chi*(t).
double conj_pair(double t);
double conj_weight(double s);
bool conj_inequality_check(double s, double t);
double conj_slack(double s, double t);

}  // namespace torapot
