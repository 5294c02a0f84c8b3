#pragma once

#include <string>

#include "torapot/context.hpp"
#include "torapot/grid.hpp"

namespace torapot {

// Largest admissible function below min(psi, phi).
ScalarField rooftop(const ModelContext& ctx, const ScalarField& psi, const ScalarField& phi);

struct ModelEnvelope {
    ScalarField field;
    double constant = 0;  // the C at which the envelope stopped moving
    int doublings = 0;
    bool stabilized = false;
};

// lim_{C -> inf} P(min(psi + C, phi)), by doubling C from 1.
ModelEnvelope model_envelope_ex(const ModelContext& ctx, const ScalarField& psi, const ScalarField& phi);
// Throws std::domain_error when the doubling does not stabilize.
ScalarField model_envelope(const ModelContext& ctx, const ScalarField& psi, const ScalarField& phi);

struct ModelCheck {
    bool model = false;
    double deviation = 0;  // sup |phi - P[phi]| over unmasked nodes
    double mass = 0;
    double envelope_mass = 0;
    bool mass_match = false;  // within 1e-8 relative
};

ModelCheck is_model(const ModelContext& ctx, const ScalarField& phi);

// max(u, phi - j). Masked nodes of u take phi - j; j = inf returns u.
ScalarField cutoff(const ScalarField& u, const ScalarField& phi, double j);

enum class Singularity { less_singular, more_singular, same, incomparable };

std::string to_string(Singularity s);

// "u <= v + C" is read as: v masked only where u is, and sup(u - v) over
// common unmasked nodes below 1e3 * diam(domain) * diam(body).
double boundedness_threshold(const ModelContext& ctx);
Singularity singularity_cmp(const ModelContext& ctx, const ScalarField& u, const ScalarField& v);

}  // namespace torapot
