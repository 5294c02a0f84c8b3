#include "torapot/envelopes.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "torapot/convex.hpp"
#include "torapot/ma.hpp"

namespace torapot {

ScalarField rooftop(const ModelContext& ctx, const ScalarField& psi, const ScalarField& phi) {
    return p_envelope(ctx, pointwise_min(psi, phi));
}

ModelEnvelope model_envelope_ex(const ModelContext& ctx, const ScalarField& psi, const ScalarField& phi) {
    require_same_domain(psi.domain, phi.domain);
    ModelEnvelope out{rooftop(ctx, shift(psi, 1.0), phi), 1.0, 0, false};
    for (int k = 1; k <= 60; ++k) {
        const double c = std::ldexp(1.0, k);
        ScalarField next = rooftop(ctx, shift(psi, c), phi);
        double change = 0;
        for (size_t i = 0; i < next.size(); ++i) change = std::max(change, std::fabs(next.values[i] - out.field.values[i]));
        out.field = std::move(next);
        out.constant = c;
        out.doublings = k;
        if (change < 1e-10) {
            out.stabilized = true;
            break;
        }
    }
    return out;
}

ScalarField model_envelope(const ModelContext& ctx, const ScalarField& psi, const ScalarField& phi) {
    auto r = model_envelope_ex(ctx, psi, phi);
    if (!r.stabilized) throw std::domain_error("model_envelope: no stabilization after 60 doublings");
    return r.field;
}

ModelCheck is_model(const ModelContext& ctx, const ScalarField& phi) {
    ModelCheck c;
    auto env = model_envelope_ex(ctx, phi, ctx.zero());
    c.deviation = 0;
    bool masks_agree = true;
    for (size_t i = 0; i < phi.size(); ++i) {
        if (phi.masked(i) != env.field.masked(i)) masks_agree = false;
        if (!phi.masked(i)) c.deviation = std::max(c.deviation, std::fabs(phi.values[i] - env.field.values[i]));
    }
    c.mass = mass(ctx, phi);
    c.envelope_mass = mass(ctx, env.field);
    c.mass_match = std::fabs(c.mass - c.envelope_mass) <= 1e-8 * std::max(c.mass, c.envelope_mass);
    c.model = env.stabilized && masks_agree && c.deviation <= 1e-8;
    return c;
}

ScalarField cutoff(const ScalarField& u, const ScalarField& phi, double j) {
    require_same_domain(u.domain, phi.domain);
    if (!(j >= 0)) throw std::invalid_argument("cutoff: j must be nonnegative");
    if (std::isinf(j)) return u;
    std::vector<double> out(u.size());
    std::vector<char> m;
    for (size_t i = 0; i < out.size(); ++i) {
        const bool mu = u.masked(i), mp = phi.masked(i);
        const double lower = phi.values[i] - j;
        if (mu && mp) {
            if (m.empty()) m.assign(out.size(), 0);
            m[i] = 1;
            out[i] = std::max(u.values[i], lower);
        } else if (mu) {
            out[i] = lower;
        } else if (mp) {
            out[i] = u.values[i];
        } else {
            out[i] = std::max(u.values[i], lower);
        }
    }
    return ScalarField(u.domain, std::move(out), std::move(m));
}

std::string to_string(Singularity s) {
    switch (s) {
        case Singularity::less_singular: return "less_singular";
        case Singularity::more_singular: return "more_singular";
        case Singularity::same: return "same";
        case Singularity::incomparable: return "incomparable";
    }
    return "incomparable";
}

double boundedness_threshold(const ModelContext& ctx) { return 1e3 * ctx.domain.diameter() * ctx.body.diameter(); }

namespace {

// u <= v + C at this resolution
bool below(const ScalarField& u, const ScalarField& v, double threshold) {
    for (size_t i = 0; i < u.size(); ++i)
        if (v.masked(i) && !u.masked(i)) return false;
    return sup_rel(u, v) <= threshold;
}

}  // namespace

Singularity singularity_cmp(const ModelContext& ctx, const ScalarField& u, const ScalarField& v) {
    require_same_domain(u.domain, v.domain);
    const double t = boundedness_threshold(ctx);
    const bool uv = below(u, v, t), vu = below(v, u, t);
    if (uv && vu) return Singularity::same;
    if (uv) return Singularity::more_singular;
    if (vu) return Singularity::less_singular;
    return Singularity::incomparable;
}

}  // namespace torapot
