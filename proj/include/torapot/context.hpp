#pragma once

#include "torapot/geometry.hpp"
#include "torapot/grid.hpp"

namespace torapot {

/*
 * Toric stand-in for (X, theta, omega). The reference potential is
 * r = lambda/2 |x - c|^2 + <b, x> with c the domain center, b the body's
 * center and lambda half the largest scale keeping r's gradients in the
 * body; its gradient image Q is kept for perturbations theta + t omega <->
 * body + tQ.
 */
struct ModelContext {
    GridDomain domain;
    Body body;
    Body reference_body;  // Q
    double reference_scale = 1;
    ScalarField reference_potential;
    DiscreteMeasure reference_density;  // MA(r) / mass(r), total 1
    std::vector<double> reference_cells;  // MA(r) node weights, unnormalized

    double volume() const { return body.volume(); }
    int dim() const { return domain.dim; }
    ScalarField zero() const { return ScalarField(domain, std::vector<double>(domain.size(), 0.0)); }
};

ModelContext make_context(const GridDomain& domain, const Body& body);

}  // namespace torapot
