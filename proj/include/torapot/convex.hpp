#pragma once

#include <vector>

#include "torapot/context.hpp"
#include "torapot/geometry.hpp"
#include "torapot/grid.hpp"

namespace torapot {

// Slope lattice inside the gradient body. The origin is always a node.
struct DualGrid {
    Body polytope;
    int resolution = 0;
    std::array<std::vector<double>, 2> axis;  // per-axis lattice coordinates
    std::vector<std::array<double, 2>> nodes;
    std::vector<size_t> lattice_index;  // node -> index into the full axis product

    size_t size() const { return nodes.size(); }
};

DualGrid make_dual(const Body& body, int resolution);

struct DualField {
    DualGrid dual;
    std::vector<double> values;
};

// Exact discrete conjugate f*(y) = max_k x_k y - f_k over finite entries,
// evaluated at sorted ys through the lower hull.
std::vector<double> conjugate_1d(const std::vector<double>& xs, const std::vector<double>& fs,
                                 const std::vector<double>& ys);

bool is_convex(const ScalarField& u, double tol = 1e-10);
DualField legendre(const ScalarField& u, const DualGrid& dual);
// max over slope nodes of <x, y> - g(y), back on the primal grid.
ScalarField legendre_back(const DualField& g, const GridDomain& domain);

/*
 * Power cells of (x_k, f_k): the slopes y in `start` at which node i minimizes
 * f_k - <y, x_k> among nodes with use[k]. Cells of unused nodes are empty.
 * `relax` loosens every constraint by that amount.
 */
std::vector<Polygon> power_cells_2d(const GridDomain& d, const std::vector<double>& f, const std::vector<char>& use,
                                    const Polygon& start, double relax = 0.0,
                                    const std::vector<char>* only = nullptr);
// Same in dim 1, as [left, right] slope intervals clipped to [lo, hi]; empty when left > right.
std::vector<std::array<double, 2>> power_cells_1d(const GridDomain& d, const std::vector<double>& f,
                                                  const std::vector<char>& use, double lo, double hi);

// Largest convex minorant of f with subgradients in the body. Masked nodes of f
// impose no constraint and stay masked in the result.
ScalarField p_envelope(const Body& body, const ScalarField& f);
inline ScalarField p_envelope(const ModelContext& ctx, const ScalarField& f) { return p_envelope(ctx.body, f); }

// Nodes whose constraint is (nearly) active on the power cell of node i in
// `start`; the cell is unchanged by any modification away from these nodes.
std::vector<size_t> power_cell_support(const GridDomain& d, const std::vector<double>& f, const std::vector<char>& use,
                                       const Polygon& start, size_t i, double tol);

std::vector<char> contact_set(const ScalarField& f, const ScalarField& env, double tol);
double default_contact_tol(const ScalarField& f);

}  // namespace torapot
