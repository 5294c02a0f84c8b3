#pragma once

#include <array>
#include <cstddef>
#include <memory>
#include <vector>

namespace torapot {

struct Interval {
    double lo = 0, hi = 0;
    double length() const { return hi - lo; }
};

struct GridDomain {
    int dim = 1;
    std::array<Interval, 2> bounds{};
    std::array<int, 2> resolution{1, 1};
    double cell_volume = 0;

    size_t size() const { return static_cast<size_t>(resolution[0]) * (dim == 2 ? resolution[1] : 1); }
    double spacing(int axis) const { return bounds[axis].length() / (resolution[axis] - 1); }
    // Node i is (i % n0, i / n0) in dim 2.
    double coord(size_t i, int axis) const;
    std::array<int, 2> multi(size_t i) const;
    bool on_boundary(size_t i) const;
    double diameter() const;
    bool operator==(const GridDomain& o) const;
};

GridDomain build_domain(int dim, const std::vector<Interval>& bounds, int resolution);
GridDomain build_domain(int dim, const std::vector<Interval>& bounds, const std::vector<int>& resolution);

/*
 * Grid potential. A masked node stands for the value -inf; whatever finite
 * number is stored there is used only as a convex completion for subgradient
 * geometry and never enters integrals or comparisons.
 */
struct ScalarField {
    GridDomain domain;
    std::vector<double> values;
    std::vector<char> mask;  // empty means nothing masked

    ScalarField() = default;
    ScalarField(GridDomain d, std::vector<double> v, std::vector<char> m = {});
    bool masked(size_t i) const { return !mask.empty() && mask[i]; }
    bool any_masked() const;
    size_t size() const { return values.size(); }
};

ScalarField field_from(const GridDomain& d, double (*f)(double, double));
template <class F>
ScalarField make_field(const GridDomain& d, F f) {
    std::vector<double> v(d.size());
    for (size_t i = 0; i < v.size(); ++i) v[i] = f(d.coord(i, 0), d.dim == 2 ? d.coord(i, 1) : 0.0);
    return ScalarField(d, std::move(v));
}

struct DiscreteMeasure {
    GridDomain domain;
    std::vector<double> weights;
    double singular_mass = 0;
    std::vector<double> density;  // set together with density_wrt
    std::shared_ptr<const DiscreteMeasure> density_wrt;

    DiscreteMeasure() = default;
    DiscreteMeasure(GridDomain d, std::vector<double> w, double singular = 0);
    double total() const;
    double absolutely_continuous_total() const;
    DiscreteMeasure normalized() const;
};

DiscreteMeasure uniform_measure(const GridDomain& d);

double integrate(const std::vector<double>& g, const DiscreteMeasure& mu);
double integrate(const ScalarField& g, const DiscreteMeasure& mu);

enum class Level { strict_below, gap_at_least };
// mu({u < phi - t}) or mu({phi - u >= t}). Masked nodes of u have infinite gap.
double superlevel_mass(const ScalarField& u, const ScalarField& phi, double t, const DiscreteMeasure& mu,
                       Level level = Level::strict_below);

ScalarField pointwise_max(const ScalarField& u, const ScalarField& v);
ScalarField pointwise_min(const ScalarField& u, const ScalarField& v);
ScalarField shift(const ScalarField& u, double c);
ScalarField add(const ScalarField& u, const ScalarField& v, double tv = 1.0);
// sup over nodes unmasked in both of u - phi.
double sup_rel(const ScalarField& u, const ScalarField& phi);

void require_same_domain(const GridDomain& a, const GridDomain& b);

}  // namespace torapot
