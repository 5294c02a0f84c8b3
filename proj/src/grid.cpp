#include "torapot/grid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace torapot {

double GridDomain::coord(size_t i, int axis) const {
    const auto m = multi(i);
    return bounds[axis].lo + m[axis] * spacing(axis);
}

std::array<int, 2> GridDomain::multi(size_t i) const {
    if (dim == 1) return {static_cast<int>(i), 0};
    return {static_cast<int>(i % resolution[0]), static_cast<int>(i / resolution[0])};
}

bool GridDomain::on_boundary(size_t i) const {
    const auto m = multi(i);
    if (m[0] == 0 || m[0] == resolution[0] - 1) return true;
    return dim == 2 && (m[1] == 0 || m[1] == resolution[1] - 1);
}

double GridDomain::diameter() const {
    double s = 0;
    for (int a = 0; a < dim; ++a) s += bounds[a].length() * bounds[a].length();
    return std::sqrt(s);
}

bool GridDomain::operator==(const GridDomain& o) const {
    if (dim != o.dim) return false;
    for (int a = 0; a < dim; ++a)
        if (bounds[a].lo != o.bounds[a].lo || bounds[a].hi != o.bounds[a].hi || resolution[a] != o.resolution[a])
            return false;
    return true;
}

GridDomain build_domain(int dim, const std::vector<Interval>& bounds, const std::vector<int>& resolution) {
    if (dim != 1 && dim != 2) throw std::invalid_argument("unsupported dimension " + std::to_string(dim));
    if (static_cast<int>(bounds.size()) != dim && bounds.size() != 1)
        throw std::invalid_argument("bounds must list one interval per axis");
    if (static_cast<int>(resolution.size()) != dim && resolution.size() != 1)
        throw std::invalid_argument("resolution must list one count per axis");
    GridDomain d;
    d.dim = dim;
    d.cell_volume = 1;
    for (int a = 0; a < dim; ++a) {
        const Interval iv = bounds.size() == 1 ? bounds[0] : bounds[a];
        const int r = resolution.size() == 1 ? resolution[0] : resolution[a];
        if (!(iv.hi > iv.lo) || !std::isfinite(iv.lo) || !std::isfinite(iv.hi))
            throw std::invalid_argument("degenerate bounds");
        if (r < 3) throw std::invalid_argument("resolution must be at least 3");
        d.bounds[a] = iv;
        d.resolution[a] = r;
        d.cell_volume *= iv.length() / (r - 1);
    }
    return d;
}

GridDomain build_domain(int dim, const std::vector<Interval>& bounds, int resolution) {
    return build_domain(dim, bounds, std::vector<int>{resolution});
}

ScalarField::ScalarField(GridDomain d, std::vector<double> v, std::vector<char> m)
    : domain(d), values(std::move(v)), mask(std::move(m)) {
    if (values.size() != domain.size()) throw std::invalid_argument("field size does not match domain");
    if (!mask.empty() && mask.size() != values.size()) throw std::invalid_argument("mask size does not match domain");
    for (size_t i = 0; i < values.size(); ++i)
        if (!masked(i) && !std::isfinite(values[i])) throw std::invalid_argument("unmasked value must be finite");
}

bool ScalarField::any_masked() const { return std::any_of(mask.begin(), mask.end(), [](char c) { return c != 0; }); }

ScalarField field_from(const GridDomain& d, double (*f)(double, double)) { return make_field(d, f); }

DiscreteMeasure::DiscreteMeasure(GridDomain d, std::vector<double> w, double singular)
    : domain(d), weights(std::move(w)), singular_mass(singular) {
    if (weights.size() != domain.size()) throw std::invalid_argument("measure size does not match domain");
    for (double x : weights)
        if (!(x >= 0)) throw std::invalid_argument("measure weights must be nonnegative");
    if (!(singular_mass >= 0)) throw std::invalid_argument("singular mass must be nonnegative");
}

double DiscreteMeasure::absolutely_continuous_total() const {
    double s = 0;
    for (double x : weights) s += x;
    return s;
}

double DiscreteMeasure::total() const { return absolutely_continuous_total() + singular_mass; }

DiscreteMeasure DiscreteMeasure::normalized() const {
    const double t = total();
    if (!(t > 0)) throw std::domain_error("cannot normalize a zero measure");
    DiscreteMeasure m = *this;
    for (double& x : m.weights) x /= t;
    m.singular_mass /= t;
    m.density.clear();
    m.density_wrt.reset();
    return m;
}

DiscreteMeasure uniform_measure(const GridDomain& d) {
    return DiscreteMeasure(d, std::vector<double>(d.size(), 1.0 / d.size()));
}

void require_same_domain(const GridDomain& a, const GridDomain& b) {
    if (!(a == b)) throw std::invalid_argument("domain mismatch");
}

double integrate(const std::vector<double>& g, const DiscreteMeasure& mu) {
    if (g.size() != mu.weights.size()) throw std::invalid_argument("domain mismatch");
    double s = 0;
    for (size_t i = 0; i < g.size(); ++i) {
        if (mu.weights[i] == 0) continue;
        if (!std::isfinite(g[i])) throw std::domain_error("integrand infinite on a node carrying mass");
        s += g[i] * mu.weights[i];
    }
    return s;
}

double integrate(const ScalarField& g, const DiscreteMeasure& mu) {
    require_same_domain(g.domain, mu.domain);
    std::vector<double> v = g.values;
    for (size_t i = 0; i < v.size(); ++i)
        if (g.masked(i)) v[i] = -std::numeric_limits<double>::infinity();
    return integrate(v, mu);
}

double superlevel_mass(const ScalarField& u, const ScalarField& phi, double t, const DiscreteMeasure& mu, Level level) {
    require_same_domain(u.domain, phi.domain);
    require_same_domain(u.domain, mu.domain);
    if (!(t >= 0)) throw std::invalid_argument("level must be nonnegative");
    double s = 0;
    for (size_t i = 0; i < u.size(); ++i) {
        if (phi.masked(i)) continue;  // gap undefined where phi itself is -inf
        bool in;
        if (u.masked(i)) {
            in = true;
        } else {
            const double gap = phi.values[i] - u.values[i];
            in = level == Level::strict_below ? gap > t : gap >= t;
        }
        if (in) s += mu.weights[i];
    }
    return s;
}

namespace {
std::vector<char> mask_union(const ScalarField& u, const ScalarField& v) {
    if (u.mask.empty() && v.mask.empty()) return {};
    std::vector<char> m(u.size());
    for (size_t i = 0; i < m.size(); ++i) m[i] = u.masked(i) || v.masked(i);
    return m;
}
}  // namespace

ScalarField pointwise_max(const ScalarField& u, const ScalarField& v) {
    require_same_domain(u.domain, v.domain);
    std::vector<double> out(u.size());
    std::vector<char> m;
    if (u.any_masked() || v.any_masked()) m.assign(u.size(), 0);
    for (size_t i = 0; i < out.size(); ++i) {
        const bool mu = u.masked(i), mv = v.masked(i);
        if (mu && mv) {
            out[i] = std::max(u.values[i], v.values[i]);
            m[i] = 1;
        } else if (mu) {
            out[i] = v.values[i];
        } else if (mv) {
            out[i] = u.values[i];
        } else {
            out[i] = std::max(u.values[i], v.values[i]);
        }
    }
    return ScalarField(u.domain, std::move(out), std::move(m));
}

ScalarField pointwise_min(const ScalarField& u, const ScalarField& v) {
    require_same_domain(u.domain, v.domain);
    std::vector<double> out(u.size());
    for (size_t i = 0; i < out.size(); ++i) out[i] = std::min(u.values[i], v.values[i]);
    return ScalarField(u.domain, std::move(out), mask_union(u, v));
}

ScalarField shift(const ScalarField& u, double c) {
    ScalarField r = u;
    for (double& x : r.values) x += c;
    return r;
}

ScalarField add(const ScalarField& u, const ScalarField& v, double tv) {
    require_same_domain(u.domain, v.domain);
    std::vector<double> out(u.size());
    for (size_t i = 0; i < out.size(); ++i) out[i] = u.values[i] + tv * v.values[i];
    return ScalarField(u.domain, std::move(out), mask_union(u, v));
}

double sup_rel(const ScalarField& u, const ScalarField& phi) {
    require_same_domain(u.domain, phi.domain);
    double s = -std::numeric_limits<double>::infinity();
    for (size_t i = 0; i < u.size(); ++i)
        if (!u.masked(i) && !phi.masked(i)) s = std::max(s, u.values[i] - phi.values[i]);
    return s;
}

}  // namespace torapot
