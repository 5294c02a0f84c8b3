#include "torapot/ma.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "torapot/convex.hpp"

namespace torapot {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::vector<char> finite_nodes(const ScalarField& u) {
    std::vector<char> use(u.size());
    for (size_t i = 0; i < use.size(); ++i) use[i] = std::isfinite(u.values[i]);
    return use;
}

// Convexity over every node taking part in the geometry, masked completions included.
void require_convex(const ScalarField& u) {
    ScalarField g(u.domain, u.values, {});
    for (size_t i = 0; i < g.size(); ++i)
        if (!std::isfinite(g.values[i])) {
            g.mask.assign(g.size(), 0);
            break;
        }
    for (size_t i = 0; i < g.size() && !g.mask.empty(); ++i) g.mask[i] = !std::isfinite(g.values[i]);
    if (!is_convex(g)) throw std::domain_error("ma_measure: non-convex input");
}

MaResult ma_1d(const GridDomain& d, const Body& body, const ScalarField& u) {
    const auto use = finite_nodes(u);
    std::vector<size_t> idx;
    for (size_t i = 0; i < u.size(); ++i)
        if (use[i]) idx.push_back(i);
    if (idx.empty()) throw std::invalid_argument("ma_measure: all nodes masked");
    MaResult res{DiscreteMeasure(d, std::vector<double>(d.size(), 0.0)), false};
    const double h = d.spacing(0);
    for (size_t p = 0; p < idx.size(); ++p) {
        double left = -kInf, right = kInf;
        if (p > 0) left = (u.values[idx[p]] - u.values[idx[p - 1]]) / ((idx[p] - idx[p - 1]) * h);
        if (p + 1 < idx.size()) right = (u.values[idx[p + 1]] - u.values[idx[p]]) / ((idx[p + 1] - idx[p]) * h);
        if (p > 0 && p + 1 < idx.size() && (left < body.lo || right > body.hi)) res.clamped = true;
        const double len = std::min(right, body.hi) - std::max(left, body.lo);
        if (!u.masked(idx[p]) && len > 0) res.measure.weights[idx[p]] = len;
    }
    return res;
}

MaResult ma_2d(const GridDomain& d, const Body& body, const ScalarField& u) {
    const auto use = finite_nodes(u);
    if (std::none_of(use.begin(), use.end(), [](char c) { return c != 0; }))
        throw std::invalid_argument("ma_measure: all nodes masked");
    double x0 = kInf, x1 = -kInf, y0 = kInf, y1 = -kInf;
    for (auto v : body.poly) {
        x0 = std::min(x0, v.x);
        x1 = std::max(x1, v.x);
        y0 = std::min(y0, v.y);
        y1 = std::max(y1, v.y);
    }
    const double w = std::max(x1 - x0, y1 - y0) + 1;
    const Polygon big = box_polygon(x0 - w, x1 + w, y0 - w, y1 + w);
    auto cells = power_cells_2d(d, u.values, use, big);
    MaResult res{DiscreteMeasure(d, std::vector<double>(d.size(), 0.0)), false};
    const double tol = 1e-9 * w;
    for (size_t i = 0; i < d.size(); ++i) {
        if (!use[i]) continue;
        if (cells[i].empty()) {
            if (!d.on_boundary(i)) res.clamped = true;  // supporting slopes, if any, lie far outside
            continue;
        }
        if (!d.on_boundary(i))
            for (auto v : cells[i])
                if (!polygon_contains(body.poly, v, tol)) {
                    res.clamped = true;
                    break;
                }
        const double a = polygon_area(clip_convex(cells[i], body.poly));
        if (!u.masked(i) && a > 0) res.measure.weights[i] = a;
    }
    return res;
}

std::vector<double> ma_values(const GridDomain& d, const Body& body, const ScalarField& u) {
    return ma_in_body(d, body, u).measure.weights;
}

}  // namespace

MaResult ma_in_body(const GridDomain& d, const Body& body, const ScalarField& u) {
    require_same_domain(d, u.domain);
    if (body.dim != d.dim) throw std::invalid_argument("body dimension does not match domain");
    if (!u.mask.empty() && std::all_of(u.mask.begin(), u.mask.end(), [](char c) { return c != 0; }))
        throw std::invalid_argument("ma_measure: all nodes masked");
    require_convex(u);
    return d.dim == 1 ? ma_1d(d, body, u) : ma_2d(d, body, u);
}

ModelContext make_context(const GridDomain& domain, const Body& body) {
    if (body.dim != domain.dim) throw std::invalid_argument("body dimension does not match domain");
    ModelContext ctx;
    ctx.domain = domain;
    ctx.body = body;
    const int n = domain.dim;
    double c[2] = {0, 0}, half[2] = {0, 0}, b[2] = {0, 0};
    for (int a = 0; a < n; ++a) {
        c[a] = 0.5 * (domain.bounds[a].lo + domain.bounds[a].hi);
        half[a] = 0.5 * domain.bounds[a].length();
    }
    // slope offset: the body's center, so Q sits inside the body even when
    // the origin is on its boundary
    double lambda = kInf;
    if (n == 1) {
        b[0] = 0.5 * (body.lo + body.hi);
        lambda = std::min((body.hi - b[0]) / half[0], (b[0] - body.lo) / half[0]);
    } else {
        for (auto v : body.poly) {
            b[0] += v.x / body.poly.size();
            b[1] += v.y / body.poly.size();
        }
        const size_t m = body.poly.size();
        for (int sx = -1; sx <= 1; sx += 2)
            for (int sy = -1; sy <= 1; sy += 2) {
                const Vec2 z{sx * half[0], sy * half[1]};
                for (size_t e = 0; e < m; ++e) {
                    const Vec2 p = body.poly[e], q = body.poly[(e + 1) % m];
                    const Vec2 edge = q - p;
                    const Vec2 nrm{edge.y, -edge.x};  // outward for CCW
                    const double room = dot(nrm, p) - dot(nrm, Vec2{b[0], b[1]});
                    const double dz = dot(nrm, z);
                    if (dz > 0) lambda = std::min(lambda, room / dz);
                }
            }
    }
    if (!(lambda > 0) || !std::isfinite(lambda)) throw std::invalid_argument("gradient body has no interior");
    // Half the largest admissible scale, so Q stays strictly inside the body and
    // the boundary nodes of r absorb a fixed share of slopes at every resolution.
    lambda *= 0.5;
    ctx.reference_scale = lambda;
    ctx.reference_body.dim = n;
    if (n == 1) {
        ctx.reference_body.lo = b[0] - lambda * half[0];
        ctx.reference_body.hi = b[0] + lambda * half[0];
    } else {
        ctx.reference_body.poly = box_polygon(b[0] - lambda * half[0], b[0] + lambda * half[0],
                                              b[1] - lambda * half[1], b[1] + lambda * half[1]);
    }
    std::vector<double> r(domain.size());
    for (size_t i = 0; i < r.size(); ++i) {
        double s = 0;
        for (int a = 0; a < n; ++a) {
            const double x = domain.coord(i, a);
            s += 0.5 * lambda * (x - c[a]) * (x - c[a]) + b[a] * x;
        }
        r[i] = s;
    }
    ctx.reference_potential = ScalarField(domain, std::move(r));
    auto cells = ma_in_body(domain, body, ctx.reference_potential).measure.weights;
    const double tot = body.volume();
    std::vector<double> rho(cells.size());
    for (size_t i = 0; i < rho.size(); ++i) {
        if (!domain.on_boundary(i) && !(cells[i] > 0))
            throw std::domain_error("reference density vanishes at an interior node");
        rho[i] = cells[i] / tot;
    }
    ctx.reference_cells = std::move(cells);
    ctx.reference_density = DiscreteMeasure(domain, std::move(rho));
    return ctx;
}

MaResult ma_measure_ex(const ModelContext& ctx, const ScalarField& u) { return ma_in_body(ctx.domain, ctx.body, u); }

DiscreteMeasure ma_measure(const ModelContext& ctx, const ScalarField& u) { return ma_measure_ex(ctx, u).measure; }

double mass(const ModelContext& ctx, const ScalarField& u) { return ma_measure(ctx, u).total(); }

DiscreteMeasure density_split(const ModelContext& ctx, const DiscreteMeasure& m) {
    require_same_domain(ctx.domain, m.domain);
    DiscreteMeasure out(ctx.domain, m.weights, m.singular_mass);
    out.density.assign(m.weights.size(), 0.0);
    const auto& rho = ctx.reference_density.weights;
    for (size_t i = 0; i < m.weights.size(); ++i) {
        const double w = m.weights[i];
        if (w == 0) continue;
        const bool atom = rho[i] == 0 || (!ctx.domain.on_boundary(i) && w > kAtomFactor * ctx.reference_cells[i]);
        if (atom) {
            out.singular_mass += w;
            out.weights[i] = 0;
        } else {
            out.density[i] = w / rho[i];
        }
    }
    out.density_wrt = std::make_shared<const DiscreteMeasure>(ctx.reference_density);
    return out;
}

DiscreteMeasure ma_density(const ModelContext& ctx, const ScalarField& u) {
    return density_split(ctx, ma_measure(ctx, u));
}

std::vector<double> mixed_ma_raw(const ModelContext& ctx, const ScalarField& u, const ScalarField& v, int j) {
    const int n = ctx.dim();
    if (j < 0 || j > n) throw std::invalid_argument("mixed_ma: j out of range");
    if (j == n) return ma_values(ctx.domain, ctx.body, u);
    if (j == 0) return ma_values(ctx.domain, ctx.body, v);
    // n = 2, j = 1
    const auto uv = ma_values(ctx.domain, ctx.body.minkowski(ctx.body), add(u, v));
    const auto mu = ma_values(ctx.domain, ctx.body, u);
    const auto mv = ma_values(ctx.domain, ctx.body, v);
    std::vector<double> out(uv.size());
    for (size_t i = 0; i < out.size(); ++i) out[i] = 0.5 * (uv[i] - mu[i] - mv[i]);
    return out;
}

DiscreteMeasure mixed_ma(const ModelContext& ctx, const ScalarField& u, const ScalarField& v, int j) {
    auto raw = mixed_ma_raw(ctx, u, v, j);
    double scale = 0;
    for (double x : raw) scale = std::max(scale, std::fabs(x));
    for (double& x : raw) {
        if (x < -1e-9 * scale) throw std::domain_error("mixed_ma: polarization produced a negative node mass");
        x = std::max(x, 0.0);
    }
    return DiscreteMeasure(ctx.domain, std::move(raw));
}

PerturbationBasis perturbation_basis(const ModelContext& ctx, const ScalarField& u) {
    const int n = ctx.dim();
    const auto& r = ctx.reference_potential;
    PerturbationBasis b;
    const auto top = ma_values(ctx.domain, ctx.body, u);
    const auto rr = ma_values(ctx.domain, ctx.reference_body, r);
    if (n == 1) {
        b.h = {rr, top};
        return b;
    }
    const auto ur = ma_values(ctx.domain, ctx.body.minkowski(ctx.reference_body), add(u, r));
    std::vector<double> mid(top.size());
    for (size_t i = 0; i < mid.size(); ++i) mid[i] = ur[i] - top[i] - rr[i];  // binom(2,1) * mixed
    b.h = {rr, mid, top};
    return b;
}

PerturbedMa perturbed_ma(const ModelContext& ctx, const ScalarField& u, double t, const PerturbationBasis& basis) {
    if (!(t >= 0)) throw std::invalid_argument("perturbed_ma: t must be nonnegative");
    const int n = ctx.dim();
    PerturbedMa out;
    out.t = t;
    const auto res = ma_in_body(ctx.domain, ctx.body.minkowski(ctx.reference_body.scaled(t)),
                                add(u, ctx.reference_potential, t));
    out.direct = res.measure.weights;
    out.clamped = res.clamped;
    out.expansion.assign(out.direct.size(), 0.0);
    for (int j = 0; j <= n; ++j) {
        const double c = std::pow(t, n - j);
        for (size_t i = 0; i < out.expansion.size(); ++i) out.expansion[i] += c * basis.h[j][i];
    }
    const auto& rho = ctx.reference_density.weights;
    out.s_direct.resize(rho.size());
    out.s_expansion.resize(rho.size());
    for (size_t i = 0; i < rho.size(); ++i) {
        out.s_direct[i] = rho[i] > 0 ? out.direct[i] / rho[i] : 0.0;
        out.s_expansion[i] = rho[i] > 0 ? out.expansion[i] / rho[i] : 0.0;
    }
    return out;
}

PerturbedMa perturbed_ma(const ModelContext& ctx, const ScalarField& u, double t) {
    return perturbed_ma(ctx, u, t, perturbation_basis(ctx, u));
}

}  // namespace torapot
