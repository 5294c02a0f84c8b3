#include "torapot/convex.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace torapot {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::vector<double> lattice_axis(double lo, double hi, int res) {
    const double step = (hi - lo) / (res - 1);
    std::vector<double> a{lo, hi};
    const long k0 = static_cast<long>(std::ceil(lo / step)), k1 = static_cast<long>(std::floor(hi / step));
    for (long k = k0; k <= k1; ++k) a.push_back(k * step);
    std::sort(a.begin(), a.end());
    std::vector<double> out;
    for (double v : a)
        if (out.empty() || v - out.back() > 1e-12 * step) out.push_back(v);
    // snap the lattice point nearest 0 to exactly 0
    for (double& v : out)
        if (std::fabs(v) <= 1e-12 * step) v = 0;
    return out;
}

// Lower hull indices (into xs) of finite points, strict (collinear points dropped).
std::vector<size_t> lower_hull(const std::vector<double>& xs, const std::vector<double>& fs) {
    std::vector<size_t> h;
    for (size_t i = 0; i < xs.size(); ++i) {
        if (!std::isfinite(fs[i])) continue;
        while (h.size() >= 2) {
            const size_t a = h[h.size() - 2], b = h.back();
            const double c = (xs[b] - xs[a]) * (fs[i] - fs[a]) - (fs[b] - fs[a]) * (xs[i] - xs[a]);
            if (c <= 0)
                h.pop_back();
            else
                break;
        }
        h.push_back(i);
    }
    return h;
}

struct Offset {
    int di, dj;
    double len;
};

std::vector<Offset> sorted_offsets(const GridDomain& d) {
    const int n0 = d.resolution[0], n1 = d.resolution[1];
    const double h0 = d.spacing(0), h1 = d.spacing(1);
    std::vector<Offset> off;
    off.reserve(static_cast<size_t>(2 * n0 - 1) * (2 * n1 - 1));
    for (int dj = -(n1 - 1); dj <= n1 - 1; ++dj)
        for (int di = -(n0 - 1); di <= n0 - 1; ++di)
            if (di || dj) off.push_back({di, dj, std::hypot(di * h0, dj * h1)});
    std::stable_sort(off.begin(), off.end(), [](const Offset& a, const Offset& b) { return a.len < b.len; });
    return off;
}

void bounding_circle(const Polygon& p, Vec2& c, double& r) {
    c = {0, 0};
    for (auto v : p) c = c + v;
    c = (1.0 / p.size()) * c;
    r = 0;
    for (auto v : p) r = std::max(r, std::hypot(v.x - c.x, v.y - c.y));
}

std::vector<char> usable(const ScalarField& f) {
    std::vector<char> use(f.size());
    for (size_t i = 0; i < use.size(); ++i) use[i] = !f.masked(i) && std::isfinite(f.values[i]);
    return use;
}

}  // namespace

DualGrid make_dual(const Body& body, int resolution) {
    if (resolution < 3) throw std::invalid_argument("dual resolution must be at least 3");
    DualGrid g;
    g.polytope = body;
    g.resolution = resolution;
    if (body.dim == 1) {
        g.axis[0] = lattice_axis(body.lo, body.hi, resolution);
        for (size_t k = 0; k < g.axis[0].size(); ++k) {
            g.nodes.push_back({g.axis[0][k], 0.0});
            g.lattice_index.push_back(k);
        }
        return g;
    }
    double x0 = kInf, x1 = -kInf, y0 = kInf, y1 = -kInf;
    for (auto v : body.poly) {
        x0 = std::min(x0, v.x);
        x1 = std::max(x1, v.x);
        y0 = std::min(y0, v.y);
        y1 = std::max(y1, v.y);
    }
    g.axis[0] = lattice_axis(x0, x1, resolution);
    g.axis[1] = lattice_axis(y0, y1, resolution);
    const size_t m0 = g.axis[0].size();
    for (size_t b = 0; b < g.axis[1].size(); ++b)
        for (size_t a = 0; a < m0; ++a) {
            const std::vector<double> y{g.axis[0][a], g.axis[1][b]};
            if (body.contains(y, 1e-12)) {
                g.nodes.push_back({y[0], y[1]});
                g.lattice_index.push_back(b * m0 + a);
            }
        }
    return g;
}

std::vector<double> conjugate_1d(const std::vector<double>& xs, const std::vector<double>& fs,
                                 const std::vector<double>& ys) {
    const auto h = lower_hull(xs, fs);
    std::vector<double> out(ys.size(), -kInf);
    if (h.empty()) return out;
    std::vector<size_t> order(ys.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) { return ys[a] < ys[b]; });
    size_t j = 0;
    for (size_t q : order) {
        const double y = ys[q];
        // advance while the next hull edge slope is below y
        while (j + 1 < h.size() && (fs[h[j + 1]] - fs[h[j]]) / (xs[h[j + 1]] - xs[h[j]]) < y) ++j;
        out[q] = xs[h[j]] * y - fs[h[j]];
    }
    return out;
}

std::vector<std::array<double, 2>> power_cells_1d(const GridDomain& d, const std::vector<double>& f,
                                                  const std::vector<char>& use, double lo, double hi) {
    const size_t n = f.size();
    std::vector<double> xs(n), fs(n);
    for (size_t i = 0; i < n; ++i) {
        xs[i] = d.coord(i, 0);
        fs[i] = use[i] ? f[i] : kInf;
    }
    const auto h = lower_hull(xs, fs);
    std::vector<std::array<double, 2>> cells(n, {kInf, -kInf});
    for (size_t j = 0; j < h.size(); ++j) {
        double left = -kInf, right = kInf;
        if (j > 0) left = (fs[h[j]] - fs[h[j - 1]]) / (xs[h[j]] - xs[h[j - 1]]);
        if (j + 1 < h.size()) right = (fs[h[j + 1]] - fs[h[j]]) / (xs[h[j + 1]] - xs[h[j]]);
        cells[h[j]] = {std::max(left, lo), std::min(right, hi)};
    }
    return cells;
}

std::vector<Polygon> power_cells_2d(const GridDomain& d, const std::vector<double>& f, const std::vector<char>& use,
                                    const Polygon& start, double relax, const std::vector<char>* only) {
    const int n0 = d.resolution[0], n1 = d.resolution[1];
    const double h0 = d.spacing(0), h1 = d.spacing(1);
    const auto off = sorted_offsets(d);
    std::vector<Polygon> cells(f.size());
    for (size_t i = 0; i < f.size(); ++i) {
        if (!use[i] || (only && !(*only)[i])) continue;
        const int ix = static_cast<int>(i % n0), iy = static_cast<int>(i / n0);
        Polygon poly = start;
        Vec2 c;
        double r;
        bounding_circle(poly, c, r);
        for (const auto& o : off) {
            const int a = ix + o.di, b = iy + o.dj;
            if (a < 0 || a >= n0 || b < 0 || b >= n1) continue;
            const size_t k = static_cast<size_t>(b) * n0 + a;
            if (!use[k]) continue;
            const Vec2 dv{o.di * h0, o.dj * h1};
            const double rhs = f[k] - f[i] + relax;
            if (dot(c, dv) + r * o.len <= rhs) continue;
            poly = clip_halfplane(poly, dv, rhs);
            if (poly.empty()) break;
            bounding_circle(poly, c, r);
        }
        cells[i] = std::move(poly);
    }
    return cells;
}

std::vector<size_t> power_cell_support(const GridDomain& d, const std::vector<double>& f, const std::vector<char>& use,
                                       const Polygon& start, size_t i, double tol) {
    std::vector<size_t> out;
    if (d.dim == 1) {
        for (long k = static_cast<long>(i) - 1; k >= 0; --k)
            if (use[k]) {
                out.push_back(k);
                break;
            }
        for (size_t k = i + 1; k < f.size(); ++k)
            if (use[k]) {
                out.push_back(k);
                break;
            }
        return out;
    }
    // relaxed cell, so point cells stay representable
    const int n0 = d.resolution[0];
    const double h0 = d.spacing(0), h1 = d.spacing(1);
    const int ix = static_cast<int>(i % n0), iy = static_cast<int>(i / n0);
    auto offset = [&](size_t k) {
        const int a = static_cast<int>(k % n0), b = static_cast<int>(k / n0);
        return Vec2{(a - ix) * h0, (b - iy) * h1};
    };
    Polygon poly = start;
    for (size_t k = 0; k < f.size() && !poly.empty(); ++k)
        if (k != i && use[k]) poly = clip_halfplane(poly, offset(k), f[k] - f[i] + tol);
    if (poly.empty()) return out;
    for (size_t k = 0; k < f.size(); ++k) {
        if (k == i || !use[k]) continue;
        const Vec2 dv = offset(k);
        const double rhs = f[k] - f[i];
        double slack = kInf;
        for (auto v : poly) slack = std::min(slack, rhs - dot(dv, v));
        if (slack <= 3 * tol) out.push_back(k);
    }
    return out;
}

bool is_convex(const ScalarField& u, double tol) {
    const auto use = usable(u);
    double lo = kInf, hi = -kInf;
    for (size_t i = 0; i < u.size(); ++i)
        if (use[i]) {
            lo = std::min(lo, u.values[i]);
            hi = std::max(hi, u.values[i]);
        }
    if (lo > hi) return true;
    const double t = tol * (1 + std::max(std::fabs(lo), std::fabs(hi)));
    const GridDomain& d = u.domain;
    if (d.dim == 1) {
        std::vector<double> xs(u.size()), fs(u.size());
        for (size_t i = 0; i < u.size(); ++i) {
            xs[i] = d.coord(i, 0);
            fs[i] = use[i] ? u.values[i] : kInf;
        }
        const auto h = lower_hull(xs, fs);
        size_t j = 0;
        for (size_t i = 0; i < u.size(); ++i) {
            if (!use[i]) continue;
            while (j + 1 < h.size() && xs[h[j + 1]] < xs[i]) ++j;
            double env = fs[h[j]];
            if (j + 1 < h.size() && xs[i] > xs[h[j]])
                env = fs[h[j]] + (fs[h[j + 1]] - fs[h[j]]) * (xs[i] - xs[h[j]]) / (xs[h[j + 1]] - xs[h[j]]);
            if (u.values[i] > env + t) return false;
        }
        return true;
    }
    const double hmin = std::min(d.spacing(0), d.spacing(1));
    const double m = 4 * (hi - lo) / hmin + 1;
    const auto cells = power_cells_2d(d, u.values, use, box_polygon(-m, m, -m, m), t);
    for (size_t i = 0; i < u.size(); ++i)
        if (use[i] && cells[i].empty()) return false;
    return true;
}

DualField legendre(const ScalarField& u, const DualGrid& dual) {
    const auto use = usable(u);
    if (std::none_of(use.begin(), use.end(), [](char c) { return c != 0; }))
        throw std::invalid_argument("legendre: all nodes masked");
    const GridDomain& d = u.domain;
    DualField out{dual, std::vector<double>(dual.size())};
    if (d.dim == 1) {
        std::vector<double> xs(u.size()), fs(u.size());
        for (size_t i = 0; i < u.size(); ++i) {
            xs[i] = d.coord(i, 0);
            fs[i] = use[i] ? u.values[i] : kInf;
        }
        const auto g = conjugate_1d(xs, fs, dual.axis[0]);
        for (size_t k = 0; k < dual.size(); ++k) out.values[k] = g[dual.lattice_index[k]];
        return out;
    }
    const int n0 = d.resolution[0], n1 = d.resolution[1];
    const auto& y0 = dual.axis[0];
    const auto& y1 = dual.axis[1];
    std::vector<double> x0s(n0), x1s(n1);
    for (int a = 0; a < n0; ++a) x0s[a] = d.bounds[0].lo + a * d.spacing(0);
    for (int b = 0; b < n1; ++b) x1s[b] = d.bounds[1].lo + b * d.spacing(1);
    // inner pass along axis 1 for every fixed x0
    std::vector<double> g(static_cast<size_t>(n0) * y1.size());
    std::vector<double> col(n1);
    for (int a = 0; a < n0; ++a) {
        for (int b = 0; b < n1; ++b) {
            const size_t i = static_cast<size_t>(b) * n0 + a;
            col[b] = use[i] ? u.values[i] : kInf;
        }
        const auto r = conjugate_1d(x1s, col, y1);
        for (size_t q = 0; q < y1.size(); ++q) g[q * n0 + a] = r[q];
    }
    // outer pass along axis 0 of -g
    std::vector<double> full(y0.size() * y1.size());
    std::vector<double> row(n0);
    for (size_t q = 0; q < y1.size(); ++q) {
        for (int a = 0; a < n0; ++a) row[a] = std::isfinite(g[q * n0 + a]) ? -g[q * n0 + a] : kInf;
        const auto r = conjugate_1d(x0s, row, y0);
        for (size_t p = 0; p < y0.size(); ++p) full[q * y0.size() + p] = r[p];
    }
    for (size_t k = 0; k < dual.size(); ++k) out.values[k] = full[dual.lattice_index[k]];
    return out;
}

ScalarField legendre_back(const DualField& g, const GridDomain& d) {
    std::vector<double> out(d.size(), -kInf);
    if (d.dim == 1) {
        std::vector<double> ys(g.dual.size()), xs(d.size());
        for (size_t k = 0; k < ys.size(); ++k) ys[k] = g.dual.nodes[k][0];
        for (size_t i = 0; i < xs.size(); ++i) xs[i] = d.coord(i, 0);
        out = conjugate_1d(ys, g.values, xs);
    } else {
        for (size_t i = 0; i < d.size(); ++i) {
            const double x0 = d.coord(i, 0), x1 = d.coord(i, 1);
            double best = -kInf;
            for (size_t k = 0; k < g.dual.size(); ++k)
                best = std::max(best, x0 * g.dual.nodes[k][0] + x1 * g.dual.nodes[k][1] - g.values[k]);
            out[i] = best;
        }
    }
    return ScalarField(d, std::move(out));
}

namespace {

ScalarField envelope_pass(const Body& body, const ScalarField& f) {
    const GridDomain& d = f.domain;
    if (body.dim != d.dim) throw std::invalid_argument("body dimension does not match domain");
    const auto use = usable(f);
    if (std::none_of(use.begin(), use.end(), [](char c) { return c != 0; }))
        throw std::invalid_argument("p_envelope: obstacle is -inf everywhere, no minorant");
    // Candidate affine pieces: (node, slope) at the vertices of the obstacle's
    // power cells in the body. The envelope is their upper envelope.
    struct Piece {
        double x0, x1, f, y0, y1;
    };
    std::vector<Piece> pieces;
    if (d.dim == 1) {
        const auto cells = power_cells_1d(d, f.values, use, body.lo, body.hi);
        for (size_t i = 0; i < cells.size(); ++i) {
            if (!(cells[i][0] <= cells[i][1])) continue;
            const double x = d.coord(i, 0);
            pieces.push_back({x, 0, f.values[i], cells[i][0], 0});
            if (cells[i][1] != cells[i][0]) pieces.push_back({x, 0, f.values[i], cells[i][1], 0});
        }
    } else {
        const auto cells = power_cells_2d(d, f.values, use, body.poly);
        for (size_t i = 0; i < cells.size(); ++i)
            for (auto v : cells[i]) pieces.push_back({d.coord(i, 0), d.coord(i, 1), f.values[i], v.x, v.y});
    }
    std::vector<double> out(d.size());
    for (size_t i = 0; i < d.size(); ++i) {
        const double x0 = d.coord(i, 0), x1 = d.dim == 2 ? d.coord(i, 1) : 0.0;
        double best = -kInf;
        for (const auto& p : pieces) best = std::max(best, p.f + (x0 - p.x0) * p.y0 + (x1 - p.x1) * p.y1);
        // at a contact node the maximizing piece is the node's own: keep it exact
        if (use[i]) best = std::min(best, f.values[i]);
        out[i] = best;
    }
    return ScalarField(d, std::move(out), f.mask);
}

}  // namespace

// A single pass is exact up to rounding. An input that already equals its
// envelope to rounding level is returned untouched, which makes the operator
// idempotent bit for bit.
ScalarField p_envelope(const Body& body, const ScalarField& f) {
    ScalarField env = envelope_pass(body, f);
    double scale = 0, gap = 0;
    for (size_t i = 0; i < f.size(); ++i) {
        if (f.masked(i) || !std::isfinite(f.values[i])) continue;
        scale = std::max(scale, std::fabs(f.values[i]));
        gap = std::max(gap, f.values[i] - env.values[i]);
    }
    if (gap <= 1e-13 * (1 + scale)) return f;
    return env;
}

double default_contact_tol(const ScalarField& f) {
    double s = 0;
    for (size_t i = 0; i < f.size(); ++i)
        if (!f.masked(i)) s = std::max(s, std::fabs(f.values[i]));
    return 1e-8 * (1 + s);
}

std::vector<char> contact_set(const ScalarField& f, const ScalarField& env, double tol) {
    require_same_domain(f.domain, env.domain);
    std::vector<char> c(f.size(), 0);
    for (size_t i = 0; i < f.size(); ++i) {
        if (f.masked(i)) continue;
        const double diff = f.values[i] - env.values[i];
        if (diff < -tol) throw std::domain_error("contact_set: envelope exceeds obstacle");
        c[i] = diff <= tol;
    }
    return c;
}

}  // namespace torapot
