#include "torapot/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace torapot {

double polygon_area(const Polygon& p) {
    if (p.size() < 3) return 0.0;
    double s = 0;
    for (size_t i = 0, n = p.size(); i < n; ++i) s += cross(p[i], p[(i + 1) % n]);
    return 0.5 * s;
}

Polygon clip_halfplane(const Polygon& p, Vec2 a, double b) {
    Polygon out;
    const size_t n = p.size();
    if (n == 0) return out;
    out.reserve(n + 1);
    for (size_t i = 0; i < n; ++i) {
        const Vec2 cur = p[i], nxt = p[(i + 1) % n];
        const double sc = dot(a, cur) - b, sn = dot(a, nxt) - b;
        if (sc <= 0) out.push_back(cur);
        if ((sc < 0 && sn > 0) || (sc > 0 && sn < 0)) {
            const double t = sc / (sc - sn);
            out.push_back(cur + t * (nxt - cur));
        }
    }
    return out;
}

Polygon clip_convex(const Polygon& p, const Polygon& window) {
    Polygon out = p;
    const size_t n = window.size();
    for (size_t i = 0; i < n && !out.empty(); ++i) {
        const Vec2 e = window[(i + 1) % n] - window[i];
        // interior is to the left of each CCW edge: cross(e, y - w) >= 0
        const Vec2 a{e.y, -e.x};
        out = clip_halfplane(out, a, dot(a, window[i]));
    }
    return out;
}

Polygon convex_hull(std::vector<Vec2> pts) {
    std::sort(pts.begin(), pts.end(), [](Vec2 a, Vec2 b) { return a.x < b.x || (a.x == b.x && a.y < b.y); });
    pts.erase(std::unique(pts.begin(), pts.end(), [](Vec2 a, Vec2 b) { return a.x == b.x && a.y == b.y; }),
              pts.end());
    if (pts.size() < 3) return pts;
    Polygon h(2 * pts.size());
    size_t k = 0;
    for (size_t i = 0; i < pts.size(); ++i) {
        while (k >= 2 && cross(h[k - 1] - h[k - 2], pts[i] - h[k - 2]) <= 0) --k;
        h[k++] = pts[i];
    }
    for (size_t i = pts.size() - 1, t = k + 1; i-- > 0;) {
        while (k >= t && cross(h[k - 1] - h[k - 2], pts[i] - h[k - 2]) <= 0) --k;
        h[k++] = pts[i];
    }
    h.resize(k - 1);
    return h;
}

Polygon minkowski_sum(const Polygon& a, const Polygon& b) {
    std::vector<Vec2> pts;
    pts.reserve(a.size() * b.size());
    for (auto p : a)
        for (auto q : b) pts.push_back(p + q);
    return convex_hull(std::move(pts));
}

Polygon box_polygon(double x0, double x1, double y0, double y1) {
    return {{x0, y0}, {x1, y0}, {x1, y1}, {x0, y1}};
}

bool polygon_contains(const Polygon& p, Vec2 y, double tol) {
    const size_t n = p.size();
    if (n < 3) return false;
    for (size_t i = 0; i < n; ++i) {
        const Vec2 e = p[(i + 1) % n] - p[i];
        const double len = std::hypot(e.x, e.y);
        if (cross(e, y - p[i]) < -tol * len) return false;
    }
    return true;
}

Body Body::interval(double lo, double hi) {
    if (!(lo <= 0 && hi >= 0 && hi > lo)) throw std::invalid_argument("gradient body must be an interval containing 0");
    Body b;
    b.dim = 1;
    b.lo = lo;
    b.hi = hi;
    return b;
}

Body Body::polygon(Polygon p) {
    Polygon h = convex_hull(std::move(p));
    if (polygon_area(h) <= 0) throw std::invalid_argument("gradient body must have positive area");
    if (!polygon_contains(h, {0, 0}, 1e-12)) throw std::invalid_argument("gradient body must contain the origin");
    Body b;
    b.dim = 2;
    b.poly = std::move(h);
    return b;
}

Body Body::box(double x0, double x1, double y0, double y1) { return polygon(box_polygon(x0, x1, y0, y1)); }

double Body::volume() const { return dim == 1 ? hi - lo : polygon_area(poly); }

bool Body::contains(const std::vector<double>& y, double tol) const {
    if (dim == 1) return y[0] >= lo - tol && y[0] <= hi + tol;
    return polygon_contains(poly, {y[0], y[1]}, tol);
}

double Body::support(double dx, double dy) const {
    if (dim == 1) return std::max(lo * dx, hi * dx);
    double s = -INFINITY;
    for (auto v : poly) s = std::max(s, v.x * dx + v.y * dy);
    return s;
}

double Body::diameter() const {
    if (dim == 1) return hi - lo;
    double d = 0;
    for (auto a : poly)
        for (auto b : poly) d = std::max(d, std::hypot(a.x - b.x, a.y - b.y));
    return d;
}

Body Body::minkowski(const Body& o) const {
    if (dim != o.dim) throw std::invalid_argument("body dimension mismatch");
    Body b;
    if (dim == 1) {
        b.lo = lo + o.lo;
        b.hi = hi + o.hi;
        return b;
    }
    b.dim = 2;
    b.poly = minkowski_sum(poly, o.poly);
    return b;
}

Body Body::scaled(double s) const {
    Body b = *this;
    if (dim == 1) {
        b.lo = s * lo;
        b.hi = s * hi;
    } else {
        for (auto& v : b.poly) v = s * v;
    }
    return b;
}

bool Body::is_box() const {
    if (dim == 1) return true;
    if (poly.size() != 4) return false;
    for (size_t i = 0; i < 4; ++i) {
        const Vec2 e = poly[(i + 1) % 4] - poly[i];
        if (e.x != 0 && e.y != 0) return false;
    }
    return true;
}

}  // namespace torapot
