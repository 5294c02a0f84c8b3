#pragma once

#include <vector>

namespace torapot {

struct Vec2 {
    double x = 0, y = 0;
};

inline Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
inline Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
inline Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }

// Convex polygon, counter-clockwise. Empty vector means the empty set.
using Polygon = std::vector<Vec2>;

double polygon_area(const Polygon& p);
// Keeps {y : <a, y> <= b}.
Polygon clip_halfplane(const Polygon& p, Vec2 a, double b);
Polygon clip_convex(const Polygon& p, const Polygon& window);
Polygon convex_hull(std::vector<Vec2> pts);
Polygon minkowski_sum(const Polygon& a, const Polygon& b);
Polygon box_polygon(double x0, double x1, double y0, double y1);
bool polygon_contains(const Polygon& p, Vec2 y, double tol);

/*
 * Gradient body: a closed interval in dim 1, a convex polygon in dim 2.
 * Always contains the origin.
 */
struct Body {
    int dim = 1;
    double lo = -1, hi = 1;
    Polygon poly;

    static Body interval(double lo, double hi);
    static Body polygon(Polygon p);
    static Body box(double x0, double x1, double y0, double y1);

    double volume() const;
    bool contains(const std::vector<double>& y, double tol = 1e-12) const;
    // Largest <y, d> over the body, i.e. the support function.
    double support(double dx, double dy = 0) const;
    double diameter() const;
    Body minkowski(const Body& other) const;
    Body scaled(double s) const;
    bool is_box() const;
};

}  // namespace torapot
