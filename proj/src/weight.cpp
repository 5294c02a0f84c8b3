#include "torapot/weight.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace torapot {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// segment index k with ts[k] <= t, clamped to the last segment
size_t segment(const std::vector<double>& ts, double t) {
    auto it = std::upper_bound(ts.begin(), ts.end(), t);
    size_t k = it == ts.begin() ? 0 : static_cast<size_t>(it - ts.begin()) - 1;
    return std::min(k, ts.size() - 2);
}

double slope(const std::vector<double>& ts, const std::vector<double>& vs, size_t k) {
    return (vs[k + 1] - vs[k]) / (ts[k + 1] - ts[k]);
}

double table_value(const std::vector<double>& ts, const std::vector<double>& vs, double t) {
    const size_t k = segment(ts, t);
    return vs[k] + slope(ts, vs, k) * (t - ts[k]);
}

// int_{t0}^{t} (v0 + b (s - t0))^{1/n} ds
double root_piece(double v0, double b, double len, int n) {
    if (len <= 0) return 0;
    if (n == 1) return v0 * len + 0.5 * b * len * len;
    const double e = 1.0 / n;
    if (std::fabs(b) * len <= 1e-12 * std::max(v0, 1e-300)) return std::pow(v0, e) * len;
    const double v1 = std::max(0.0, v0 + b * len);
    return n / ((n + 1.0) * b) * (std::pow(v1, 1 + e) - std::pow(v0, 1 + e));
}

double bisect_increasing(const std::function<double(double)>& f, double y) {
    double lo = 0, hi = 1;
    while (f(hi) < y) {
        lo = hi;
        hi *= 2;
        if (hi > 1e300) return kInf;
    }
    for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        (f(mid) < y ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

double simpson(const std::function<double(double)>& f, double a, double b, double fa, double fm, double fb,
               double whole, double tol, int depth) {
    const double m = 0.5 * (a + b), lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = (m - a) / 6 * (fa + 4 * flm + fm), right = (b - m) / 6 * (fm + 4 * frm + fb);
    if (depth <= 0 || std::fabs(left + right - whole) <= 15 * tol) return left + right + (left + right - whole) / 15;
    return simpson(f, a, m, fa, flm, fm, left, tol / 2, depth - 1) + simpson(f, m, b, fm, frm, fb, right, tol / 2, depth - 1);
}

double integrate_adaptive(const std::function<double(double)>& f, double a, double b, double tol) {
    const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
    return simpson(f, a, b, fa, fm, fb, (b - a) / 6 * (fa + 4 * fm + fb), tol, 50);
}

}  // namespace

double Weight::operator()(double t) const {
    if (std::isinf(t)) return kInf;
    if (t < 0) throw std::invalid_argument("weight evaluated at negative t");
    switch (kind) {
        case Kind::power: return coef * std::pow(t, p);
        case Kind::table: return table_value(ts, vs, t);
        case Kind::root_integral: {
            const size_t k = segment(ts, t);
            return cum[k] + root_piece(vs[k], slope(ts, vs, k), t - ts[k], n);
        }
    }
    return 0;
}

double Weight::derivative(double t) const {
    switch (kind) {
        case Kind::power: return t == 0 && p < 1 ? kInf : coef * p * std::pow(t, p - 1);
        case Kind::table: return slope(ts, vs, segment(ts, t));
        case Kind::root_integral: return std::pow(std::max(0.0, table_value(ts, vs, t)), 1.0 / n);
    }
    return 0;
}

double Weight::inverse(double y) const {
    if (std::isinf(y)) return kInf;
    if (y < 0) throw std::invalid_argument("weight inverse of a negative value");
    switch (kind) {
        case Kind::power: return std::pow(y / coef, 1 / p);
        case Kind::table: {
            auto it = std::upper_bound(vs.begin(), vs.end(), y);
            size_t k = it == vs.begin() ? 0 : static_cast<size_t>(it - vs.begin()) - 1;
            k = std::min(k, vs.size() - 2);
            return ts[k] + (y - vs[k]) / slope(ts, vs, k);
        }
        case Kind::root_integral: return bisect_increasing(*this, y);
    }
    return 0;
}

nlohmann::json Weight::to_json() const {
    switch (kind) {
        case Kind::power: return {{"kind", "power"}, {"p", p}, {"coef", coef}};
        case Kind::table: return {{"kind", "table"}, {"t", ts}, {"chi", vs}};
        case Kind::root_integral: return {{"kind", "root_integral"}, {"n", n}, {"t", ts}, {"chi1", vs}};
    }
    return {};
}

std::string Weight::label() const {
    std::ostringstream s;
    switch (kind) {
        case Kind::power:
            s << "t^" << p;
            if (coef != 1) s << "*" << coef;
            break;
        case Kind::table: s << "table(" << ts.size() << ")"; break;
        case Kind::root_integral: s << "root" << n << "(" << ts.size() << ")"; break;
    }
    return s.str();
}

Weight weight_power(double p, double coef) {
    if (!(p > 0)) throw std::invalid_argument("weight_power: p must be positive");
    if (!(coef > 0)) throw std::invalid_argument("weight_power: coefficient must be positive");
    Weight w;
    w.kind = Weight::Kind::power;
    w.p = p;
    w.coef = coef;
    return w;
}

Weight weight_table(std::vector<double> ts, std::vector<double> vs) {
    if (ts.size() < 2 || ts.size() != vs.size()) throw std::invalid_argument("weight table needs two or more knots");
    if (ts[0] != 0 || vs[0] != 0) throw std::invalid_argument("weight table must start at (0, 0)");
    for (size_t k = 1; k < ts.size(); ++k)
        if (!(ts[k] > ts[k - 1]) || !(vs[k] > vs[k - 1]) || !std::isfinite(vs[k]))
            throw std::invalid_argument("weight table must be strictly increasing");
    Weight w;
    w.kind = Weight::Kind::table;
    w.ts = std::move(ts);
    w.vs = std::move(vs);
    return w;
}

Weight weight_from_json(const nlohmann::json& j) {
    if (j.is_number()) return weight_power(j.get<double>());
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "power") return weight_power(j.at("p").get<double>(), j.value("coef", 1.0));
    if (kind == "table") return weight_table(j.at("t").get<std::vector<double>>(), j.at("chi").get<std::vector<double>>());
    throw std::invalid_argument("unknown weight kind: " + kind);
}

Weight chi2_from_chi1(const Weight& chi1, int n) {
    if (n < 1) throw std::invalid_argument("chi2_from_chi1: n must be positive");
    if (chi1.kind == Weight::Kind::power) {
        const double q = 1 + chi1.p / n;
        return weight_power(q, std::pow(chi1.coef, 1.0 / n) / q);
    }
    if (chi1.kind != Weight::Kind::table) throw std::invalid_argument("chi2_from_chi1: needs a power or table weight");
    Weight w;
    w.kind = Weight::Kind::root_integral;
    w.n = n;
    w.ts = chi1.ts;
    w.vs = chi1.vs;
    w.cum.assign(w.ts.size(), 0.0);
    for (size_t k = 0; k + 1 < w.ts.size(); ++k)
        w.cum[k + 1] = w.cum[k] + root_piece(w.vs[k], slope(w.ts, w.vs, k), w.ts[k + 1] - w.ts[k], n);
    return w;
}

double tau2_at_one(const Weight& chi1, int n, double a) {
    if (!(a > 0 && a < 1)) throw std::invalid_argument("tau2_at_one: a must lie in (0, 1)");
    if (chi1.kind == Weight::Kind::power) {
        const double q = 1 + chi1.p / n;
        // s = (a^{-n} / coef)^{1/p} and chi2(s) / chi2'(s) = s / q
        return std::pow(std::pow(a, -n) / chi1.coef, 1 / chi1.p) / q;
    }
    const double s = chi1.inverse(std::pow(a, -n));
    const Weight chi2 = chi2_from_chi1(chi1, n);
    return chi2(s) / chi2.derivative(s);
}

double tau2_at_one_numeric(const Weight& chi1, int n, double a) {
    if (!(a > 0 && a < 1)) throw std::invalid_argument("tau2_at_one: a must lie in (0, 1)");
    const double target = std::pow(a, -n);
    const double s = bisect_increasing([&](double t) { return chi1(t); }, target);
    auto root = [&](double t) { return std::pow(chi1(t), 1.0 / n); };
    // split at the table knots so each piece is smooth
    std::vector<double> cuts{0.0};
    for (double t : chi1.ts)
        if (t > 0 && t < s) cuts.push_back(t);
    cuts.push_back(s);
    double chi2 = 0;
    for (size_t k = 0; k + 1 < cuts.size(); ++k) chi2 += integrate_adaptive(root, cuts[k], cuts[k + 1], 1e-14 * (1 + s));
    return chi2 / root(s);
}

}  // namespace torapot
