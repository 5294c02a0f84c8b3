#include "torapot/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace torapot {

std::array<double, 2> sample_slope(const Body& body, Rng& rng) {
    if (body.dim == 1) return {rng.uniform(body.lo, body.hi), 0.0};
    double x0 = INFINITY, x1 = -INFINITY, y0 = INFINITY, y1 = -INFINITY;
    for (auto v : body.poly) {
        x0 = std::min(x0, v.x);
        x1 = std::max(x1, v.x);
        y0 = std::min(y0, v.y);
        y1 = std::max(y1, v.y);
    }
    for (;;) {
        const double x = rng.uniform(x0, x1), y = rng.uniform(y0, y1);
        if (body.contains({x, y}, 0)) return {x, y};
    }
}

ScalarField max_affine(const ModelContext& ctx, const std::vector<std::array<double, 3>>& pieces, double smoothing) {
    const auto& d = ctx.domain;
    std::vector<double> v(d.size());
    std::vector<double> a(pieces.size());
    for (size_t i = 0; i < d.size(); ++i) {
        const double x = d.coord(i, 0), y = d.dim == 2 ? d.coord(i, 1) : 0.0;
        double m = -INFINITY;
        for (size_t k = 0; k < pieces.size(); ++k) {
            a[k] = pieces[k][0] * x + pieces[k][1] * y + pieces[k][2];
            m = std::max(m, a[k]);
        }
        if (smoothing > 0) {
            double s = 0;
            for (double ak : a) s += std::exp((ak - m) / smoothing);
            m += smoothing * std::log(s);
        }
        v[i] = m;
    }
    return ScalarField(d, std::move(v));
}

ScalarField random_admissible(const ModelContext& ctx, Rng& rng, int max_pieces, double smoothing) {
    const int k = rng.integer(1, max_pieces);
    std::vector<std::array<double, 3>> pieces;
    for (int j = 0; j < k; ++j) {
        const auto s = sample_slope(ctx.body, rng);
        pieces.push_back({s[0], s[1], rng.uniform(-1, 0)});
    }
    return max_affine(ctx, pieces, smoothing);
}

std::vector<CorpusItem> fuzz_corpus(const ModelContext& ctx, uint64_t seed, int count) {
    Rng rng(seed);
    std::vector<CorpusItem> out;
    for (int i = 0; i < count; ++i) {
        const bool smooth = i % 2 == 1;
        const double eps = smooth ? rng.uniform(0.05, 0.3) : 0.0;
        auto u = random_admissible(ctx, rng, 12, eps);
        out.push_back({(smooth ? "softmax-" : "maxaff-") + std::to_string(i), std::move(u)});
    }
    return out;
}

ScalarField normalize_sup(const ScalarField& u, const ScalarField& phi) {
    const double s = sup_rel(u, phi);
    if (!std::isfinite(s)) throw std::invalid_argument("normalize_sup: no common unmasked node");
    return shift(u, -1 - s);
}

double SkodaSurrogate::log_C() const {
    // log(C0 (e^{c0} + 1)) without overflow
    return std::log(C0) + c0 + std::log1p(std::exp(-c0));
}

double SkodaSurrogate::C() const { return std::exp(log_C()); }

double SkodaSurrogate::S(int n) const { return std::pow(2 * log_C() / c0, n); }

SkodaSurrogate skoda_surrogate(const ModelContext& ctx, uint64_t seed, int probes) {
    const auto& d = ctx.domain;
    const auto& rho = ctx.reference_density.weights;
    constexpr int kLo = -6, kHi = 6;
    std::vector<double> worst(kHi - kLo + 1, 0.0);
    auto account = [&](const std::vector<double>& h) {
        const double top = *std::max_element(h.begin(), h.end());
        for (int k = kLo; k <= kHi; ++k) {
            const double c = std::ldexp(1.0, k);
            double s = 0;
            for (size_t i = 0; i < h.size(); ++i) s += rho[i] * std::exp(-c * (h[i] - top));
            worst[k - kLo] = std::max(worst[k - kLo], s);
        }
    };
    Rng rng(seed);
    for (int p = 0; p < probes; ++p) account(random_admissible(ctx, rng, 12, 0).values);
    // extreme affine functions: slopes at the body's vertices
    std::vector<std::array<double, 2>> verts;
    if (d.dim == 1) verts = {{ctx.body.lo, 0}, {ctx.body.hi, 0}};
    else
        for (auto v : ctx.body.poly) verts.push_back({v.x, v.y});
    for (auto s : verts) {
        std::vector<double> h(d.size());
        for (size_t i = 0; i < h.size(); ++i) h[i] = s[0] * d.coord(i, 0) + (d.dim == 2 ? s[1] * d.coord(i, 1) : 0.0);
        account(h);
    }
    SkodaSurrogate out;
    out.probes = probes + static_cast<int>(verts.size());
    int best = kLo;
    for (int k = kLo; k <= kHi; ++k)
        if (worst[k - kLo] <= 1e3) best = k;
    out.c0 = std::ldexp(1.0, best);
    out.probe_max = worst[best - kLo];
    // sup h = h(x*) = 0 forces h(x) >= -h_P(x* - x)
    double cone = 0;
    for (size_t a = 0; a < d.size(); ++a) {
        double s = 0;
        for (size_t i = 0; i < d.size(); ++i) {
            const double dx = d.coord(a, 0) - d.coord(i, 0), dy = d.dim == 2 ? d.coord(a, 1) - d.coord(i, 1) : 0.0;
            s += rho[i] * std::exp(out.c0 * ctx.body.support(dx, dy));
        }
        cone = std::max(cone, s);
    }
    out.cone_bound = cone;
    out.C0 = std::max(out.probe_max, cone);
    return out;
}

}  // namespace torapot
