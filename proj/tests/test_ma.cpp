#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numeric>

#include "oracles.hpp"
#include "torapot/convex.hpp"
#include "torapot/ma.hpp"

using namespace torapot;

namespace {

double sum(const std::vector<double>& v) { return std::accumulate(v.begin(), v.end(), 0.0); }

double interior_sum(const GridDomain& d, const std::vector<double>& w) {
    double s = 0;
    for (size_t i = 0; i < w.size(); ++i)
        if (!d.on_boundary(i)) s += w[i];
    return s;
}

ModelContext ctx1(int res = 201, double lo = -1, double hi = 1) {
    return make_context(build_domain(1, {{-1, 1}}, res), Body::interval(lo, hi));
}

ModelContext ctx2(int res = 21) { return make_context(build_domain(2, {{-1, 1}, {-1, 1}}, res), Body::box(-1, 1, -1, 1)); }

std::vector<double> xs_of(const GridDomain& d) {
    std::vector<double> xs(d.size());
    for (size_t i = 0; i < xs.size(); ++i) xs[i] = d.coord(i, 0);
    return xs;
}

}  // namespace

TEST_CASE("dim 1 measures are the slope jumps") {
    auto c = ctx1();
    const double h = c.domain.spacing(0);
    auto check = [&](const ScalarField& u) {
        auto m = ma_measure(c, u);
        CHECK(m.weights == oracle::slope_jumps(u.values, h, -1, 1));
    };
    check(make_field(c.domain, [](double x, double) { return std::fabs(x); }));
    check(make_field(c.domain, [](double x, double) { return std::max(0.5 * x * x - 0.125, 0.0); }));
    check(make_field(c.domain, [](double x, double) { return 0.25 * x * x * x * x; }));
    oracle::Rng rng(3);
    for (int it = 0; it < 10; ++it) {
        std::vector<double> f(c.domain.size());
        const double s0 = rng.uniform(-1, 1), s1 = rng.uniform(-1, 1), s2 = rng.uniform(-1, 1);
        for (size_t i = 0; i < f.size(); ++i) {
            const double x = c.domain.coord(i, 0);
            f[i] = std::max({s0 * x, s1 * x + 0.1, s2 * x - 0.2, 0.3 * x * x});
        }
        check(ScalarField(c.domain, f));
    }
}

TEST_CASE("dim 1 mass examples") {
    auto c = ctx1();
    auto abs = ma_measure(c, make_field(c.domain, [](double x, double) { return std::fabs(x); }));
    CHECK(abs.weights[100] == 2.0);
    CHECK(std::fabs(sum(abs.weights) - 2.0) <= 1e-12);
    CHECK(mass(c, c.zero()) == doctest::Approx(2.0).epsilon(1e-15));
    // the gradient image of x^2/4 is [-1/2, 1/2]; the boundary nodes take the
    // rest of the body, so the total stays 2
    auto q = ma_measure(c, make_field(c.domain, [](double x, double) { return 0.25 * x * x; }));
    CHECK(interior_sum(c.domain, q.weights) == doctest::Approx(1.0 - c.domain.spacing(0) / 2).epsilon(1e-12));
    CHECK(sum(q.weights) == doctest::Approx(2.0).epsilon(1e-14));
    auto u = make_field(c.domain, [](double x, double) { return 0.3 * x * x + 0.1 * x; });
    CHECK(mass(c, shift(u, 7.25)) == mass(c, u));
}

TEST_CASE("dim 2 quadratic has full mass and unit density") {
    auto c = ctx2(21);
    auto u = make_field(c.domain, [](double x, double y) { return 0.5 * (x * x + y * y); });
    auto m = ma_measure_ex(c, u);
    CHECK_FALSE(m.clamped);
    CHECK(std::fabs(m.measure.total() - 4.0) <= 1e-10);
    const double h = c.domain.spacing(0);
    for (size_t i = 0; i < c.domain.size(); ++i) {
        const auto [ix, iy] = c.domain.multi(i);
        const double wx = (ix == 0 || ix == 20) ? h / 2 : h, wy = (iy == 0 || iy == 20) ? h / 2 : h;
        CHECK(m.measure.weights[i] == doctest::Approx(wx * wy).epsilon(1e-10));
    }
    CHECK(mass(c, c.zero()) == doctest::Approx(4.0).epsilon(1e-12));
}

TEST_CASE("dim 2 cone is a single atom") {
    auto c = ctx2(21);
    auto m = ma_measure(c, make_field(c.domain, [](double x, double y) { return std::hypot(x, y); }));
    const size_t center = 10 + 10 * 21;
    CHECK(m.total() == doctest::Approx(4.0).epsilon(1e-12));
    CHECK(m.weights[center] > 1.0);
    auto dens = ma_density(c, make_field(c.domain, [](double x, double y) { return std::hypot(x, y); }));
    CHECK(dens.singular_mass >= m.weights[center] - 1e-12);
}

TEST_CASE("non-convex or empty input is rejected") {
    auto c = ctx1(51);
    CHECK_THROWS_AS(ma_measure(c, make_field(c.domain, [](double x, double) { return -x * x; })), std::domain_error);
    auto c2 = ctx2(9);
    CHECK_THROWS_AS(ma_measure(c2, make_field(c2.domain, [](double x, double y) { return x * y; })),
                    std::domain_error);
    ScalarField all(c.domain, std::vector<double>(c.domain.size(), 0.0), std::vector<char>(c.domain.size(), 1));
    CHECK_THROWS(ma_measure(c, all));
}

TEST_CASE("masked family u_t has mass 2 - 1.6 t") {
    auto c = ctx1(201);
    double prev = INFINITY;
    for (int k = 0; k <= 40; ++k) {
        const double t = k / 40.0;
        auto u = make_field(c.domain, [&](double x, double) { return t * 0.8 * std::fabs(x); });
        u.mask.assign(c.domain.size(), 0);
        u.mask[100] = 1;
        const double m = mass(c, u);
        CHECK(m == doctest::Approx(2 - 1.6 * t).epsilon(1e-12));
        CHECK(m <= prev);
        prev = m;
    }
}

TEST_CASE("ma_density examples") {
    auto c = ctx1(201);
    auto r = ma_density(c, c.reference_potential);
    CHECK(r.singular_mass == 0);
    for (size_t i = 0; i < c.domain.size(); ++i) CHECK(r.density[i] == doctest::Approx(c.volume()).epsilon(1e-12));
    auto a = ma_density(c, make_field(c.domain, [](double x, double) { return std::fabs(x); }));
    CHECK(a.singular_mass == 2.0);
    for (double f : a.density) CHECK(std::fabs(f) <= 1e-10);

    // x^4/4: f is the second difference over the reference cell, close to 3x^2 / lambda
    for (int res : {101, 201, 401}) {
        auto cc = ctx1(res);
        auto q = ma_density(cc, make_field(cc.domain, [](double x, double) { return 0.25 * x * x * x * x; }));
        CHECK(q.singular_mass == 0);
        const double h = cc.domain.spacing(0);
        double err = 0;
        for (size_t i = 1; i + 1 < cc.domain.size(); ++i) {
            const double x = cc.domain.coord(i, 0);
            err = std::max(err, std::fabs(q.density[i] * cc.reference_scale / cc.volume() - 3 * x * x));
        }
        CAPTURE(res);
        CHECK(err <= 2 * h * h);
    }
}

TEST_CASE("mixed_ma endpoints and polarization") {
    auto c = ctx2(15);
    auto u = make_field(c.domain, [](double x, double y) { return 0.3 * x * x + 0.2 * y * y + 0.1 * x * y; });
    auto v = c.reference_potential;
    CHECK(mixed_ma(c, u, v, 2).weights == ma_measure(c, u).weights);
    CHECK(mixed_ma(c, u, v, 0).weights == ma_measure(c, v).weights);
    auto q = make_field(c.domain, [](double x, double y) { return 0.5 * (x * x + y * y); });
    auto mq = mixed_ma(c, q, q, 1);
    CHECK(mq.total() == doctest::Approx(4.0).epsilon(1e-10));
    auto base = ma_measure(c, q);
    for (size_t i = 0; i < c.domain.size(); ++i)
        if (!c.domain.on_boundary(i)) CHECK(mq.weights[i] == doctest::Approx(base.weights[i]).epsilon(1e-9));
    CHECK_THROWS(mixed_ma(c, u, v, 3));
    CHECK_THROWS(mixed_ma(c, u, v, -1));
    auto c1 = ctx1(51);
    auto w = make_field(c1.domain, [](double x, double) { return 0.3 * x * x; });
    CHECK(mixed_ma(c1, w, c1.reference_potential, 1).weights == ma_measure(c1, w).weights);
}

TEST_CASE("perturbed_ma") {
    auto c = ctx2(15);
    auto u = make_field(c.domain, [](double x, double y) { return 0.3 * x * x + 0.2 * y * y + 0.1 * x * y + 0.05 * x; });
    auto p0 = perturbed_ma(c, u, 0);
    CHECK(p0.direct == ma_measure(c, u).weights);
    auto basis = perturbation_basis(c, u);
    for (double t : {0.25, 1.0, 4.0}) {
        auto p = perturbed_ma(c, u, t, basis);
        CAPTURE(t);
        CHECK(std::fabs(sum(p.direct) - sum(p.expansion)) <= 1e-9 * sum(p.direct));
        for (size_t i = 0; i < p.direct.size(); ++i)
            CHECK(std::fabs(p.direct[i] - p.expansion[i]) <= 1e-7 * std::max(p.direct[i], 1e-300));
    }
    // u = r: S(t) = (1 + t)^2 times the constant density of r away from the
    // boundary nodes, which also absorb the slopes of P + tQ outside (1 + t)Q
    auto pr = perturbed_ma(c, c.reference_potential, 1.0);
    for (size_t i = 0; i < pr.s_direct.size(); ++i)
        if (!c.domain.on_boundary(i)) CHECK(pr.s_direct[i] == doctest::Approx(4 * c.volume()).epsilon(1e-9));

    auto c1 = ctx1(101);
    auto w = make_field(c1.domain, [](double x, double) { return 0.2 * x * x + 0.1 * std::fabs(x - 0.3); });
    auto f = ma_density(c1, w);
    auto b1 = perturbation_basis(c1, w);
    const auto& rho = c1.reference_density.weights;
    for (double t : {0.25, 1.0, 4.0}) {
        auto p = perturbed_ma(c1, w, t, b1);
        for (size_t i = 0; i < p.s_direct.size(); ++i) {
            // MA_Q(r) matches the reference cell except at the two ends
            const double step = c1.domain.on_boundary(i) ? b1.h[0][i] / rho[i] : c1.volume();
            CHECK(p.s_direct[i] == doctest::Approx(f.density[i] + t * step).epsilon(1e-9));
        }
    }
}

TEST_CASE("p_envelope measure concentrates on the contact set") {
    auto c = ctx1(201);
    auto f = make_field(c.domain, [](double x, double) { return std::sin(4 * x) + 0.5 * x * x; });
    auto env = p_envelope(c, f);
    auto contact = contact_set(f, env, default_contact_tol(f));
    auto m = ma_measure(c, env);
    double off = 0;
    for (size_t i = 0; i < m.weights.size(); ++i)
        if (!contact[i]) off += m.weights[i];
    CHECK(off <= 1e-8 * m.total());
    auto ref = oracle::envelope_1d(xs_of(c.domain), f.values, -1, 1);
    for (size_t i = 0; i < ref.size(); ++i) CHECK(env.values[i] == doctest::Approx(ref[i]).epsilon(1e-9));
}
