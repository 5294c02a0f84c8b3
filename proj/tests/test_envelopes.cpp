#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "torapot/convex.hpp"
#include "torapot/envelopes.hpp"
#include "torapot/ma.hpp"

using namespace torapot;

namespace {

ModelContext ctx1(int res = 201) { return make_context(build_domain(1, {{-1, 1}}, res), Body::interval(-1, 1)); }
ModelContext ctx2(int res = 13) { return make_context(build_domain(2, {{-1, 1}, {-1, 1}}, res), Body::box(-1, 1, -1, 1)); }

double sup_diff(const ScalarField& a, const ScalarField& b) {
    double s = 0;
    for (size_t i = 0; i < a.size(); ++i) s = std::max(s, std::fabs(a.values[i] - b.values[i]));
    return s;
}

ScalarField masked_cone(const GridDomain& d, size_t node, double slope) {
    auto u = make_field(d, [&](double x, double) { return slope * std::fabs(x - d.coord(node, 0)); });
    u.mask.assign(d.size(), 0);
    u.mask[node] = 1;
    return u;
}

}  // namespace

TEST_CASE("rooftop examples") {
    auto c = ctx1();
    auto phi = make_field(c.domain, [](double x, double) { return 0.3 * x * x + 0.2 * x; });
    CHECK(sup_diff(rooftop(c, phi, phi), phi) < 1e-14);
    CHECK(sup_diff(rooftop(c, shift(phi, -3), phi), shift(phi, -3)) < 1e-14);

    auto psi = make_field(c.domain, [](double x, double) { return 0.4 * (x - 0.5) * (x - 0.5) - 0.1; });
    auto phi2 = make_field(c.domain, [](double x, double) { return 0.4 * (x + 0.5) * (x + 0.5) - 0.1; });
    auto roof = rooftop(c, psi, phi2);
    std::vector<double> xs(c.domain.size()), mins(c.domain.size());
    for (size_t i = 0; i < xs.size(); ++i) {
        xs[i] = c.domain.coord(i, 0);
        mins[i] = std::min(psi.values[i], phi2.values[i]);
    }
    auto ref = oracle::envelope_1d(xs, mins, -1, 1);
    for (size_t i = 0; i < xs.size(); ++i) CHECK(std::fabs(roof.values[i] - ref[i]) <= 1e-9);
    CHECK(sup_diff(roof, rooftop(c, p_envelope(c, psi), p_envelope(c, phi2))) <= 1e-12);
}

TEST_CASE("rooftop of envelopes in dim 2") {
    auto c = ctx2();
    auto psi = make_field(c.domain, [](double x, double y) { return std::sin(3 * x) + y * y; });
    auto phi = make_field(c.domain, [](double x, double y) { return std::cos(2 * y) - 0.5 * x; });
    CHECK(sup_diff(rooftop(c, psi, phi), rooftop(c, p_envelope(c, psi), p_envelope(c, phi))) <= 1e-12);
}

TEST_CASE("model_envelope examples") {
    auto c = ctx1(101);
    auto psi = make_field(c.domain, [](double x, double) { return 0.4 * x * x - 0.3 * x + 2; });
    auto env = model_envelope_ex(c, psi, c.zero());
    CHECK(env.stabilized);
    CHECK(sup_diff(env.field, c.zero()) <= 1e-10);
    CHECK(sup_diff(model_envelope(c, shift(psi, 7), c.zero()), env.field) <= 1e-10);
    CHECK(sup_diff(model_envelope(c, shift(psi, 5), c.zero()), env.field) <= 1e-10);

    // masked cone: the masked node imposes nothing, so the result is the
    // sup of admissible u <= 0 off the pole, which is 0
    auto cone = masked_cone(c.domain, 50, 0.8);
    auto mc = model_envelope(c, cone, c.zero());
    CHECK(mc.masked(50));
    std::vector<double> xs, fs;
    for (size_t i = 0; i < c.domain.size(); ++i)
        if (i != 50) {
            xs.push_back(c.domain.coord(i, 0));
            fs.push_back(0.0);
        }
    auto ref = oracle::envelope_1d(xs, fs, -1, 1);
    for (size_t i = 0, k = 0; i < c.domain.size(); ++i)
        if (i != 50) CHECK(std::fabs(mc.values[i] - ref[k++]) <= 1e-10);
    CHECK(sup_diff(model_envelope(c, mc, c.zero()), mc) <= 1e-12);
}

TEST_CASE("model envelope keeps the mass of unmasked potentials") {
    oracle::Rng rng(2);
    for (int dim = 1; dim <= 2; ++dim) {
        auto c = dim == 1 ? ctx1(101) : ctx2(11);
        for (int it = 0; it < 3; ++it) {
            const double a = rng.uniform(0.1, 0.4), b = rng.uniform(-0.3, 0.3);
            auto psi = make_field(c.domain, [&](double x, double y) { return a * (x * x + y * y) + b * x; });
            auto env = model_envelope(c, psi, c.zero());
            CHECK(std::fabs(mass(c, env) - mass(c, psi)) <= 1e-8 * mass(c, psi));
            CHECK(model_envelope(c, env, c.zero()).values == env.values);
        }
    }
}

TEST_CASE("is_model") {
    auto c = ctx1(101);
    CHECK(is_model(c, c.zero()).model);
    CHECK(is_model(c, c.zero()).mass_match);
    CHECK_FALSE(is_model(c, shift(c.zero(), -1)).model);
    auto psi = make_field(c.domain, [](double x, double) { return 0.3 * x * x + 0.1 * x; });
    CHECK(is_model(c, model_envelope(c, psi, c.zero())).model);
    auto c2 = ctx2(9);
    CHECK(is_model(c2, c2.zero()).model);
    CHECK_FALSE(is_model(c2, shift(c2.zero(), -1)).model);
}

TEST_CASE("cutoff") {
    auto c = ctx1(51);
    auto phi = c.zero();
    auto u = make_field(c.domain, [](double x, double) { return -1 + 0.3 * x * x; });
    CHECK(cutoff(u, phi, 0).values == phi.values);
    CHECK(cutoff(u, phi, INFINITY).values == u.values);
    auto m = masked_cone(c.domain, 25, 0.5);
    auto cm = cutoff(shift(m, -1), phi, 5);
    CHECK_FALSE(cm.any_masked());
    CHECK(cm.values[25] == -5.0);
    CHECK(cm.values[0] == doctest::Approx(-0.5));
    CHECK_THROWS(cutoff(u, phi, -1));
}

TEST_CASE("singularity_cmp") {
    auto c = ctx1(51);
    auto u = make_field(c.domain, [](double x, double) { return 0.3 * x * x; });
    CHECK(singularity_cmp(c, u, shift(u, 9)) == Singularity::same);
    auto um = u;
    um.mask.assign(c.domain.size(), 0);
    um.mask[10] = 1;
    CHECK(singularity_cmp(c, um, u) == Singularity::more_singular);
    CHECK(singularity_cmp(c, u, um) == Singularity::less_singular);
    auto vm = u;
    vm.mask.assign(c.domain.size(), 0);
    vm.mask[40] = 1;
    CHECK(singularity_cmp(c, um, vm) == Singularity::incomparable);
    CHECK(singularity_cmp(c, u, shift(u, -1e6)) == Singularity::less_singular);
    CHECK(to_string(Singularity::same) == "same");
}
