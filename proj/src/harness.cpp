#include "torapot/harness.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "torapot/convex.hpp"
#include "torapot/envelopes.hpp"
#include "torapot/functionals.hpp"
#include "torapot/ma.hpp"

namespace torapot {

namespace {

double sup_abs(const ScalarField& u) {
    double s = 0;
    for (size_t i = 0; i < u.size(); ++i)
        if (!u.masked(i)) s = std::max(s, std::fabs(u.values[i]));
    return s;
}

void require_normalized(const ScalarField& u, const ScalarField& phi) {
    if (std::fabs(sup_rel(u, phi) + 1) > 1e-12) throw std::invalid_argument("u must be normalized so that sup(u - phi) = -1");
}

void require_unit_weight(const Weight& chi) {
    if (std::fabs(chi(1.0) - 1) > 1e-12) throw std::invalid_argument("chi1 must satisfy chi1(1) = 1");
}

std::vector<double> gaps(const ScalarField& u, const ScalarField& phi) {
    std::vector<double> g(u.size());
    for (size_t i = 0; i < g.size(); ++i) g[i] = std::max(0.0, phi.values[i] - u.values[i]);
    return g;
}

double kahan(const std::vector<double>& v) {
    double s = 0, c = 0;
    for (double x : v) {
        const double y = x - c, t = s + y;
        c = (t - s) - y;
        s = t;
    }
    return s;
}

}  // namespace

Weight normalize_weight(const Weight& chi) {
    const double c = chi(1.0);
    if (!(c > 0)) throw std::invalid_argument("weight vanishes at 1");
    if (chi.kind == Weight::Kind::power) return weight_power(chi.p, chi.coef / c);
    if (chi.kind != Weight::Kind::table) throw std::invalid_argument("normalize_weight: needs a power or table weight");
    auto vs = chi.vs;
    for (double& v : vs) v /= c;
    return weight_table(chi.ts, vs);
}

std::vector<double> brute_force_envelope_1d(const std::vector<double>& xs, const std::vector<double>& fs, double lo,
                                            double hi) {
    std::vector<double> cand{lo, hi};
    for (size_t a = 0; a < xs.size(); ++a)
        for (size_t b = a + 1; b < xs.size(); ++b) {
            const double s = (fs[b] - fs[a]) / (xs[b] - xs[a]);
            if (s > lo && s < hi) cand.push_back(s);
        }
    std::sort(cand.begin(), cand.end());
    cand.erase(std::unique(cand.begin(), cand.end()), cand.end());
    std::vector<double> conj(cand.size());
    for (size_t c = 0; c < cand.size(); ++c) {
        double m = -INFINITY;
        for (size_t k = 0; k < xs.size(); ++k) m = std::max(m, xs[k] * cand[c] - fs[k]);
        conj[c] = m;
    }
    std::vector<double> out(xs.size());
    for (size_t i = 0; i < xs.size(); ++i) {
        double m = -INFINITY;
        for (size_t c = 0; c < cand.size(); ++c) m = std::max(m, xs[i] * cand[c] - conj[c]);
        out[i] = m;
    }
    return out;
}

CertificateReport envelope_oracle_check(const ModelContext& ctx, const ScalarField& f) {
    if (ctx.dim() != 1) throw std::invalid_argument("envelope_oracle_check: dim 1 only");
    CertificateReport r;
    r.theorem = "envelope_oracle";
    r.digest = digest(f);
    std::vector<double> xs(f.size());
    for (size_t i = 0; i < xs.size(); ++i) xs[i] = ctx.domain.coord(i, 0);
    const auto env = p_envelope(ctx, f);
    const auto ref = brute_force_envelope_1d(xs, f.values, ctx.body.lo, ctx.body.hi);
    double err = 0;
    for (size_t i = 0; i < xs.size(); ++i) err = std::max(err, std::fabs(env.values[i] - ref[i]));
    r.le("sup_error", err, 1e-9);
    r.holds("idempotent", p_envelope(ctx, env).values == env.values);
    return r;
}

CertificateReport ma_exactness_check(const ModelContext& ctx, const ScalarField& u) {
    if (ctx.dim() != 1) throw std::invalid_argument("ma_exactness_check: dim 1 only");
    CertificateReport r;
    r.theorem = "ma_exactness";
    r.digest = digest(u);
    const auto m = ma_measure(ctx, u);
    const double h = ctx.domain.spacing(0);
    const size_t n = u.size();
    double worst = 0;
    for (size_t i = 0; i < n; ++i) {
        const double left = i == 0 ? ctx.body.lo : std::max(ctx.body.lo, (u.values[i] - u.values[i - 1]) / h);
        const double right = i + 1 == n ? ctx.body.hi : std::min(ctx.body.hi, (u.values[i + 1] - u.values[i]) / h);
        worst = std::max(worst, std::fabs(m.weights[i] - std::max(0.0, right - left)));
    }
    r.le("max_node_difference", worst, 0);
    r.constant("mass", m.total());
    return r;
}

CertificateReport ma_quadratic_mass_check(int resolution) {
    auto ctx = make_context(build_domain(2, {{-1, 1}, {-1, 1}}, resolution), Body::box(-1, 1, -1, 1));
    auto u = make_field(ctx.domain, [](double x, double y) { return 0.5 * (x * x + y * y); });
    CertificateReport r;
    r.theorem = "ma_exactness";
    r.instance = "quadratic-2d-" + std::to_string(resolution);
    r.digest = digest(u);
    const double m = ma_measure(ctx, u).total();
    r.le("mass_error", std::fabs(m - 4.0), 1e-10);
    r.constant("mass", m);
    return r;
}

CertificateReport plurifine_check(const ModelContext& ctx, const ScalarField& u, const ScalarField& phi, double j) {
    CertificateReport r;
    r.theorem = "plurifine_locality";
    r.digest = digest(u);
    const auto& d = ctx.domain;
    const auto w = pointwise_max(u, shift(phi, -j));
    const auto mu = ma_measure(ctx, u), mw = ma_measure(ctx, w);
    std::vector<char> use(u.size());
    for (size_t i = 0; i < use.size(); ++i) use[i] = std::isfinite(u.values[i]);
    const double tol = 1e-9 * (1 + sup_abs(u));
    double diff = 0, base = 0;
    int in_set = 0, interior = 0;
    for (size_t i = 0; i < u.size(); ++i) {
        if (u.masked(i) || !(u.values[i] > phi.values[i] - j)) continue;
        ++in_set;
        const auto sup = power_cell_support(d, u.values, use, ctx.body.poly, i, tol);
        const bool inner = std::all_of(sup.begin(), sup.end(), [&](size_t k) { return w.values[k] == u.values[k]; });
        if (!inner) continue;
        ++interior;
        diff += std::fabs(mw.weights[i] - mu.weights[i]);
        base += mu.weights[i];
    }
    r.le("relative_mass_difference", diff, 1e-10 * std::max(base, mu.total() * 1e-3));
    r.constant("j", j);
    r.constant("set_nodes", in_set);
    r.constant("interior_nodes", interior);
    r.constant("interior_mass", base);
    return r;
}

CertificateReport energy_increase_check(const ModelContext& ctx, const ScalarField& u, const ScalarField& phi,
                                        const Weight& chi, int steps) {
    return energy_increase_check(ctx, u, phi, std::vector<Weight>{chi}, steps).front();
}

std::vector<CertificateReport> energy_increase_check(const ModelContext& ctx, const ScalarField& u,
                                                     const ScalarField& phi, const std::vector<Weight>& chis,
                                                     int steps) {
    const auto g = gaps(u, phi);
    const double top = *std::max_element(g.begin(), g.end());
    const double mp = mass(ctx, phi);
    const size_t k = chis.size();
    std::vector<double> full(k), prev(k, -INFINITY), worst(k, INFINITY), last(k);
    const auto mu = ma_measure(ctx, u);
    for (size_t w = 0; w < k; ++w) full[w] = energy_chi(mu, mp, u, phi, chis[w]).value;
    for (int s = 0; s <= steps; ++s) {
        const double j = top * (1.0 + 1.0 / steps) * s / steps;
        const auto uj = cutoff(u, phi, j);
        const auto mj = ma_measure(ctx, uj);
        for (size_t w = 0; w < k; ++w) {
            const double e = energy_chi(mj, mp, uj, phi, chis[w]).value;
            if (s > 0) worst[w] = std::min(worst[w], e - prev[w]);
            prev[w] = last[w] = e;
        }
    }
    std::vector<CertificateReport> out(k);
    for (size_t w = 0; w < k; ++w) {
        auto& r = out[w];
        r.theorem = "energy_increases";
        r.instance = chis[w].label();
        r.digest = digest(u);
        r.ge("min_step_increase", worst[w], 0, 1e-10 * (1 + full[w]));
        r.le("limit_error", std::fabs(last[w] - full[w]), 1e-8 * (1 + full[w]));
        r.constant("energy", full[w]);
    }
    return out;
}

GapLaw gap_law_with_tail(const ModelContext& ctx, const ScalarField& u, const ScalarField& phi) {
    const auto un = normalize_sup(u, phi);
    const auto mu = ma_measure(ctx, un).normalized();
    GapLaw law;
    double tstar = 0;
    for (size_t i = 0; i < un.size(); ++i) {
        if (!(mu.weights[i] > 0)) continue;
        law.gaps.push_back(std::max(1.0, phi.values[i] - un.values[i]));
        law.masses.push_back(0.9 * mu.weights[i]);
        tstar = std::max(tstar, law.gaps.back());
    }
    std::vector<double> tail;
    for (int k = 1; k <= 200; ++k) tail.push_back(1.0 / (double(k) * k * k));
    const double tsum = std::accumulate(tail.begin(), tail.end(), 0.0);
    for (int k = 1; k <= 200; ++k) {
        law.gaps.push_back(tstar + k);
        law.masses.push_back(0.1 * tail[k - 1] / tsum);
    }
    return law;
}

CertificateReport weight_construct_check(const ModelContext& ctx, const ScalarField& u, const ScalarField& phi) {
    CertificateReport r;
    r.theorem = "energy_union";
    r.digest = digest(u);
    const auto [g, m] = gap_law_with_tail(ctx, u, phi);
    const auto cw = construct_weight_from_gaps(g, m);
    bool increasing = cw.chi(0) == 0;
    for (size_t k = 1; k < cw.chi.vs.size(); ++k) increasing = increasing && cw.chi.vs[k] > cw.chi.vs[k - 1];
    r.holds("chi_strictly_increasing_from_0", increasing);
    const double total = std::accumulate(m.begin(), m.end(), 0.0);
    std::vector<double> terms(g.size());
    for (size_t k = 0; k < g.size(); ++k) terms[k] = cw.chi(g[k]) * m[k] / total;
    const double direct = kahan(terms);
    r.le("integral_bound", direct, cw.bound, 1e-6);
    r.constant("integral", direct);
    r.constant("chi_at_1", cw.chi(1.0));
    r.constant("series", cw.series);
    r.constant("K", cw.K);
    return r;
}

CertificateReport mt_certificate(const ModelContext& ctx, const ScalarField& u, const ScalarField& phi,
                                 const Weight& chi1, double beta, const SkodaSurrogate& skoda) {
    if (!(beta > 1)) throw std::invalid_argument("β must exceed 1");
    require_normalized(u, phi);
    require_unit_weight(chi1);
    const int n = ctx.dim();
    CertificateReport r;
    r.theorem = "moser_trudinger";
    r.digest = digest(u);
    const double m = mass(ctx, phi);
    const double E = energy_chi(ctx, u, phi, chi1).value;
    r.ge("1_energy_at_least_mass", E, m, 1e-12 * m);
    r.constant("mass", m);
    r.constant("energy", E);
    r.constant("beta", beta);
    const double a = std::pow(m / (beta * E), 1.0 / n);
    r.constant("a", a);
    if (!(a < 1)) {
        r.holds("a_in_unit_interval", false);
        return r;
    }
    const Weight chi2 = chi2_from_chi1(chi1, n);
    const double tau = tau2_at_one(chi1, n, a);
    r.constant("tau2_1", tau);
    const auto g = gaps(u, phi);
    std::vector<double> psi(u.size());
    for (size_t i = 0; i < psi.size(); ++i) psi[i] = phi.values[i] - a * chi2(g[i]);
    const ScalarField psif(ctx.domain, psi, u.mask);
    const auto env = p_envelope(ctx, psif);
    std::vector<double> v(u.size());
    for (size_t i = 0; i < v.size(); ++i) v[i] = phi.values[i] - chi2.inverse((phi.values[i] - env.values[i]) / a);
    const double ctol = default_contact_tol(psif);
    const auto contact = contact_set(psif, env, ctol);
    const double scale = 1 + sup_abs(u);
    double above = -INFINITY, on_contact = 0;
    for (size_t i = 0; i < v.size(); ++i) {
        if (u.masked(i)) continue;
        above = std::max(above, v[i] - u.values[i]);
        if (contact[i]) on_contact = std::max(on_contact, std::fabs(v[i] - u.values[i]));
    }
    r.le("2_v_below_u", above, 0, 1e-9 * scale);
    // gamma2 is 1/a-Lipschitz on gaps >= 1
    r.le("2_equality_on_contact", on_contact, 0, ctol / a + 1e-9 * scale);
    const auto menv = ma_measure(ctx, env);
    double off = 0;
    for (size_t i = 0; i < menv.weights.size(); ++i)
        if (!contact[i]) off += menv.weights[i];
    r.le("3_mass_off_contact", off, 0, 1e-8 * menv.total());
    const double top = sup_rel(env, phi);
    r.ge("4_sup_envelope", top, -tau, 1e-12 * (1 + tau));
    r.le("5_scalar_claim", a * chi2(tau), 2 * tau, 1e-12 * (1 + tau));
    double outside_k = INFINITY;
    for (size_t i = 0; i < g.size(); ++i) {
        const double ac = a * chi2(g[i]);
        if (!(ac <= 2 * g[i])) outside_k = std::min(outside_k, ac);
    }
    r.le("5_split_outside_K", 2 * tau, outside_k, 1e-12 * (1 + tau));
    // empirical: the displayed integral against C = C0 (e^{c0} + 1)
    const double c = skoda.c0 / 2 * std::pow(beta, -1.0 / n) * std::pow(m, 1.0 / n);
    const auto& rho = ctx.reference_density.weights;
    std::vector<double> terms(g.size());
    for (size_t i = 0; i < g.size(); ++i) terms[i] = rho[i] * std::exp(c * std::pow(E, -1.0 / n) * chi2(g[i]));
    const double lhs = kahan(terms);
    r.constant("6_integral", lhs);
    r.constant("6_C", skoda.C());
    r.constant("6_c", c);
    r.constant("6_within_C", lhs <= skoda.C() ? 1 : 0);
    r.constant("contact_nodes", std::count(contact.begin(), contact.end(), 1));
    return r;
}

CertificateReport mass_profile_bound(const ModelContext& ctx, const ScalarField& u, const ScalarField& phi,
                                     const Weight& chi1, const SkodaSurrogate& skoda) {
    require_normalized(u, phi);
    require_unit_weight(chi1);
    const int n = ctx.dim();
    CertificateReport r;
    r.theorem = "mass_profile";
    r.digest = digest(u);
    const double m = mass(ctx, phi);
    const double E = energy_chi(ctx, u, phi, chi1).value;
    const Weight chi2 = chi2_from_chi1(chi1, n);
    // int_0^inf m(t) chi1(t)^{1/n} dt = sum_i rho_i chi2(gap_i)
    const auto g = gaps(u, phi);
    const auto& rho = ctx.reference_density.weights;
    std::vector<double> terms(g.size());
    for (size_t i = 0; i < g.size(); ++i) terms[i] = rho[i] * chi2(g[i]);
    const double profile = kahan(terms);
    const double S = skoda.S(n);
    r.ge("S_above_1", S, 1);
    r.le("profile_bound", m * std::pow(profile, n) / S, E, 1e-12 * E);
    r.constant("profile_integral", profile);
    r.constant("S", S);
    r.constant("energy", E);
    r.constant("c0", skoda.c0);
    r.constant("C0", skoda.C0);
    return r;
}

CertificateReport inclusion_check(const ModelContext& ctx, const ScalarField& u, const ScalarField& phi,
                                  const SkodaSurrogate& skoda) {
    require_normalized(u, phi);
    const auto split = ma_density(ctx, u);
    const auto ent = entropy_of(split);
    if (!ent.is_finite()) throw std::invalid_argument("inclusion_check: entropy is infinite");
    const int n = ctx.dim();
    CertificateReport r;
    r.theorem = "entropy_inclusion";
    r.digest = digest(u);
    r.constant("entropy", ent.value);
    const auto g = gaps(u, phi);
    if (n == 1) {
        const double s = *std::max_element(g.begin(), g.end());
        r.holds("sup_gap_finite", std::isfinite(s));
        r.constant("sup_gap", s);
        return r;
    }
    const double p = double(n) / (n - 1);
    const double Ep = energy_chi(ctx, u, phi, weight_power(p)).value;
    r.holds("Ep_finite", std::isfinite(Ep));
    const double m = mass(ctx, phi);
    const double c = skoda.c0 / 2 * std::pow(m, 1.0 / n);
    const auto& rho = ctx.reference_density.weights;
    std::vector<double> left, ent_terms, exp_terms;
    for (size_t i = 0; i < g.size(); ++i) {
        const double t = c * std::pow(g[i], p) / std::pow(Ep, 1.0 / n);
        const double f = split.density[i];
        left.push_back(t * f * rho[i]);
        ent_terms.push_back(conj_weight(f) * rho[i]);
        exp_terms.push_back(conj_pair(t) * rho[i]);
    }
    const double lhs = kahan(left), a = kahan(ent_terms), b = kahan(exp_terms);
    r.le("conjugate_chain", lhs, a + b, 1e-12 * (1 + a + b));
    r.constant("Ep", Ep);
    r.constant("c", c);
    r.constant("chi_f_integral", a);
    r.constant("exp_integral", b);
    return r;
}

CertificateReport inclusion_refinement_1d(const Body& body, Interval bounds, const std::function<double(double)>& u,
                                          const std::vector<int>& resolutions) {
    CertificateReport r;
    r.theorem = "entropy_inclusion";
    r.instance = "refinement-1d";
    double lo = INFINITY, hi = -INFINITY;
    bool finite = true;
    for (int res : resolutions) {
        auto ctx = make_context(build_domain(1, {bounds}, res), body);
        auto f = normalize_sup(make_field(ctx.domain, [&](double x, double) { return u(x); }), ctx.zero());
        finite = finite && entropy(ctx, f).is_finite();
        const double s = -*std::min_element(f.values.begin(), f.values.end());
        r.constant("sup_gap_" + std::to_string(res), s);
        lo = std::min(lo, s);
        hi = std::max(hi, s);
    }
    r.holds("entropy_finite", finite);
    r.le("sup_gap_variation", (hi - lo) / hi, 0.05);
    return r;
}

CertificateReport perturbation_scan(const ModelContext& ctx, const ScalarField& u, const std::vector<double>& ts) {
    for (double t : ts)
        if (!(t >= 0)) throw std::invalid_argument("perturbation_scan: t must be nonnegative");
    const auto split = ma_density(ctx, u);
    if (!entropy_of(split).is_finite()) throw std::invalid_argument("perturbation_scan: entropy is infinite");
    const int n = ctx.dim();
    CertificateReport r;
    r.theorem = "entropy_all_time";
    r.digest = digest(u);
    const auto basis = perturbation_basis(ctx, u);
    const auto& rho = ctx.reference_density.weights;
    auto lbar = [&](const std::vector<double>& S) {
        std::vector<double> terms(S.size());
        for (size_t i = 0; i < S.size(); ++i) terms[i] = S[i] > 1 ? rho[i] * S[i] * std::log(S[i]) : 0.0;
        return kahan(terms);
    };
    double eps = INFINITY;
    for (double t : ts)
        if (t > 0) eps = std::min(eps, t);
    double L_eps = 0, mass_eps = 0;
    if (std::isfinite(eps)) {
        const auto pe = perturbed_ma(ctx, u, eps, basis);
        L_eps = lbar(pe.s_direct);
        std::vector<double> terms(rho.size());
        for (size_t i = 0; i < rho.size(); ++i) terms[i] = rho[i] * pe.s_direct[i];
        mass_eps = kahan(terms);
    }
    for (double t : ts) {
        const auto p = perturbed_ma(ctx, u, t, basis);
        const std::string tag = "t=" + format_number(t) + ":";
        const double td = kahan(p.direct), te = kahan(p.expansion);
        r.le(tag + "total_mass_agreement", std::fabs(td - te), 1e-9 * td);
        const double floor = 1e-12 * td / p.direct.size();
        double worst = 0;
        for (size_t i = 0; i < p.direct.size(); ++i) {
            const double diff = std::fabs(p.direct[i] - p.expansion[i]);
            if (diff > floor) worst = std::max(worst, diff / std::max(std::fabs(p.direct[i]), std::fabs(p.expansion[i])));
        }
        r.le(tag + "nodewise_relative_agreement", worst, 1e-7);
        const double L = lbar(p.s_direct);
        bool finite = std::isfinite(L);
        for (double s : p.s_direct) finite = finite && std::isfinite(s);
        r.holds(tag + "finite", finite);
        if (t == 0) {
            bool same = true;
            for (size_t i = 0; i < rho.size(); ++i) same = same && p.s_direct[i] == split.density[i];
            r.holds(tag + "S0_equals_f", same);
        } else if (t <= eps) {
            r.le(tag + "Lbar_monotone", L, L_eps, 1e-12 * (1 + L_eps));
        } else {
            const double tn = std::pow(t / eps, n);
            const double bound = tn * std::log(tn) * mass_eps + tn * L_eps;
            r.le(tag + "Lbar_scaling_bound", L, bound, 1e-12 * (1 + bound));
        }
        if (t > 0 && t < eps) r.le(tag + "Lbar_monotone", L, L_eps, 1e-12 * (1 + L_eps));
        r.constant(tag + "Lbar", L);
        r.constant(tag + "mass", td);
        if (p.clamped) r.notes.push_back(tag + "clamped");
    }
    return r;
}

CertificateReport subentropy_check(const std::vector<double>& mu1, const std::vector<double>& mu2,
                                   const std::vector<double>& mu3, uint64_t seed) {
    const size_t n = mu1.size();
    if (mu2.size() != n || mu3.size() != n) throw std::invalid_argument("subentropy_check: size mismatch");
    for (const auto* m : {&mu1, &mu2, &mu3})
        if (std::fabs(std::accumulate(m->begin(), m->end(), 0.0) - 1) > 1e-10)
            throw std::invalid_argument("subentropy_check: inputs must be probabilities");
    double sup_f = 0;
    for (size_t i = 0; i < n; ++i) {
        if (mu3[i] > 0) sup_f = std::max(sup_f, mu2[i] / mu3[i]);
        else if (mu2[i] > 0) throw std::invalid_argument("subentropy_check: f2 is unbounded");
    }
    CertificateReport r;
    r.theorem = "sub_entropy";
    r.seed = seed;
    r.digest = digest(mu1);
    const auto e13 = rel_entropy(mu1, mu3), e12 = rel_entropy(mu1, mu2);
    r.le("sub_entropy", e13.as_double(), e12.as_double() + std::log(sup_f), 1e-12);
    std::vector<size_t> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    Rng rng(seed);
    for (size_t i = n; i-- > 1;) std::swap(perm[i], perm[rng.gen() % (i + 1)]);
    std::vector<double> p1(n), p3(n);
    for (size_t i = 0; i < n; ++i) {
        p1[i] = mu1[perm[i]];
        p3[i] = mu3[perm[i]];
    }
    const auto e13p = rel_entropy(p1, p3);
    r.holds("relabeling_invariance", e13p.infinite == e13.infinite && e13p.value == e13.value);
    r.constant("ent13", e13.as_double());
    r.constant("ent12", e12.as_double());
    r.constant("log_sup_f2", std::log(sup_f));
    return r;
}

std::array<std::vector<double>, 3> random_measure_triple(Rng& rng, size_t n) {
    std::array<std::vector<double>, 3> out;
    for (auto& v : out) v.resize(n);
    for (size_t i = 0; i < n; ++i) {
        out[0][i] = rng.uniform() < 0.2 ? 0.0 : rng.uniform();
        out[2][i] = rng.uniform(0.01, 1);
        out[1][i] = out[2][i] * std::pow(4.0, rng.uniform(-1, 1));
    }
    for (auto* v : {&out[0], &out[2]}) {
        const double s = std::accumulate(v->begin(), v->end(), 0.0);
        for (double& x : *v) x /= s;
    }
    // mu2 = f2 mu3 up to normalization, f2 stays within [1/4, 4] times a constant
    const double s2 = std::accumulate(out[1].begin(), out[1].end(), 0.0);
    for (double& x : out[1]) x /= s2;
    return out;
}

CertificateReport atomic_entropy_demo(const ModelContext& ctx) {
    if (ctx.dim() != 1) throw std::invalid_argument("atomic_entropy_demo: dim 1 only");
    CertificateReport r;
    r.theorem = "no_entropy";
    r.instance = "ramp";
    const auto u = make_field(ctx.domain, [](double x, double) { return std::max(x, 0.0); });
    r.digest = digest(u);
    const auto split = ma_density(ctx, u);
    const auto e = entropy_of(split);
    const auto cmp = singularity_cmp(ctx, u, ctx.zero());
    r.holds("entropy_infinite", !e.is_finite());
    r.holds("singularity_same_as_V", cmp == Singularity::same);
    r.constant("atom_mass", split.singular_mass);
    const double delta = 0.05;
    const auto smooth = make_field(ctx.domain, [&](double x, double) {
        return x > 0 ? x + delta * std::log1p(std::exp(-x / delta)) : delta * std::log1p(std::exp(x / delta));
    });
    const auto es = entropy(ctx, smooth);
    r.holds("mollified_entropy_finite", es.is_finite());
    r.constant("mollified_entropy", es.as_double());
    const auto ev = entropy(ctx, ctx.zero());
    r.holds("V_entropy_finite", ev.is_finite());
    r.constant("V_entropy", ev.as_double());
    r.notes.push_back("entropy = " + std::string(e.is_finite() ? e.str() : "+INF") + ", singularity type = " +
                      to_string(cmp));
    return r;
}

std::vector<double> potential_from_masses_1d(const GridDomain& d, double lo, double hi, const std::vector<double>& m) {
    if (m.size() != d.size()) throw std::invalid_argument("potential_from_masses_1d: size mismatch");
    const double total = std::accumulate(m.begin(), m.end(), 0.0);
    if (std::fabs(total - (hi - lo)) > 1e-12 * (hi - lo)) throw std::invalid_argument("masses must sum to the body length");
    const double h = d.spacing(0);
    std::vector<double> a(d.size(), 0.0);
    double slope = lo;
    for (size_t i = 0; i + 1 < d.size(); ++i) {
        slope += m[i];
        a[i + 1] = a[i] + h * std::min(slope, hi);
    }
    return a;
}

std::vector<FamilySample> entropy_family_2d(const ModelContext& ctx, double B) {
    const auto& d = ctx.domain;
    if (d.dim != 2 || d.resolution[0] != d.resolution[1] || !ctx.body.is_box())
        throw std::invalid_argument("entropy_family_2d: needs a square box context");
    const int n0 = d.resolution[0];
    auto d1 = build_domain(1, {d.bounds[0]}, n0);
    double lo = INFINITY, hi = -INFINITY;
    for (auto v : ctx.body.poly) {
        lo = std::min(lo, v.x);
        hi = std::max(hi, v.x);
    }
    std::vector<double> trap(n0);
    for (int i = 0; i < n0; ++i) trap[i] = (i == 0 || i == n0 - 1) ? 0.5 : 1.0;
    std::vector<FamilySample> out;
    const double h = d1.spacing(0), c = 0.5 * (d1.bounds[0].lo + d1.bounds[0].hi);
    for (double kappa : {0.2, 0.5, 0.8})
        for (int level = 0; level < 8; ++level) {
            const double alpha = d1.bounds[0].length() * std::ldexp(1.0, -level);
            if (alpha < 2 * h) break;
            std::vector<double> m(n0);
            double s = 0;
            for (int i = 0; i < n0; ++i) {
                const bool inside = std::fabs(d1.coord(i, 0) - c) < alpha / 2 + 1e-12;
                m[i] = trap[i] * ((1 - kappa) + (inside ? kappa * d1.bounds[0].length() / alpha : 0.0));
                s += m[i];
            }
            for (double& x : m) x *= (hi - lo) / s;
            const auto a = potential_from_masses_1d(d1, lo, hi, m);
            std::vector<double> v(d.size());
            for (size_t i = 0; i < v.size(); ++i) {
                const auto [ix, iy] = d.multi(i);
                v[i] = a[ix] + a[iy];
            }
            auto u = normalize_sup(ScalarField(d, std::move(v)), ctx.zero());
            const auto e = entropy(ctx, u);
            if (!e.is_finite() || e.value > B) continue;
            out.push_back({"kappa=" + format_number(kappa) + ",alpha=" + format_number(alpha), std::move(u), e.value});
        }
    return out;
}

double budget_sup_energy(const ModelContext& ctx, const std::vector<FamilySample>& family, double B) {
    const double p = double(ctx.dim()) / std::max(1, ctx.dim() - 1);
    double best = 0;
    for (const auto& s : family)
        if (s.entropy <= B) best = std::max(best, energy_chi(ctx, s.u, ctx.zero(), weight_power(p)).value);
    return best;
}

CertificateReport stability_experiment(const ModelContext& ctx, uint64_t seed, int count) {
    CertificateReport r;
    r.theorem = "experiment_stability";
    r.seed = seed;
    r.exploratory = true;
    Rng rng(seed);
    const auto& rho = ctx.reference_density.weights;
    for (int k = 0; k < count; ++k) {
        const double eps = k % 2 ? rng.uniform(0.02, 0.3) : 0.0;
        const auto u = random_admissible(ctx, rng, 6, eps);
        const std::string tag = "u" + std::to_string(k) + ":";
        r.constant(tag + "entropy", entropy(ctx, u).as_double());
        const auto basis = perturbation_basis(ctx, u);
        for (double t : {1e-3, 1e-2, 1e-1}) {
            const auto p = perturbed_ma(ctx, u, t, basis);
            // largest interior cell relative to the perturbed reference cell
            double worst = 0;
            for (size_t i = 0; i < rho.size(); ++i)
                if (!ctx.domain.on_boundary(i) && rho[i] > 0)
                    worst = std::max(worst, p.direct[i] / (std::pow(1 + t, ctx.dim()) * ctx.reference_cells[i]));
            r.constant(tag + "atom_ratio@" + format_number(t), worst);
        }
    }
    r.notes.push_back("exploratory: a ratio above 50 at every eps marks a node that stays atomic after perturbation");
    return r;
}

}  // namespace torapot
