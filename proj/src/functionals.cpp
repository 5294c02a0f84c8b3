#include "torapot/functionals.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "torapot/ma.hpp"

namespace torapot {

namespace {

// Sum in a canonical order, so permuted inputs give identical results.
double sorted_sum(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    double s = 0;
    for (double x : v) s += x;
    return s;
}

// sum_{k=1}^{K} k^{-2}; the tail beyond 1000 by Euler-Maclaurin
double inverse_square_sum(double K) {
    double s = 0;
    const double direct = std::min(K, 1000.0);
    for (double k = direct; k >= 1; --k) s += 1 / (k * k);
    if (K > direct) {
        auto tail = [](double m) { return 1 / m + 1 / (2 * m * m) + 1 / (6 * m * m * m) - 1 / (30 * std::pow(m, 5)); };
        s += tail(direct + 1) - tail(K + 1);
    }
    return s;
}

// largest k with tail <= 1/k, evaluated the same way the selection rule is
double run_end(double tail) {
    double k = std::floor(1.0 / tail);
    while (k > 1 && tail > 1.0 / k) --k;
    while (tail <= 1.0 / (k + 1)) ++k;
    return k;
}

}  // namespace

double ExtReal::as_double() const { return infinite ? std::numeric_limits<double>::infinity() : value; }

std::string ExtReal::str() const {
    if (infinite) return "INF";
    std::ostringstream s;
    s.precision(17);
    s << value;
    return s.str();
}

ExtReal energy_chi(const ModelContext& ctx, const ScalarField& u, const ScalarField& phi, const Weight& chi) {
    require_same_domain(u.domain, phi.domain);
    return energy_chi(ma_measure(ctx, u), mass(ctx, phi), u, phi, chi);
}

ExtReal energy_chi(const DiscreteMeasure& mu, double mp, const ScalarField& u, const ScalarField& phi,
                   const Weight& chi) {
    if (std::fabs(mu.total() - mp) > 1e-8 * std::max(mp, mu.total()))
        throw std::domain_error("energy_chi: mass(u) differs from mass(phi)");
    std::vector<double> terms;
    for (size_t i = 0; i < u.size(); ++i) {
        const double w = mu.weights[i];
        if (w == 0) continue;
        if (phi.masked(i)) return ExtReal::inf();
        terms.push_back(chi(std::fabs(u.values[i] - phi.values[i])) * w);
    }
    return ExtReal::finite(std::accumulate(terms.begin(), terms.end(), 0.0));
}

ExtReal entropy_of(const DiscreteMeasure& m) {
    if (!m.density_wrt) throw std::invalid_argument("entropy: measure has no density");
    const double total = m.total();
    if (!(total > 0)) throw std::domain_error("entropy: zero mass");
    if (m.singular_mass > 1e-8 * total) return ExtReal::inf();
    const auto& rho = m.density_wrt->weights;
    std::vector<double> terms;
    for (size_t i = 0; i < rho.size(); ++i) {
        const double f = m.density[i];
        if (f > 0) terms.push_back(f * std::log(f) * rho[i]);
    }
    return ExtReal::finite(sorted_sum(std::move(terms)) / total - std::log(total));
}

ExtReal entropy(const ModelContext& ctx, const ScalarField& u) { return entropy_of(ma_density(ctx, u)); }

ExtReal rel_entropy(const std::vector<double>& mu, const std::vector<double>& nu) {
    if (mu.size() != nu.size()) throw std::invalid_argument("rel_entropy: size mismatch");
    std::vector<double> terms;
    for (size_t i = 0; i < mu.size(); ++i) {
        if (!(mu[i] > 0)) continue;
        if (!(nu[i] > 0)) return ExtReal::inf();
        terms.push_back(mu[i] * std::log(mu[i] / nu[i]));
    }
    return ExtReal::finite(sorted_sum(std::move(terms)));
}

ExtReal rel_entropy(const DiscreteMeasure& mu, const DiscreteMeasure& nu, bool normalize) {
    require_same_domain(mu.domain, nu.domain);
    auto check = [&](const DiscreteMeasure& m) {
        if (std::fabs(m.total() - 1) > 1e-10) {
            if (!normalize) throw std::invalid_argument("rel_entropy: input is not a probability measure");
            return m.normalized();
        }
        return m;
    };
    const DiscreteMeasure a = check(mu), b = check(nu);
    if (a.singular_mass > 0) return ExtReal::inf();
    return rel_entropy(a.weights, b.weights);
}

ConstructedWeight construct_weight_from_gaps(const std::vector<double>& gaps, const std::vector<double>& masses) {
    if (gaps.size() != masses.size() || gaps.empty()) throw std::invalid_argument("construct_weight: bad gap table");
    // distinct gap values with the mass sitting at each
    std::vector<size_t> order(gaps.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](size_t a, size_t b) { return gaps[a] < gaps[b]; });
    std::vector<double> g, w;
    for (size_t k : order) {
        if (!(masses[k] > 0)) continue;
        if (!(gaps[k] >= 1) || !std::isfinite(gaps[k])) throw std::invalid_argument("construct_weight: gaps must be finite and >= 1");
        if (!g.empty() && g.back() == gaps[k]) w.back() += masses[k];
        else {
            g.push_back(gaps[k]);
            w.push_back(masses[k]);
        }
    }
    if (g.empty()) throw std::invalid_argument("construct_weight: measure is zero");
    const double total = std::accumulate(w.begin(), w.end(), 0.0);
    // tail[k] = mu(gap > g[k]); tail before g[0] is the full mass
    std::vector<double> tail(g.size());
    double acc = 0;
    for (size_t k = g.size(); k-- > 0;) {
        tail[k] = acc / total;
        acc += w[k];
    }
    const double tstar = g.back();
    ConstructedWeight out;
    // t_k is the smallest gap value >= 1 with mu(gap > t_k) <= 1/k. A value
    // g_j serves every k up to 1 / tail_j, so k jumps straight past runs.
    out.t.push_back(1.0);
    out.k.push_back(1);
    double k = 1;
    {
        // t_1 = 1 may repeat when mu(gap > 1) is already small
        auto it = std::upper_bound(g.begin(), g.end(), 1.0);
        const double above = it == g.begin() ? 1.0 : tail[static_cast<size_t>(it - g.begin()) - 1];
        if (above > 0) k = std::max(1.0, run_end(above));
    }
    while (out.t.back() < tstar) {
        size_t j = 0;
        while (j < g.size() && (g[j] <= out.t.back() || tail[j] > 1.0 / (k + 1))) ++j;
        const double next_k = k + 1;
        out.t.push_back(g[j]);
        out.k.push_back(next_k);
        k = tail[j] > 0 ? std::max(next_k, run_end(tail[j])) : next_k;
    }
    out.K = out.k.back();
    out.truncated = true;
    out.h.assign(out.t.size(), 0.0);
    // the interval after t's run is I_k for the run's last index k
    for (size_t r = 0; r + 1 < out.t.size(); ++r) {
        const double last = out.k[r + 1] - 1;
        out.h[r] = 1.0 / (last * last * (out.t[r + 1] - out.t[r]));
    }
    out.series = inverse_square_sum(out.K - 1);
    // chi = int h psi with psi = 1 / mu(gap > s), a step function with
    // jumps at the gap values; knots at every jump and every t_k
    auto mu_above = [&](double s) {
        auto it = std::upper_bound(g.begin(), g.end(), s);
        return it == g.begin() ? 1.0 : tail[static_cast<size_t>(it - g.begin()) - 1];
    };
    auto h_at = [&](double s) {
        if (s < 1) return 1.0;
        auto it = std::upper_bound(out.t.begin(), out.t.end(), s);
        return out.h[static_cast<size_t>(it - out.t.begin()) - 1];
    };
    std::vector<double> knots{0.0, 1.0};
    for (double x : g)
        if (x > 1) knots.push_back(x);
    for (double x : out.t) knots.push_back(x);
    std::sort(knots.begin(), knots.end());
    knots.erase(std::unique(knots.begin(), knots.end()), knots.end());
    std::vector<double> ts{0.0}, vs{0.0};
    double last_slope = 1;
    for (size_t k = 0; k + 1 < knots.size(); ++k) {
        const double a = knots[k], b = knots[k + 1];
        const double slope = h_at(a) / mu_above(a);
        if (slope > 0) last_slope = slope;
        ts.push_back(b);
        vs.push_back(vs.back() + slope * (b - a));
    }
    // beyond t* psi is undefined: pad with the last slope
    ts.push_back(ts.back() + 1);
    vs.push_back(vs.back() + last_slope);
    out.chi = weight_table(std::move(ts), std::move(vs));
    out.bound = out.chi(1.0) + out.series;
    std::vector<double> terms(g.size());
    for (size_t k = 0; k < g.size(); ++k) terms[k] = out.chi(g[k]) * w[k] / total;
    out.integral = std::accumulate(terms.begin(), terms.end(), 0.0);
    return out;
}

ConstructedWeight construct_weight(const ModelContext&, const ScalarField& u, const ScalarField& phi,
                                   const DiscreteMeasure& mu) {
    require_same_domain(u.domain, phi.domain);
    require_same_domain(u.domain, mu.domain);
    const double s = sup_rel(u, phi);
    std::vector<double> gaps, masses;
    for (size_t i = 0; i < u.size(); ++i) {
        if (!(mu.weights[i] > 0) || phi.masked(i)) continue;
        if (u.masked(i)) throw std::domain_error("construct_weight: measure charges a pole of u");
        // gap after shifting u so that sup(u - phi) = -1
        gaps.push_back(std::max(1.0, phi.values[i] - u.values[i] + s + 1));
        masses.push_back(mu.weights[i]);
    }
    return construct_weight_from_gaps(gaps, masses);
}

double conj_pair(double t) {
    if (!(t >= 0)) throw std::invalid_argument("conj_pair: t must be nonnegative");
    return std::expm1(t) - t;
}

double conj_weight(double s) {
    if (!(s >= 0)) throw std::invalid_argument("conj_weight: s must be nonnegative");
    return (s + 1) * std::log1p(s) - s;
}

double conj_slack(double s, double t) { return conj_weight(s) + conj_pair(t) - s * t; }

bool conj_inequality_check(double s, double t) {
    // equality holds at t = log(1 + s); allow rounding there
    return conj_slack(s, t) >= -1e-12 * (1 + s * t);
}

}  // namespace torapot
